#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bsc/classify.hpp"
#include "bsc/complex.hpp"

namespace bsc {

// Corner-transition graph of the singular locus: one node per directed
// singular edge, smooth arcs for strand continuations, corner arcs for the
// vertical jumps at double points.

enum class ArcLabel { smooth, ascending, descending };
enum class Polarity { positive, negative };

struct TransitionNode {
  EdgeId edge = 0;
  bool forward = true;  // tail -> head
  bool operator==(const TransitionNode&) const = default;
  auto operator<=>(const TransitionNode&) const = default;
};

struct TransitionArc {
  int from = 0;
  int to = 0;
  ArcLabel label = ArcLabel::smooth;
  VertexId at = 0;      // turning vertex
  int corner_sign = 0;  // double point sign for corner arcs
  bool operator==(const TransitionArc&) const = default;
};

struct TransitionGraph {
  std::vector<TransitionNode> nodes;  // sorted; index = node id
  std::vector<TransitionArc> arcs;    // sorted by (from, to, label)
  int node_id(const TransitionNode& n) const;
  std::vector<int> out_arcs(int node) const;  // arc indices, ascending
};

TransitionGraph build_transition_graph(const BranchComplex& c);

struct WitnessStep {
  int node = 0;
  ArcLabel label_to_next = ArcLabel::smooth;  // arc leaving this node
  VertexId at = 0;
  bool operator==(const WitnessStep&) const = default;
};

struct TwistedWitness {
  Polarity polarity = Polarity::positive;
  std::vector<WitnessStep> steps;  // cyclic
  int corner_count() const;
  bool operator==(const TwistedWitness&) const = default;
};

// Checks the closed-walk / label conditions; simple = no node repeats.
bool witness_valid(const TwistedWitness& w, const TransitionGraph& g);
bool witness_simple(const TwistedWitness& w);

// Cycle search in the smooth + one-polarity subgraph; the returned witness is
// simplified.  Deterministic: arcs scanned in ascending order.
std::optional<TwistedWitness> find_twisted_curve(const TransitionGraph& g, Polarity p);

// Lemma-style shortening: excise repeated sub-loops keeping a corner until
// only corners repeat.  corner_trace, when given, records the corner count
// after each corner-reducing excision.
TwistedWitness extract_simple(const TwistedWitness& w, const TransitionGraph& g,
                              std::vector<int>* corner_trace = nullptr);

// First cell (ascending id) classified as a twisted disk of contact.
std::optional<std::pair<CellId, int>> nonport_obstruction(const BranchComplex& c);

}  // namespace bsc
