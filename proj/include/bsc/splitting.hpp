#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bsc/complex.hpp"

namespace bsc {

enum class Variant { neutral, over, under };

struct SplitMove {
  CellId cell = 0;
  OccRef start;  // front occurrence of the start edge on this cell
  OccRef end;    // front occurrence of the end edge
  Variant variant = Variant::neutral;
};

struct SplitOutcome {
  BranchComplex complex;
  // new entities, for bookkeeping and tests
  VertexId p_g = 0, p_d = 0, q_g = 0, q_d = 0;
  EdgeId s_g = 0, s_d = 0, t_g = 0, t_d = 0, a_g = 0, a_d = 0;
  EdgeId t_m = 0, cap = 0;  // over/under only
};

// All unordered pairs of front occurrences on the cell's boundary
// (face-to-face positions), ascending.
std::vector<std::pair<OccRef, OccRef>> find_face_to_face_arcs(const BranchComplex& c, CellId cell);

// Local surgery along the face-to-face arc from the start to the end anchor.
// Neutral opens both mouths and reroutes the strands smoothly (no new double
// points); over/under keep the far edge's middle singular and cross it at two
// fresh double points of opposite signs.  Throws ComplexError("E_NOT_F2F") on
// bad anchors.
SplitOutcome apply_split(const BranchComplex& c, const SplitMove& m);

struct AdaptedResult {
  Variant variant = Variant::neutral;
  SplitOutcome outcome;
};

// Tries neutral, over, under and returns the first whose result carries no
// twisted curve.  Throws ComplexError("E_HAS_TWISTED") when the input already
// has one, ComplexError("E_THEOREM_VIOLATION") when no variant is adapted.
AdaptedResult adapted_variant(const BranchComplex& c, CellId cell, const OccRef& start,
                              const OccRef& end);

}  // namespace bsc
