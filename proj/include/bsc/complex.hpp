#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsc {

// Combinatorial model of an orientable branched surface: the singular locus
// as an annotated graph plus the sector decomposition.  Boundary words run
// counterclockwise (cell on the left); the front side of a singular edge is
// traversed opposite to its two back sides.

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;  // >= 1 so signed ids work in boundary words
using CellId = std::uint32_t;

enum class VertexKind { double_point, subdivision };
enum class EdgeKind { singular, auxiliary };
enum class AttachLevel { above, below };

struct EndRef {
  EdgeId edge = 0;
  int end = 0;  // 0 = tail (ends[0]), 1 = head (ends[1])
  bool operator==(const EndRef&) const = default;
  auto operator<=>(const EndRef&) const = default;
};

struct OccRef {
  CellId cell = 0;
  int word = 0;
  int pos = 0;
  bool operator==(const OccRef&) const = default;
  auto operator<=>(const OccRef&) const = default;
};

struct DoublePointData {
  int sign = 1;            // +1 / -1
  int over_strand = 1;     // 1 or 2
  std::array<std::array<EndRef, 2>, 2> strands{};  // strand 1 = strands[0]
  bool operator==(const DoublePointData&) const = default;
};

struct Vertex {
  VertexId id = 0;
  VertexKind kind = VertexKind::subdivision;
  std::optional<DoublePointData> dp;
  bool operator==(const Vertex&) const = default;
};

struct Edge {
  EdgeId id = 0;
  std::array<VertexId, 2> ends{};  // tail, head
  EdgeKind kind = EdgeKind::auxiliary;
  std::optional<OccRef> branch_side;        // singular: the front occurrence
  std::optional<OccRef> stop_side;          // singular: the stopping back occurrence
  std::optional<AttachLevel> attach_level;  // stopping sheet above/below the other back
  bool operator==(const Edge&) const = default;
};

struct Cell {
  CellId id = 0;
  // one cyclic word per boundary component; entries are signed edge ids
  std::vector<std::vector<std::int64_t>> boundary;
  // corners[w][i] = quadrant count of the transition boundary[w][i] -> [i+1]
  std::vector<std::vector<int>> corners;
  std::uint32_t genus = 0;
  bool operator==(const Cell&) const = default;
};

struct Meta {
  std::string name, source, comment;
  bool operator==(const Meta&) const = default;
};

struct BranchComplex {
  Meta meta;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Cell> cells;
  bool operator==(const BranchComplex&) const = default;

  const Vertex* find_vertex(VertexId id) const;
  const Edge* find_edge(EdgeId id) const;
  const Cell* find_cell(CellId id) const;
  Vertex* find_vertex(VertexId id);
  Edge* find_edge(EdgeId id);
  Cell* find_cell(CellId id);

  VertexId fresh_vertex_id() const;
  EdgeId fresh_edge_id() const;
  CellId fresh_cell_id() const;

  void sort_entities();  // ascending ids, for deterministic output
};

struct ComplexError : std::runtime_error {
  std::string code;
  ComplexError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

// --- boundary word helpers ----------------------------------------------

inline EdgeId entry_edge(std::int64_t e) { return static_cast<EdgeId>(e < 0 ? -e : e); }
inline bool entry_forward(std::int64_t e) { return e > 0; }
inline std::int64_t make_entry(EdgeId id, bool forward) {
  return forward ? static_cast<std::int64_t>(id) : -static_cast<std::int64_t>(id);
}

// tail/head of a boundary entry as walked
VertexId walk_from(const BranchComplex& c, std::int64_t entry);
VertexId walk_to(const BranchComplex& c, std::int64_t entry);

// All occurrence slots of an edge across all boundary words, sorted.
std::vector<OccRef> occurrences(const BranchComplex& c, EdgeId e);

std::int64_t entry_at(const BranchComplex& c, const OccRef& o);

// Slot classification for a singular edge occurrence.
enum class Slot { front, back_stop, back_other, aux };
Slot slot_of(const BranchComplex& c, EdgeId e, const OccRef& o);
// The back occurrence that is vertically above / below the other one.
OccRef upper_back(const BranchComplex& c, EdgeId e);
OccRef lower_back(const BranchComplex& c, EdgeId e);

// Strand continuation: the other end of the smooth strand through vertex v
// entered along `in`.  Returns nullopt when there is none.
std::optional<EndRef> strand_continuation(const BranchComplex& c, VertexId v, EndRef in);

// strand index (1 or 2) of a singular end at a double point
std::optional<int> strand_index(const BranchComplex& c, const Vertex& v, EndRef end);

// singular edge-ends incident at v, sorted by (edge, end)
std::vector<EndRef> singular_ends_at(const BranchComplex& c, VertexId v);
// all edge-ends incident at v, sorted
std::vector<EndRef> ends_at(const BranchComplex& c, VertexId v);

// The corner adjacent to occurrence `o` at its `germ` end: the partner germ
// reached by the corner arc, plus the corner's (word, index) slot.
struct CornerStep {
  EndRef partner;
  OccRef corner;  // the transition slot (pos = corner index)
  int quadrants = 2;
};
std::optional<CornerStep> corner_step(const BranchComplex& c, const OccRef& o, EndRef germ);

// Stage-one mark rule: the strand through v not carrying `germ.edge` (or the
// strand itself when `germ.edge` is auxiliary) points its branch direction
// toward the germ.
bool fronts_toward(const BranchComplex& c, VertexId v, EndRef germ);

}  // namespace bsc
