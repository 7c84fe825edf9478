#include "bsc/complex.hpp"

#include <algorithm>
#include <cassert>

namespace bsc {

namespace {
template <class V, class Id>
auto find_by_id(V& v, Id id) -> decltype(&v.front()) {
  for (auto& x : v)
    if (x.id == id) return &x;
  return nullptr;
}
}  // namespace

const Vertex* BranchComplex::find_vertex(VertexId id) const { return find_by_id(vertices, id); }
const Edge* BranchComplex::find_edge(EdgeId id) const { return find_by_id(edges, id); }
const Cell* BranchComplex::find_cell(CellId id) const { return find_by_id(cells, id); }
Vertex* BranchComplex::find_vertex(VertexId id) { return find_by_id(vertices, id); }
Edge* BranchComplex::find_edge(EdgeId id) { return find_by_id(edges, id); }
Cell* BranchComplex::find_cell(CellId id) { return find_by_id(cells, id); }

VertexId BranchComplex::fresh_vertex_id() const {
  VertexId m = 0;
  for (const auto& v : vertices) m = std::max(m, v.id);
  return m + 1;
}
EdgeId BranchComplex::fresh_edge_id() const {
  EdgeId m = 0;
  for (const auto& e : edges) m = std::max(m, e.id);
  return m + 1;
}
CellId BranchComplex::fresh_cell_id() const {
  CellId m = 0;
  for (const auto& c : cells) m = std::max(m, c.id);
  return m + 1;
}

void BranchComplex::sort_entities() {
  std::sort(vertices.begin(), vertices.end(), [](auto& a, auto& b) { return a.id < b.id; });
  std::sort(edges.begin(), edges.end(), [](auto& a, auto& b) { return a.id < b.id; });
  std::sort(cells.begin(), cells.end(), [](auto& a, auto& b) { return a.id < b.id; });
}

VertexId walk_from(const BranchComplex& c, std::int64_t entry) {
  const Edge* e = c.find_edge(entry_edge(entry));
  if (!e) throw ComplexError("E_REF", "boundary entry names unknown edge");
  return entry_forward(entry) ? e->ends[0] : e->ends[1];
}

VertexId walk_to(const BranchComplex& c, std::int64_t entry) {
  const Edge* e = c.find_edge(entry_edge(entry));
  if (!e) throw ComplexError("E_REF", "boundary entry names unknown edge");
  return entry_forward(entry) ? e->ends[1] : e->ends[0];
}

std::vector<OccRef> occurrences(const BranchComplex& c, EdgeId e) {
  std::vector<OccRef> out;
  for (const auto& cell : c.cells)
    for (int w = 0; w < static_cast<int>(cell.boundary.size()); ++w)
      for (int i = 0; i < static_cast<int>(cell.boundary[static_cast<std::size_t>(w)].size()); ++i)
        if (entry_edge(cell.boundary[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)]) == e)
          out.push_back({cell.id, w, i});
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t entry_at(const BranchComplex& c, const OccRef& o) {
  const Cell* cell = c.find_cell(o.cell);
  if (!cell) throw ComplexError("E_REF", "occurrence names unknown cell");
  if (o.word < 0 || o.word >= static_cast<int>(cell->boundary.size()))
    throw ComplexError("E_REF", "occurrence word out of range");
  const auto& w = cell->boundary[static_cast<std::size_t>(o.word)];
  if (o.pos < 0 || o.pos >= static_cast<int>(w.size()))
    throw ComplexError("E_REF", "occurrence position out of range");
  return w[static_cast<std::size_t>(o.pos)];
}

Slot slot_of(const BranchComplex& c, EdgeId e, const OccRef& o) {
  const Edge* ed = c.find_edge(e);
  if (!ed) throw ComplexError("E_REF", "unknown edge");
  if (ed->kind == EdgeKind::auxiliary) return Slot::aux;
  if (ed->branch_side && *ed->branch_side == o) return Slot::front;
  if (ed->stop_side && *ed->stop_side == o) return Slot::back_stop;
  return Slot::back_other;
}

OccRef upper_back(const BranchComplex& c, EdgeId e) {
  const Edge* ed = c.find_edge(e);
  if (!ed || ed->kind != EdgeKind::singular || !ed->stop_side || !ed->attach_level)
    throw ComplexError("E_REF", "upper_back needs an annotated singular edge");
  if (*ed->attach_level == AttachLevel::above) return *ed->stop_side;
  for (const auto& o : occurrences(c, e))
    if (slot_of(c, e, o) == Slot::back_other) return o;
  throw ComplexError("E_REF", "singular edge has no free back occurrence");
}

OccRef lower_back(const BranchComplex& c, EdgeId e) {
  const Edge* ed = c.find_edge(e);
  if (!ed || ed->kind != EdgeKind::singular || !ed->stop_side || !ed->attach_level)
    throw ComplexError("E_REF", "lower_back needs an annotated singular edge");
  if (*ed->attach_level == AttachLevel::below) return *ed->stop_side;
  for (const auto& o : occurrences(c, e))
    if (slot_of(c, e, o) == Slot::back_other) return o;
  throw ComplexError("E_REF", "singular edge has no free back occurrence");
}

std::vector<EndRef> singular_ends_at(const BranchComplex& c, VertexId v) {
  std::vector<EndRef> out;
  for (const auto& e : c.edges) {
    if (e.kind != EdgeKind::singular) continue;
    for (int i = 0; i < 2; ++i)
      if (e.ends[static_cast<std::size_t>(i)] == v) out.push_back({e.id, i});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EndRef> ends_at(const BranchComplex& c, VertexId v) {
  std::vector<EndRef> out;
  for (const auto& e : c.edges)
    for (int i = 0; i < 2; ++i)
      if (e.ends[static_cast<std::size_t>(i)] == v) out.push_back({e.id, i});
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> strand_index(const BranchComplex& c, const Vertex& v, EndRef end) {
  (void)c;
  if (!v.dp) return std::nullopt;
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < 2; ++k)
      if (v.dp->strands[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)] == end)
        return s + 1;
  return std::nullopt;
}

std::optional<EndRef> strand_continuation(const BranchComplex& c, VertexId v, EndRef in) {
  const Vertex* vx = c.find_vertex(v);
  if (!vx) return std::nullopt;
  if (vx->kind == VertexKind::double_point && vx->dp) {
    for (const auto& strand : vx->dp->strands) {
      if (strand[0] == in) return strand[1];
      if (strand[1] == in) return strand[0];
    }
    return std::nullopt;
  }
  auto ends = singular_ends_at(c, v);
  if (ends.size() != 2) return std::nullopt;
  if (ends[0] == in) return ends[1];
  if (ends[1] == in) return ends[0];
  return std::nullopt;
}

std::optional<CornerStep> corner_step(const BranchComplex& c, const OccRef& o, EndRef germ) {
  const Cell* cell = c.find_cell(o.cell);
  if (!cell) return std::nullopt;
  const auto& word = cell->boundary[static_cast<std::size_t>(o.word)];
  const auto& corners = cell->corners[static_cast<std::size_t>(o.word)];
  const int n = static_cast<int>(word.size());
  std::int64_t entry = word[static_cast<std::size_t>(o.pos)];
  if (entry_edge(entry) != germ.edge) return std::nullopt;
  const bool fwd = entry_forward(entry);
  // the walk arrives at the germ when it is the entry's head-as-walked
  const bool arrives = (fwd && germ.end == 1) || (!fwd && germ.end == 0);
  CornerStep st;
  if (arrives) {
    const int ci = o.pos;
    const int np = (o.pos + 1) % n;
    std::int64_t nxt = word[static_cast<std::size_t>(np)];
    st.partner = {entry_edge(nxt), entry_forward(nxt) ? 0 : 1};
    st.corner = {o.cell, o.word, ci};
    st.quadrants = corners[static_cast<std::size_t>(ci)];
  } else {
    const int ci = (o.pos - 1 + n) % n;
    std::int64_t prv = word[static_cast<std::size_t>(ci)];
    st.partner = {entry_edge(prv), entry_forward(prv) ? 1 : 0};
    st.corner = {o.cell, o.word, ci};
    st.quadrants = corners[static_cast<std::size_t>(ci)];
  }
  return st;
}

bool fronts_toward(const BranchComplex& c, VertexId v, EndRef germ) {
  const Vertex* vx = c.find_vertex(v);
  if (!vx) return false;
  const Edge* at = c.find_edge(germ.edge);
  if (!at || at->ends[static_cast<std::size_t>(germ.end)] != v) return false;

  // pick the tested strand
  std::array<EndRef, 2> strand{};
  if (vx->kind == VertexKind::double_point && vx->dp) {
    if (at->kind != EdgeKind::singular) return false;  // aux germs at double points unsupported
    auto si = strand_index(c, *vx, germ);
    if (!si) return false;
    strand = vx->dp->strands[static_cast<std::size_t>(2 - *si)];  // the other strand
  } else {
    if (at->kind == EdgeKind::singular) return false;  // the only strand is the germ's own
    auto ends = singular_ends_at(c, v);
    if (ends.size() != 2) return false;
    strand = {ends[0], ends[1]};
  }

  // walk the front corner chain of the strand from its first germ
  const Edge* e1 = c.find_edge(strand[0].edge);
  if (!e1 || !e1->branch_side) return false;
  auto step = corner_step(c, *e1->branch_side, strand[0]);
  if (!step) return false;
  EndRef cur = step->partner;
  int guard = static_cast<int>(c.edges.size()) * 2 + 4;
  while (guard-- > 0) {
    if (cur == strand[1]) return false;  // chain closed without meeting the germ
    if (cur == germ) return true;
    const Edge* f = c.find_edge(cur.edge);
    if (!f || f->kind != EdgeKind::auxiliary) {
      // at a double point the chain crosses exactly one transverse germ; on it
      // the front chain ends at the other strand germ next, so a singular
      // in-chain germ can only be the tested one.
      return false;
    }
    // continue across the auxiliary germ: use its other occurrence's corner
    auto occs = occurrences(c, cur.edge);
    std::optional<CornerStep> next;
    for (const auto& oc : occs) {
      auto cs = corner_step(c, oc, cur);
      if (!cs) continue;
      if (cs->corner == step->corner) continue;  // the arc we arrived on
      next = cs;
    }
    if (!next) return false;
    step = next;
    cur = step->partner;
  }
  return false;
}

}  // namespace bsc
