#include "bsc/classify.hpp"

namespace bsc {

bool smooth_transition(const BranchComplex& c, const Cell& cell, int word, int pos) {
  const auto& w = cell.boundary[static_cast<std::size_t>(word)];
  const int n = static_cast<int>(w.size());
  auto cur = w[static_cast<std::size_t>(pos)];
  auto nxt = w[static_cast<std::size_t>((pos + 1) % n)];
  VertexId v = walk_to(c, cur);
  EndRef in{entry_edge(cur), entry_forward(cur) ? 1 : 0};
  EndRef out{entry_edge(nxt), entry_forward(nxt) ? 0 : 1};
  auto cont = strand_continuation(c, v, in);
  return cont && *cont == out;
}

CellClass classify_cell(const BranchComplex& c, CellId cell_id) {
  const Cell* cell = c.find_cell(cell_id);
  if (!cell) throw ComplexError("E_REF", "unknown cell " + std::to_string(cell_id));

  bool all_front = true;
  for (int w = 0; w < static_cast<int>(cell->boundary.size()) && all_front; ++w)
    for (int i = 0; i < static_cast<int>(cell->boundary[static_cast<std::size_t>(w)].size()); ++i) {
      auto entry = cell->boundary[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)];
      const Edge* e = c.find_edge(entry_edge(entry));
      if (!e || e->kind != EdgeKind::singular || !e->branch_side ||
          !(*e->branch_side == OccRef{cell_id, w, i})) {
        all_front = false;
        break;
      }
    }
  if (!all_front) return {CellKind::plain, 0};

  int corners = 0;
  bool quadrant_corners = true;
  std::optional<int> sign;
  bool signs_agree = true;
  for (int w = 0; w < static_cast<int>(cell->boundary.size()); ++w) {
    const auto& word = cell->boundary[static_cast<std::size_t>(w)];
    for (int i = 0; i < static_cast<int>(word.size()); ++i) {
      if (smooth_transition(c, *cell, w, i)) continue;
      ++corners;
      if (cell->corners[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)] != 1)
        quadrant_corners = false;
      VertexId v = walk_to(c, word[static_cast<std::size_t>(i)]);
      const Vertex* vx = c.find_vertex(v);
      if (!vx || vx->kind != VertexKind::double_point || !vx->dp) {
        quadrant_corners = false;
        continue;
      }
      if (!sign)
        sign = vx->dp->sign;
      else if (*sign != vx->dp->sign)
        signs_agree = false;
    }
  }

  if (corners == 0) return {CellKind::surface_of_contact, 0};
  const bool disk = cell->genus == 0 && cell->boundary.size() == 1;
  if (disk && quadrant_corners && signs_agree && sign)
    return {CellKind::twisted_disk_of_contact, *sign};
  return {CellKind::sink_surface, 0};
}

}  // namespace bsc
