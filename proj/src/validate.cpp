#include "bsc/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bsc {

namespace {

struct Corner {
  OccRef slot;  // transition slot: pos = corner index within the word
  EndRef in, out;
  int quadrants = 2;
};

std::string loc_vertex(VertexId v) { return "vertex " + std::to_string(v); }
std::string loc_edge(EdgeId e) { return "edge " + std::to_string(e); }
std::string loc_cell(CellId c) { return "cell " + std::to_string(c); }

}  // namespace

bool ValidationReport::refined() const {
  for (const auto& w : warnings)
    if (w.code == "W_LOOP_EDGE" || w.code == "W_NOT_DISK") return false;
  return true;
}

ValidationReport validate_complex(const BranchComplex& c) {
  ValidationReport rep;
  auto err = [&](std::string code, std::string loc, std::string msg) {
    rep.errors.push_back({std::move(code), std::move(loc), std::move(msg)});
  };
  auto warn = [&](std::string code, std::string loc, std::string msg) {
    rep.warnings.push_back({std::move(code), std::move(loc), std::move(msg)});
  };

  // shape: boundary/corner alignment (parse guarantees it; re-check for
  // programmatically built complexes)
  bool shape_ok = true;
  for (const auto& cell : c.cells) {
    if (cell.corners.size() != cell.boundary.size()) {
      err("E_SHAPE", loc_cell(cell.id), "corner words do not align with boundary words");
      shape_ok = false;
      continue;
    }
    for (std::size_t w = 0; w < cell.boundary.size(); ++w) {
      if (cell.boundary[w].empty()) {
        err("E_SHAPE", loc_cell(cell.id), "empty boundary word");
        shape_ok = false;
      } else if (cell.corners[w].size() != cell.boundary[w].size()) {
        err("E_SHAPE", loc_cell(cell.id), "corner counts do not align with boundary entries");
        shape_ok = false;
      } else {
        for (int q : cell.corners[w])
          if (q < 1 || q > 3) {
            err("E_SHAPE", loc_cell(cell.id), "corner quadrant count outside {1,2,3}");
            shape_ok = false;
          }
      }
      for (auto entry : cell.boundary[w])
        if (!c.find_edge(entry_edge(entry))) {
          err("E_REF", loc_cell(cell.id), "boundary references unknown edge");
          shape_ok = false;
        }
    }
  }
  if (!shape_ok) return rep;

  // closed cyclic walks
  for (const auto& cell : c.cells) {
    for (std::size_t w = 0; w < cell.boundary.size(); ++w) {
      const auto& word = cell.boundary[w];
      for (std::size_t i = 0; i < word.size(); ++i) {
        auto nxt = word[(i + 1) % word.size()];
        if (walk_to(c, word[i]) != walk_from(c, nxt))
          err("E_BOUNDARY_WALK", loc_cell(cell.id) + " word " + std::to_string(w),
              "boundary word is not a closed walk at position " + std::to_string(i));
      }
    }
  }

  // side counts: singular edges carry three cell sides, auxiliary one or two
  for (const auto& e : c.edges) {
    auto occs = occurrences(c, e.id);
    if (e.kind == EdgeKind::singular) {
      if (occs.size() != 3)
        err("E_EDGE_SIDES", loc_edge(e.id),
            "singular edge appears on " + std::to_string(occs.size()) + " cell sides, expected 3");
    } else {
      if (occs.size() < 1 || occs.size() > 2)
        err("E_EDGE_SIDES", loc_edge(e.id),
            "auxiliary edge appears on " + std::to_string(occs.size()) + " cell sides, expected 1 or 2");
    }
  }

  // branch_side / stop_side name occurrences of the edge itself
  for (const auto& e : c.edges) {
    if (e.kind != EdgeKind::singular) continue;
    if (!e.branch_side || !e.stop_side || !e.attach_level) {
      err("E_BRANCH_SIDE", loc_edge(e.id), "singular edge is missing branch annotations");
      continue;
    }
    bool bs_ok = true, ss_ok = true;
    try {
      bs_ok = entry_edge(entry_at(c, *e.branch_side)) == e.id;
    } catch (const ComplexError&) {
      bs_ok = false;
    }
    try {
      ss_ok = entry_edge(entry_at(c, *e.stop_side)) == e.id;
    } catch (const ComplexError&) {
      ss_ok = false;
    }
    if (!bs_ok)
      err("E_BRANCH_SIDE", loc_edge(e.id), "branch_side does not name a side of this edge");
    if (!ss_ok)
      err("E_STOP_SIDE", loc_edge(e.id), "stop_side does not name a side of this edge");
    if (bs_ok && ss_ok && *e.branch_side == *e.stop_side)
      err("E_STOP_SIDE", loc_edge(e.id), "stop_side coincides with branch_side");
  }

  // orientation coherence: the front side is traversed opposite to the backs;
  // two-sided auxiliary edges are traversed once in each direction
  for (const auto& e : c.edges) {
    auto occs = occurrences(c, e.id);
    if (e.kind == EdgeKind::singular) {
      if (occs.size() != 3 || !e.branch_side) continue;
      int fwd_front = 0, fwd_back = 0, backs = 0;
      for (const auto& o : occs) {
        bool f = entry_forward(entry_at(c, o));
        if (e.branch_side && o == *e.branch_side)
          fwd_front = f ? 1 : -1;
        else {
          ++backs;
          fwd_back += f ? 1 : -1;
        }
      }
      if (backs == 2 && (fwd_back != 2 * -fwd_front))
        err("E_ORIENTATION", loc_edge(e.id),
            "front side must be traversed opposite to both back sides");
    } else if (occs.size() == 2) {
      bool f0 = entry_forward(entry_at(c, occs[0]));
      bool f1 = entry_forward(entry_at(c, occs[1]));
      if (f0 == f1)
        err("E_ORIENTATION", loc_edge(e.id), "two-sided edge must be traversed once each way");
    }
  }

  // vertex degrees and strand partitions
  for (const auto& v : c.vertices) {
    auto sing = singular_ends_at(c, v.id);
    auto all = ends_at(c, v.id);
    if (v.kind == VertexKind::double_point) {
      if (sing.size() != 4)
        err("E_DP_DEGREE", loc_vertex(v.id),
            "double point has " + std::to_string(sing.size()) + " singular edge-ends, expected 4");
      if (all.size() != sing.size())
        err("E_DP_AUX", loc_vertex(v.id), "auxiliary edges may not end at a double point");
      if (!v.dp) {
        err("E_DP_STRANDS", loc_vertex(v.id), "double point carries no strand data");
        continue;
      }
      std::set<EndRef> declared;
      for (const auto& strand : v.dp->strands)
        for (const auto& end : strand) declared.insert(end);
      std::set<EndRef> incident(sing.begin(), sing.end());
      if (declared.size() != 4 || declared != incident)
        err("E_DP_STRANDS", loc_vertex(v.id),
            "strand pairing must partition the four incident singular edge-ends");
    } else {
      if (v.dp) err("E_DP_STRANDS", loc_vertex(v.id), "subdivision vertex carries strand data");
      if (sing.size() != 0 && sing.size() != 2)
        err("E_SUBDIV_DEGREE", loc_vertex(v.id),
            "subdivision vertex has " + std::to_string(sing.size()) +
                " singular edge-ends, expected 0 or 2");
    }
  }
  if (!rep.errors.empty()) return rep;  // corner model below assumes sane degrees

  // corner model at vertices of the singular locus
  std::map<VertexId, std::vector<Corner>> corners_at;
  for (const auto& cell : c.cells)
    for (int w = 0; w < static_cast<int>(cell.boundary.size()); ++w) {
      const auto& word = cell.boundary[static_cast<std::size_t>(w)];
      const auto& qs = cell.corners[static_cast<std::size_t>(w)];
      const int n = static_cast<int>(word.size());
      for (int i = 0; i < n; ++i) {
        auto cur = word[static_cast<std::size_t>(i)];
        auto nxt = word[static_cast<std::size_t>((i + 1) % n)];
        Corner cor;
        cor.slot = {cell.id, w, i};
        cor.in = {entry_edge(cur), entry_forward(cur) ? 1 : 0};
        cor.out = {entry_edge(nxt), entry_forward(nxt) ? 0 : 1};
        cor.quadrants = qs[static_cast<std::size_t>(i)];
        corners_at[walk_to(c, cur)].push_back(cor);
      }
    }

  for (const auto& v : c.vertices) {
    auto sing = singular_ends_at(c, v.id);
    const auto& cs = corners_at[v.id];
    auto touches = [&](const Corner& cor, EndRef g) { return cor.in == g || cor.out == g; };
    if (v.kind == VertexKind::double_point && v.dp) {
      int total = 0;
      int twos = 0;
      for (const auto& cor : cs) total += cor.quadrants, twos += cor.quadrants == 2;
      if (cs.size() != 6 || total != 8 || twos != 2) {
        err("E_CORNER_MODEL", loc_vertex(v.id),
            "double point must carry four quadrant corners and one back corner per strand");
        continue;
      }
      // each wide corner joins the two germs of one strand
      std::set<int> wide_strands;
      for (const auto& cor : cs) {
        auto si = strand_index(c, v, cor.in);
        auto so = strand_index(c, v, cor.out);
        if (!si || !so) {
          err("E_CORNER_MODEL", loc_vertex(v.id), "corner touches an end outside the strand data");
          continue;
        }
        if (cor.quadrants == 2) {
          if (*si != *so || cor.in == cor.out)
            err("E_CORNER_MODEL", loc_vertex(v.id), "wide corner must join the two ends of one strand");
          else
            wide_strands.insert(*si);
        } else if (cor.quadrants == 1) {
          if (*si == *so)
            err("E_CORNER_MODEL", loc_vertex(v.id), "quadrant corner must join the two strands");
        } else {
          err("E_CORNER_MODEL", loc_vertex(v.id), "double point corner of three quadrants");
        }
      }
      if (wide_strands.size() != 2)
        err("E_CORNER_MODEL", loc_vertex(v.id), "each strand needs exactly one back corner");
      // per-germ degree pattern: one wide corner, two quadrant corners
      for (const auto& g : sing) {
        int wide = 0, quad = 0;
        for (const auto& cor : cs)
          if (touches(cor, g)) (cor.quadrants == 2 ? wide : quad) += (cor.in == g) + (cor.out == g);
        if (wide != 1 || quad != 2)
          err("E_CORNER_MODEL", loc_vertex(v.id),
              "end of edge " + std::to_string(g.edge) + " has an unexpected corner pattern");
      }
      // the front occurrence's corner at each germ is a quadrant corner
      for (const auto& g : sing) {
        const Edge* e = c.find_edge(g.edge);
        if (!e || !e->branch_side) continue;
        auto st = corner_step(c, *e->branch_side, g);
        if (st && st->quadrants != 1)
          err("E_CORNER_MODEL", loc_vertex(v.id),
              "front corner of edge " + std::to_string(g.edge) + " is not a quadrant corner");
      }
    } else if (sing.size() == 2) {
      // subdivision vertex on the locus: front/upper/lower chains continue
      // matching slots of the two strand edges, two quadrants per sheet
      const EndRef g1 = sing[0], g2 = sing[1];
      const Edge* e1 = c.find_edge(g1.edge);
      const Edge* e2 = c.find_edge(g2.edge);
      if (!e1 || !e2 || !e1->branch_side || !e2->branch_side) continue;
      struct ChainSpec {
        OccRef from, to;
        const char* name;
      };
      std::vector<ChainSpec> chains;
      try {
        chains = {{*e1->branch_side, *e2->branch_side, "front"},
                  {upper_back(c, g1.edge), upper_back(c, g2.edge), "upper"},
                  {lower_back(c, g1.edge), lower_back(c, g2.edge), "lower"}};
      } catch (const ComplexError&) {
        continue;  // side-count errors already reported
      }
      std::set<OccRef> visited;
      for (const auto& ch : chains) {
        auto step = corner_step(c, ch.from, g1);
        if (!step) {
          err("E_CORNER_MODEL", loc_vertex(v.id), std::string(ch.name) + " chain has no corner");
          continue;
        }
        int sum = 0;
        EndRef cur = g1;
        OccRef cur_occ = ch.from;
        bool ok = false;
        int guard = static_cast<int>(c.edges.size()) * 2 + 4;
        while (guard-- > 0) {
          sum += step->quadrants;
          visited.insert(step->corner);
          cur = step->partner;
          if (cur == g2) {
            // must have arrived along the matching slot of e2
            auto back = corner_step(c, ch.to, g2);
            ok = back && back->corner == step->corner;
            break;
          }
          const Edge* f = c.find_edge(cur.edge);
          if (!f || f->kind != EdgeKind::auxiliary) break;
          auto occs = occurrences(c, cur.edge);
          std::optional<CornerStep> next;
          for (const auto& oc : occs) {
            auto cs2 = corner_step(c, oc, cur);
            if (cs2 && !(cs2->corner == step->corner)) next = cs2;
          }
          if (!next) break;
          step = next;
          (void)cur_occ;
        }
        if (!ok)
          err("E_CORNER_MODEL", loc_vertex(v.id),
              std::string(ch.name) + " sheet does not continue across the vertex");
        else if (sum != 2)
          err("E_CORNER_MODEL", loc_vertex(v.id),
              std::string(ch.name) + " sheet spans " + std::to_string(sum) + " quadrants, expected 2");
      }
      for (const auto& cor : cs)
        if (!visited.count(cor.slot) && (touches(cor, g1) || touches(cor, g2)))
          err("E_CORNER_MODEL", loc_vertex(v.id), "stray corner at a locus subdivision vertex");
    } else {
      // off the singular locus: the link is a circle
      std::map<EndRef, int> deg;
      for (const auto& cor : cs) {
        deg[cor.in] += 1;
        deg[cor.out] += 1;
      }
      for (const auto& [g, d] : deg)
        if (d != static_cast<int>(occurrences(c, g.edge).size()))
          err("E_CORNER_MODEL", loc_vertex(v.id),
              "end of edge " + std::to_string(g.edge) + " lies on the wrong number of corners");
    }
  }

  // warnings: loops and non-disk cells (removed by refinement)
  for (const auto& e : c.edges)
    if (e.ends[0] == e.ends[1])
      warn("W_LOOP_EDGE", loc_edge(e.id), "edge is a loop");
  for (const auto& cell : c.cells)
    if (cell.genus != 0 || cell.boundary.size() != 1)
      warn("W_NOT_DISK", loc_cell(cell.id),
           "cell has genus " + std::to_string(cell.genus) + " and " +
               std::to_string(cell.boundary.size()) + " boundary components");

  return rep;
}

}  // namespace bsc
