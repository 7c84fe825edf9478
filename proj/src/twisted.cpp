#include "bsc/twisted.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace bsc {

int TransitionGraph::node_id(const TransitionNode& n) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), n);
  if (it == nodes.end() || !(*it == n)) return -1;
  return static_cast<int>(it - nodes.begin());
}

std::vector<int> TransitionGraph::out_arcs(int node) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    if (arcs[static_cast<std::size_t>(i)].from == node) out.push_back(i);
  return out;
}

TransitionGraph build_transition_graph(const BranchComplex& c) {
  TransitionGraph g;
  for (const auto& e : c.edges)
    if (e.kind == EdgeKind::singular) {
      g.nodes.push_back({e.id, true});
      g.nodes.push_back({e.id, false});
    }
  std::sort(g.nodes.begin(), g.nodes.end());

  // a directed edge arriving at v along end `in` continues out of any end
  // `out` at v as the directed edge pointing away from v
  auto node_in = [&](EndRef in) { return g.node_id({in.edge, in.end == 1}); };
  auto node_out = [&](EndRef out) { return g.node_id({out.edge, out.end == 0}); };

  for (const auto& v : c.vertices) {
    auto sing = singular_ends_at(c, v.id);
    for (const auto& in : sing) {
      auto cont = strand_continuation(c, v.id, in);
      if (cont)
        g.arcs.push_back({node_in(in), node_out(*cont), ArcLabel::smooth, v.id, 0});
      if (v.kind != VertexKind::double_point || !v.dp) continue;
      auto si = strand_index(c, *c.find_vertex(v.id), in);
      if (!si) continue;
      const auto& other = v.dp->strands[static_cast<std::size_t>(2 - *si)];
      ArcLabel label = (v.dp->over_strand != *si) ? ArcLabel::ascending : ArcLabel::descending;
      for (const auto& out : other)
        g.arcs.push_back({node_in(in), node_out(out), label, v.id, v.dp->sign});
    }
  }
  std::sort(g.arcs.begin(), g.arcs.end(), [](const TransitionArc& a, const TransitionArc& b) {
    return std::tie(a.from, a.to, a.label) < std::tie(b.from, b.to, b.label);
  });
  return g;
}

int TwistedWitness::corner_count() const {
  int n = 0;
  for (const auto& s : steps) n += s.label_to_next != ArcLabel::smooth;
  return n;
}

bool witness_valid(const TwistedWitness& w, const TransitionGraph& g) {
  if (w.steps.empty()) return false;
  const ArcLabel want = w.polarity == Polarity::positive ? ArcLabel::ascending : ArcLabel::descending;
  int corners = 0;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const auto& s = w.steps[i];
    const auto& n = w.steps[(i + 1) % w.steps.size()];
    if (s.label_to_next != ArcLabel::smooth) {
      if (s.label_to_next != want) return false;
      ++corners;
    }
    bool found = false;
    for (int ai : g.out_arcs(s.node)) {
      const auto& a = g.arcs[static_cast<std::size_t>(ai)];
      if (a.to == n.node && a.label == s.label_to_next) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return corners >= 1;
}

bool witness_simple(const TwistedWitness& w) {
  std::set<int> seen;
  for (const auto& s : w.steps)
    if (!seen.insert(s.node).second) return false;
  return true;
}

namespace {

// shortest path to -> from within the smooth + one-label subgraph (BFS,
// deterministic neighbour order); returns node/arc-label steps excluding the
// endpoint duplication
std::optional<std::vector<WitnessStep>> subgraph_path(const TransitionGraph& g, ArcLabel corner,
                                                      int from, int to) {
  std::map<int, std::pair<int, int>> parent;  // node -> (prev node, arc idx)
  std::deque<int> queue{from};
  std::set<int> seen{from};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (int ai : g.out_arcs(cur)) {
      const auto& a = g.arcs[static_cast<std::size_t>(ai)];
      if (a.label != ArcLabel::smooth && a.label != corner) continue;
      if (seen.count(a.to)) continue;
      seen.insert(a.to);
      parent[a.to] = {cur, ai};
      queue.push_back(a.to);
    }
  }
  if (from != to && !seen.count(to)) return std::nullopt;
  std::vector<WitnessStep> rev;
  int cur = to;
  while (cur != from) {
    auto [prev, ai] = parent.at(cur);
    const auto& a = g.arcs[static_cast<std::size_t>(ai)];
    rev.push_back({prev, a.label, a.at});
    cur = prev;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace

std::optional<TwistedWitness> find_twisted_curve(const TransitionGraph& g, Polarity p) {
  const ArcLabel corner = p == Polarity::positive ? ArcLabel::ascending : ArcLabel::descending;
  for (int ai = 0; ai < static_cast<int>(g.arcs.size()); ++ai) {
    const auto& a = g.arcs[static_cast<std::size_t>(ai)];
    if (a.label != corner) continue;
    auto back = subgraph_path(g, corner, a.to, a.from);
    if (!back) continue;
    // cycle: the corner arc a, then the path a.to -> a.from; each path step
    // already carries (node, label of the arc leaving it)
    TwistedWitness w;
    w.polarity = p;
    w.steps.push_back({a.from, a.label, a.at});
    for (const auto& st : *back) w.steps.push_back(st);
    TwistedWitness simple = extract_simple(w, g);
    assert(witness_valid(simple, g) && witness_simple(simple));
    return simple;
  }
  return std::nullopt;
}

TwistedWitness extract_simple(const TwistedWitness& w0, const TransitionGraph& g,
                              std::vector<int>* corner_trace) {
  TwistedWitness w = w0;
  if (corner_trace) corner_trace->push_back(w.corner_count());
  auto find_repeat = [&]() -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::map<int, std::size_t> first;
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
      auto it = first.find(w.steps[i].node);
      if (it != first.end()) return std::make_pair(it->second, i);
      first[w.steps[i].node] = i;
    }
    return std::nullopt;
  };
  int guard = static_cast<int>(w.steps.size()) + 2;
  while (guard-- > 0) {
    auto rep = find_repeat();
    if (!rep) break;
    auto [i, j] = *rep;
    // two closed sub-loops sharing the repeated node
    TwistedWitness c1 = w, c2 = w;
    c1.steps.assign(w.steps.begin() + static_cast<std::ptrdiff_t>(i),
                    w.steps.begin() + static_cast<std::ptrdiff_t>(j));
    c2.steps.clear();
    for (std::size_t k = j; k != i; k = (k + 1) % w.steps.size()) c2.steps.push_back(w.steps[k]);
    const int n1 = c1.corner_count(), n2 = c2.corner_count();
    if (n1 >= 1 && n2 >= 1) {
      w = n1 <= n2 ? c1 : c2;
      if (corner_trace) corner_trace->push_back(w.corner_count());
    } else if (n1 >= 1) {
      w = c1;
    } else {
      w = c2;
    }
    guard = static_cast<int>(w.steps.size()) + 2;
  }
  assert(w.corner_count() >= 1);
  return w;
}

std::optional<std::pair<CellId, int>> nonport_obstruction(const BranchComplex& c) {
  for (const auto& cell : c.cells) {
    auto cls = classify_cell(c, cell.id);
    if (cls.kind == CellKind::twisted_disk_of_contact) return std::make_pair(cell.id, cls.sign);
  }
  return std::nullopt;
}

}  // namespace bsc
