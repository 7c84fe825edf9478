#include "bsc/tracks.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace bsc {

int TrainTrack::count_before(std::size_t i) const {
  int c = start_count;
  for (std::size_t k = 0; k < i && k < events.size(); ++k)
    c += events[k].kind == EventKind::split ? 1 : -1;
  return c;
}

void TrainTrack::check() const {
  if (start_count < 1) throw TrackError("E_WORD", "start_count must be >= 1");
  int c = start_count;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind == EventKind::split) {
      if (e.pos < 1 || e.pos > c)
        throw TrackError("E_WORD", "split position out of range at event " + std::to_string(i));
      ++c;
    } else {
      if (e.pos < 1 || e.pos + 1 > c)
        throw TrackError("E_WORD", "merge position out of range at event " + std::to_string(i));
      --c;
    }
    if (c < 1) throw TrackError("E_WORD", "strand count dropped below 1 at event " + std::to_string(i));
  }
  if (topology == Topology::circular && c != start_count)
    throw TrackError("E_WORD", "circular track must close up to the identity gluing");
}

TrainTrack mirror(const TrainTrack& t) {
  TrainTrack m = t;
  int c = t.start_count;
  for (auto& e : m.events) {
    if (e.kind == EventKind::split) {
      e.pos = c + 1 - e.pos;
      ++c;
    } else {
      e.pos = c - e.pos;
      --c;
    }
  }
  return m;
}

namespace {

struct Node {
  int gap;
  int pos;
  bool operator<(const Node& o) const { return gap != o.gap ? gap < o.gap : pos < o.pos; }
  bool operator==(const Node& o) const = default;
};

// Successors of (gap, pos) across event `gap`, with the branching tag when the
// strand is involved.
std::vector<std::pair<Node, std::optional<BranchingTag>>> successors(const TrainTrack& t, Node n) {
  const int E = static_cast<int>(t.events.size());
  const auto& ev = t.events[static_cast<std::size_t>(n.gap)];
  const int ng = (n.gap + 1) % E;
  std::vector<std::pair<Node, std::optional<BranchingTag>>> out;
  const auto tag = [&](BranchDir d, BranchSide s) {
    return BranchingTag{static_cast<std::size_t>(n.gap), d, s};
  };
  if (ev.kind == EventKind::split) {
    if (n.pos < ev.pos) {
      out.push_back({{ng, n.pos}, std::nullopt});
    } else if (n.pos == ev.pos) {
      out.push_back({{ng, ev.pos}, tag(BranchDir::direct, BranchSide::over)});
      out.push_back({{ng, ev.pos + 1}, tag(BranchDir::direct, BranchSide::under)});
    } else {
      out.push_back({{ng, n.pos + 1}, std::nullopt});
    }
  } else {
    if (n.pos < ev.pos) {
      out.push_back({{ng, n.pos}, std::nullopt});
    } else if (n.pos == ev.pos) {
      out.push_back({{ng, ev.pos}, tag(BranchDir::backward, BranchSide::over)});
    } else if (n.pos == ev.pos + 1) {
      out.push_back({{ng, ev.pos}, tag(BranchDir::backward, BranchSide::under)});
    } else {
      out.push_back({{ng, n.pos - 1}, std::nullopt});
    }
  }
  return out;
}

SmoothCycle cycle_from_path(const TrainTrack& t, const std::vector<Node>& path) {
  SmoothCycle c;
  const int E = static_cast<int>(t.events.size());
  c.laps = E > 0 ? static_cast<int>(path.size()) / E : 1;
  for (const auto& n : path) {
    c.gaps.push_back(n.gap);
    c.positions.push_back(n.pos);
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Node cur = path[i];
    const Node nxt = path[(i + 1) % path.size()];
    for (const auto& [m, tag] : successors(t, cur))
      if (m == nxt) {
        if (tag) c.branchings.push_back(*tag);
        break;
      }
  }
  return c;
}

}  // namespace

std::vector<SmoothCycle> enumerate_smooth_cycles(const TrainTrack& t, std::size_t max_cycles) {
  t.check();
  if (t.topology != Topology::circular)
    throw TrackError("E_BAD_MOVE", "cycle enumeration needs a circular track");
  std::vector<SmoothCycle> out;
  const int E = static_cast<int>(t.events.size());
  if (E == 0) {
    for (int p = 1; p <= t.start_count; ++p) {
      SmoothCycle c;
      c.laps = 1;
      c.gaps = {0};
      c.positions = {p};
      out.push_back(std::move(c));
      if (out.size() > max_cycles) throw TrackError("E_LIMIT", "cycle limit exceeded");
    }
    return out;
  }
  std::vector<Node> nodes;
  for (int g = 0; g < E; ++g)
    for (int p = 1; p <= t.count_before(static_cast<std::size_t>(g)); ++p) nodes.push_back({g, p});
  std::sort(nodes.begin(), nodes.end());

  // DFS enumeration of simple cycles, canonical at their least node.
  for (const Node& s : nodes) {
    std::vector<Node> path{s};
    std::set<Node> on_path{s};
    // stack of (node, next successor index)
    std::vector<std::pair<Node, std::size_t>> stack{{s, 0}};
    while (!stack.empty()) {
      const Node n = stack.back().first;
      const std::size_t idx = stack.back().second;
      auto succ = successors(t, n);
      if (idx >= succ.size()) {
        stack.pop_back();
        on_path.erase(n);
        path.pop_back();
        continue;
      }
      ++stack.back().second;
      Node m = succ[idx].first;
      if (m == s) {
        out.push_back(cycle_from_path(t, path));
        if (out.size() > max_cycles) throw TrackError("E_LIMIT", "cycle limit exceeded");
        continue;
      }
      if (m < s || on_path.count(m)) continue;
      path.push_back(m);
      on_path.insert(m);
      stack.push_back({m, 0});
    }
  }
  return out;
}

namespace {

bool violates_condition_i(const SmoothCycle& c) {
  bool has_under = false, direct_under = false, backward_under = false;
  for (const auto& b : c.branchings) {
    if (b.side != BranchSide::under) continue;
    has_under = true;
    (b.dir == BranchDir::direct ? direct_under : backward_under) = true;
  }
  return has_under && !(direct_under && backward_under);
}

}  // namespace

std::optional<SmoothCycle> check_condition_i(const TrainTrack& t, std::size_t max_cycles) {
  for (const auto& c : enumerate_smooth_cycles(t, max_cycles))
    if (violates_condition_i(c)) return c;
  return std::nullopt;
}

SmoothCycle max_circle(const TrainTrack& t) {
  t.check();
  if (t.topology != Topology::circular)
    throw TrackError("E_BAD_MOVE", "max circle needs a circular track");
  SmoothCycle c;
  c.laps = 1;
  const int E = static_cast<int>(t.events.size());
  if (E == 0) {
    c.gaps = {0};
    c.positions = {t.start_count};
    return c;
  }
  int pos = t.count_before(0);
  for (int g = 0; g < E; ++g) {
    assert(pos == t.count_before(static_cast<std::size_t>(g)) && "max circle must ride the top");
    c.gaps.push_back(g);
    c.positions.push_back(pos);
    const auto& ev = t.events[static_cast<std::size_t>(g)];
    if (ev.kind == EventKind::split) {
      if (ev.pos == pos) {
        c.branchings.push_back({static_cast<std::size_t>(g), BranchDir::direct, BranchSide::under});
        pos = ev.pos + 1;
      } else {
        pos += 1;
      }
    } else {
      if (ev.pos + 1 == pos) {
        c.branchings.push_back({static_cast<std::size_t>(g), BranchDir::backward, BranchSide::under});
        pos = ev.pos;
      } else {
        pos -= 1;
      }
    }
  }
  return c;
}

std::variant<CircleDecomposition, TwistPattern> peel_decompose(const TrainTrack& t) {
  t.check();
  if (t.topology != Topology::circular)
    throw TrackError("E_BAD_MOVE", "peeling needs a circular track");
  const int E0 = static_cast<int>(t.events.size());

  TrainTrack cur = t;
  // span[g] = original gaps covered by current gap g
  std::vector<std::vector<int>> span(static_cast<std::size_t>(std::max(E0, 0)));
  for (int g = 0; g < E0; ++g) span[static_cast<std::size_t>(g)] = {g};
  std::vector<std::size_t> orig(static_cast<std::size_t>(E0));
  for (int g = 0; g < E0; ++g) orig[static_cast<std::size_t>(g)] = static_cast<std::size_t>(g);

  CircleDecomposition deco;
  auto record_expanded = [&](const SmoothCycle& m) {
    SmoothCycle r;
    r.laps = 1;
    for (std::size_t i = 0; i < m.gaps.size(); ++i)
      for (int og : span[static_cast<std::size_t>(m.gaps[i])]) {
        r.gaps.push_back(og);
        r.positions.push_back(m.positions[i]);
      }
    for (auto b : m.branchings) {
      b.event = orig[b.event];
      r.branchings.push_back(b);
    }
    deco.circles.push_back(std::move(r));
  };
  auto record_plain = [&](int pos) {
    SmoothCycle r;
    r.laps = 1;
    if (E0 == 0) {
      r.gaps = {0};
      r.positions = {pos};
    } else {
      std::vector<int> all;
      for (const auto& sp : span)
        for (int og : sp) all.push_back(og);
      if (all.empty())
        for (int g = 0; g < E0; ++g) all.push_back(g);
      std::sort(all.begin(), all.end());
      for (int og : all) {
        r.gaps.push_back(og);
        r.positions.push_back(pos);
      }
    }
    deco.circles.push_back(std::move(r));
  };

  std::size_t guard = t.events.size() / 2 + static_cast<std::size_t>(t.start_count) + 2;
  while (true) {
    if (guard-- == 0) throw TrackError("E_WORD", "peeling failed to terminate");
    if (cur.events.empty()) {
      for (int p = cur.start_count; p >= 1; --p) record_plain(p);
      return deco;
    }
    SmoothCycle m = max_circle(cur);
    bool direct_under = false, backward_under = false;
    for (const auto& b : m.branchings)
      (b.dir == BranchDir::direct ? direct_under : backward_under) = true;
    if (m.branchings.empty()) {
      // plain top circle: detach it, events all stay below
      record_expanded(m);
      cur.start_count -= 1;
      continue;
    }
    if (!(direct_under && backward_under))
      return TwistPattern{m, cur};
    // choose the direct -> backward consecutive pair with the least direct index
    const auto& br = m.branchings;
    std::size_t pick = br.size();
    for (std::size_t i = 0; i < br.size(); ++i) {
      const auto& a = br[i];
      const auto& b = br[(i + 1) % br.size()];
      if (a.dir == BranchDir::direct && b.dir == BranchDir::backward) {
        if (pick == br.size() || a.event < br[pick].event) pick = i;
      }
    }
    assert(pick < br.size());
    std::size_t e_split = br[pick].event;
    std::size_t e_merge = br[(pick + 1) % br.size()].event;
    record_expanded(m);
    // delete the merge first if it follows the split, keeping indices stable
    auto erase_event = [&](std::size_t i) {
      if (cur.events.size() == 1) {
        // the last event: a single seamless gap remains
        std::vector<int> all;
        for (auto& sp : span)
          for (int og : sp) all.push_back(og);
        span.assign(1, all);
        cur.events.clear();
        orig.clear();
        return;
      }
      // gap i and gap i+1 (cyclically) join
      std::size_t j = (i + 1) % cur.events.size();
      if (j == 0) {
        // joining across the seam: append gap i's span after the seam gap
        auto tail = span[i];
        span.erase(span.begin() + static_cast<std::ptrdiff_t>(i));
        for (auto it = tail.rbegin(); it != tail.rend(); ++it)
          span[0].insert(span[0].begin(), *it);
      } else {
        for (int og : span[j]) span[i].push_back(og);
        span.erase(span.begin() + static_cast<std::ptrdiff_t>(j));
      }
      cur.events.erase(cur.events.begin() + static_cast<std::ptrdiff_t>(i));
      orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(i));
    };
    if (e_split < e_merge) {
      erase_event(e_merge);
      erase_event(e_split);
    } else {
      // arc wraps the seam: the merge precedes the split in the word
      erase_event(e_split);
      erase_event(e_merge);
      cur.start_count -= 1;  // the peeled arc crosses the seam
    }
    cur.check();
  }
}

IntervalSlideResult interval_trace_split(const TrainTrack& t, std::size_t merge_index, StopRule rule) {
  t.check();
  if (t.topology != Topology::interval)
    throw TrackError("E_BAD_MOVE", "interval slide needs an interval track");
  if (merge_index >= t.events.size() || t.events[merge_index].kind != EventKind::merge)
    throw TrackError("E_BAD_MOVE", "merge_index must name a merge event");

  IntervalSlideResult res;
  res.track = t;
  auto& ev = res.track.events;
  int p = ev[merge_index].pos;
  ev.erase(ev.begin() + static_cast<std::ptrdiff_t>(merge_index));
  std::size_t j = merge_index;
  while (j < ev.size()) {
    TrackEvent& e = ev[j];
    if (e.kind == EventKind::merge)
      throw TrackError("E_BACKWARD", "slide would pass through another merge");
    if (e.pos == p) {
      switch (rule) {
        case StopRule::stop_at_next_split:
          ev.erase(ev.begin() + static_cast<std::ptrdiff_t>(j));
          res.track.check();
          res.stopped_at = j;
          return res;
        case StopRule::resolve_upper:
          ev.insert(ev.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                    TrackEvent{EventKind::merge, p + 1});
          res.track.check();
          res.stopped_at = j;
          return res;
        case StopRule::resolve_lower:
          e.pos = p + 1;
          ev.insert(ev.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                    TrackEvent{EventKind::merge, p});
          res.track.check();
          res.stopped_at = j;
          return res;
        case StopRule::run_to_end:
          throw TrackError("E_BAD_MOVE", "run_to_end blocked by a matching split");
      }
    } else if (e.pos < p) {
      p += 1;  // a split below lifts the sliding pair
    } else {
      e.pos += 1;  // commuted ahead of the merge
    }
    ++j;
  }
  if (rule != StopRule::run_to_end)
    throw TrackError("E_BAD_MOVE", "no matching split ahead of the merge");
  res.emitted = BoundaryMark{p};
  res.track.check();
  return res;
}

TrainTrack parse_track(const std::string& text) {
  std::istringstream in(text);
  TrainTrack t;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (!have_header) {
      if (tok == "circular")
        t.topology = Topology::circular;
      else if (tok == "interval")
        t.topology = Topology::interval;
      else
        throw TrackError("E_PARSE", "line " + std::to_string(lineno) + ": unknown topology '" + tok + "'");
      if (!(ls >> t.start_count))
        throw TrackError("E_PARSE", "line " + std::to_string(lineno) + ": missing start count");
      have_header = true;
      continue;
    }
    TrackEvent e;
    if (tok == "S")
      e.kind = EventKind::split;
    else if (tok == "M")
      e.kind = EventKind::merge;
    else
      throw TrackError("E_PARSE", "line " + std::to_string(lineno) + ": unknown event '" + tok + "'");
    if (!(ls >> e.pos))
      throw TrackError("E_PARSE", "line " + std::to_string(lineno) + ": missing event position");
    t.events.push_back(e);
  }
  if (!have_header) throw TrackError("E_PARSE", "missing header line");
  t.check();
  return t;
}

std::string serialize_track(const TrainTrack& t) {
  std::ostringstream out;
  out << (t.topology == Topology::circular ? "circular" : "interval") << ' ' << t.start_count << '\n';
  for (const auto& e : t.events)
    out << (e.kind == EventKind::split ? 'S' : 'M') << ' ' << e.pos << '\n';
  return out.str();
}

}  // namespace bsc
