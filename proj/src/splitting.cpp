#include "bsc/splitting.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "bsc/twisted.hpp"

namespace bsc {

std::vector<std::pair<OccRef, OccRef>> find_face_to_face_arcs(const BranchComplex& c, CellId cell_id) {
  const Cell* cell = c.find_cell(cell_id);
  if (!cell) throw ComplexError("E_REF", "unknown cell " + std::to_string(cell_id));
  std::vector<OccRef> fronts;
  for (int w = 0; w < static_cast<int>(cell->boundary.size()); ++w)
    for (int i = 0; i < static_cast<int>(cell->boundary[static_cast<std::size_t>(w)].size()); ++i) {
      OccRef o{cell_id, w, i};
      const Edge* e = c.find_edge(entry_edge(entry_at(c, o)));
      if (e && e->kind == EdgeKind::singular && e->branch_side && *e->branch_side == o)
        fronts.push_back(o);
    }
  std::vector<std::pair<OccRef, OccRef>> out;
  for (std::size_t i = 0; i < fronts.size(); ++i)
    for (std::size_t j = i + 1; j < fronts.size(); ++j) out.push_back({fronts[i], fronts[j]});
  return out;
}

namespace {

struct Item {
  std::int64_t entry = 0;
  int corner = 2;
  int succ = -1;        // raw successor token (may be a replaced slot)
  bool replaced = false;
  int group_key = -1;   // designation for cell grouping
  OccRef old_slot;      // valid for old tokens
  bool is_old = false;
};

struct UnionFind {
  std::vector<int> p;
  int add() {
    p.push_back(static_cast<int>(p.size()));
    return static_cast<int>(p.size()) - 1;
  }
  int find(int a) { return p[static_cast<std::size_t>(a)] == a ? a : p[static_cast<std::size_t>(a)] = find(p[static_cast<std::size_t>(a)]); }
  void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

SplitOutcome apply_split(const BranchComplex& c0, const SplitMove& m) {
  const BranchComplex& c = c0;
  const Cell* sigma = c.find_cell(m.cell);
  if (!sigma) throw ComplexError("E_NOT_F2F", "unknown cell");
  if (m.start == m.end) throw ComplexError("E_NOT_F2F", "anchors coincide");
  if (m.start.cell != m.cell || m.end.cell != m.cell)
    throw ComplexError("E_NOT_F2F", "anchors must lie on the surgered cell");
  const EdgeId s_id = entry_edge(entry_at(c, m.start));
  const EdgeId t_id = entry_edge(entry_at(c, m.end));
  const Edge* s = c.find_edge(s_id);
  const Edge* t = c.find_edge(t_id);
  if (!s || !t || s->kind != EdgeKind::singular || t->kind != EdgeKind::singular)
    throw ComplexError("E_NOT_F2F", "anchors must lie on singular edges");
  if (!s->branch_side || !(*s->branch_side == m.start) || !t->branch_side ||
      !(*t->branch_side == m.end))
    throw ComplexError("E_NOT_F2F", "anchor is not the branch side of its edge");
  if (s_id == t_id) throw ComplexError("E_NOT_F2F", "anchors lie on the same edge");

  const std::int64_t s_entry = entry_at(c, m.start);
  const std::int64_t t_entry = entry_at(c, m.end);
  const VertexId u_s = walk_from(c, s_entry), v_s = walk_to(c, s_entry);
  const VertexId u_t = walk_from(c, t_entry), v_t = walk_to(c, t_entry);
  const OccRef su = upper_back(c, s_id), sl = lower_back(c, s_id);
  const OccRef tu = upper_back(c, t_id), tl = lower_back(c, t_id);
  const bool cross_upper = m.variant == Variant::over;  // side the slab crosses into

  SplitOutcome out;
  BranchComplex& nc = out.complex;
  nc = c;

  // fresh ids, fixed order
  out.p_g = nc.fresh_vertex_id();
  out.p_d = out.p_g + 1;
  out.q_g = out.p_g + 2;
  out.q_d = out.p_g + 3;
  out.s_g = nc.fresh_edge_id();
  out.s_d = out.s_g + 1;
  out.t_g = out.s_g + 2;
  out.t_d = out.s_g + 3;
  out.a_g = out.s_g + 4;
  out.a_d = out.s_g + 5;
  if (m.variant != Variant::neutral) {
    out.t_m = out.s_g + 6;
    out.cap = out.s_g + 7;
  }

  // ---- token table over the affected words --------------------------------
  std::set<std::pair<CellId, int>> affected;
  for (const OccRef& o : {m.start, m.end, su, sl, tu, tl}) affected.insert({o.cell, o.word});

  std::vector<Item> items;
  std::map<std::pair<CellId, int>, std::vector<int>> word_tokens;  // first token per slot
  std::map<OccRef, int> slot_token;
  for (const auto& [cid, w] : affected) {
    const Cell* cell = c.find_cell(cid);
    const auto& word = cell->boundary[static_cast<std::size_t>(w)];
    const auto& qs = cell->corners[static_cast<std::size_t>(w)];
    std::vector<int> toks;
    for (int i = 0; i < static_cast<int>(word.size()); ++i) {
      Item it;
      it.entry = word[static_cast<std::size_t>(i)];
      it.corner = qs[static_cast<std::size_t>(i)];
      it.old_slot = {cid, w, i};
      it.is_old = true;
      it.group_key = -1;  // filled later from its old cell
      items.push_back(it);
      toks.push_back(static_cast<int>(items.size()) - 1);
      slot_token[{cid, w, i}] = static_cast<int>(items.size()) - 1;
    }
    for (int i = 0; i < static_cast<int>(toks.size()); ++i)
      items[static_cast<std::size_t>(toks[static_cast<std::size_t>(i)])].succ =
          toks[static_cast<std::size_t>((i + 1) % static_cast<int>(toks.size()))];
    word_tokens[{cid, w}] = toks;
  }

  // group keys: 0..N-1 reserved for old cells involved; then specials
  std::vector<CellId> old_cells;
  for (const auto& [cid, w] : affected)
    if (std::find(old_cells.begin(), old_cells.end(), cid) == old_cells.end())
      old_cells.push_back(cid);
  std::sort(old_cells.begin(), old_cells.end());
  auto old_key = [&](CellId cid) {
    return static_cast<int>(std::find(old_cells.begin(), old_cells.end(), cid) - old_cells.begin());
  };
  const int KSIGMA_G = static_cast<int>(old_cells.size());
  const int KSIGMA_D = KSIGMA_G + 1;
  const int KLENS = KSIGMA_G + 2;
  const int n_keys = KSIGMA_G + 3;
  for (auto& it : items)
    if (it.is_old) it.group_key = old_key(it.old_slot.cell);

  auto add_item = [&](std::int64_t entry, int corner, int key) {
    Item it;
    it.entry = entry;
    it.corner = corner;
    it.group_key = key;
    items.push_back(it);
    return static_cast<int>(items.size()) - 1;
  };
  auto old_succ = [&](const OccRef& o) { return items[static_cast<std::size_t>(slot_token.at(o))].succ; };
  auto old_corner = [&](const OccRef& o) { return items[static_cast<std::size_t>(slot_token.at(o))].corner; };

  std::map<int, int> redirect;  // replaced token -> replacement head token
  auto replace = [&](const OccRef& o, int head) {
    int tok = slot_token.at(o);
    items[static_cast<std::size_t>(tok)].replaced = true;
    redirect[tok] = head;
  };

  const int q_front = m.variant == Variant::neutral ? 2 : 1;

  // front pieces
  int iS_g = add_item(make_entry(out.s_g, true), 2, KSIGMA_G);
  int iA_g = add_item(make_entry(out.a_g, true), q_front, KSIGMA_G);
  int iT_g = add_item(make_entry(out.t_g, true), old_corner(m.end), KSIGMA_G);
  int iT_d = add_item(make_entry(out.t_d, true), q_front, KSIGMA_D);
  int iA_d = add_item(make_entry(out.a_d, true), 2, KSIGMA_D);
  int iS_d = add_item(make_entry(out.s_d, true), old_corner(m.start), KSIGMA_D);
  items[static_cast<std::size_t>(iS_g)].succ = iA_g;
  items[static_cast<std::size_t>(iA_g)].succ = iT_g;
  items[static_cast<std::size_t>(iT_g)].succ = old_succ(m.end);
  items[static_cast<std::size_t>(iT_d)].succ = iA_d;
  items[static_cast<std::size_t>(iA_d)].succ = iS_d;
  items[static_cast<std::size_t>(iS_d)].succ = old_succ(m.start);
  replace(m.start, iS_g);
  replace(m.end, iT_d);

  // back detours around the start edge; the crossing side carries the cap
  // (over: upper; under: lower), the other side fronts the kept middle t_m
  int uS_d = -1, uS_g = -1, uA_g = -1, uA_d = -1, lS_d = -1, lS_g = -1, lA_g = -1, lA_d = -1;
  int uMID = -1, lMID = -1;  // cap or t_m token within each detour (over/under)
  {
    const int ku = old_key(su.cell), kl = old_key(sl.cell);
    uS_d = add_item(make_entry(out.s_d, false), 2, ku);
    lS_d = add_item(make_entry(out.s_d, false), 2, kl);
    uA_d = add_item(make_entry(out.a_d, false), 2, ku);
    lA_d = add_item(make_entry(out.a_d, false), 2, kl);
    uA_g = add_item(make_entry(out.a_g, false), 2, ku);
    lA_g = add_item(make_entry(out.a_g, false), 2, kl);
    uS_g = add_item(make_entry(out.s_g, false), old_corner(su), ku);
    lS_g = add_item(make_entry(out.s_g, false), old_corner(sl), kl);
    items[static_cast<std::size_t>(uS_d)].succ = uA_d;
    items[static_cast<std::size_t>(lS_d)].succ = lA_d;
    items[static_cast<std::size_t>(uS_g)].succ = old_succ(su);
    items[static_cast<std::size_t>(lS_g)].succ = old_succ(sl);
    replace(su, uS_d);
    replace(sl, lS_d);
    if (m.variant == Variant::neutral) {
      // continue along the far edge pieces and splice the far back words
      int uT_d = add_item(make_entry(out.t_d, false), old_corner(tu), ku);
      int uT_g = add_item(make_entry(out.t_g, false), 2, old_key(tu.cell));
      int lT_d = add_item(make_entry(out.t_d, false), old_corner(tl), kl);
      int lT_g = add_item(make_entry(out.t_g, false), 2, old_key(tl.cell));
      items[static_cast<std::size_t>(uA_d)].succ = uT_d;
      items[static_cast<std::size_t>(lA_d)].succ = lT_d;
      items[static_cast<std::size_t>(uT_d)].succ = old_succ(tu);
      items[static_cast<std::size_t>(lT_d)].succ = old_succ(tl);
      items[static_cast<std::size_t>(uT_g)].succ = uA_g;
      items[static_cast<std::size_t>(lT_g)].succ = lA_g;
      items[static_cast<std::size_t>(uA_g)].succ = uS_g;
      items[static_cast<std::size_t>(lA_g)].succ = lS_g;
      replace(tu, uT_g);
      replace(tl, lT_g);
    } else {
      // crossing-side detour flies past the far edge via the cap; the other
      // side fronts the kept middle piece
      const bool cu = cross_upper;
      int& capMID = cu ? uMID : lMID;
      int& tmMID = cu ? lMID : uMID;
      int capPrev = cu ? uA_d : lA_d;
      int capNext = cu ? uA_g : lA_g;
      int tmPrev = cu ? lA_d : uA_d;
      int tmNext = cu ? lA_g : uA_g;
      capMID = add_item(make_entry(out.cap, false), 2, items[static_cast<std::size_t>(capPrev)].group_key);
      tmMID = add_item(make_entry(out.t_m, true), 1, items[static_cast<std::size_t>(tmPrev)].group_key);
      items[static_cast<std::size_t>(capPrev)].succ = capMID;
      items[static_cast<std::size_t>(capPrev)].corner = 2;
      items[static_cast<std::size_t>(capMID)].succ = capNext;
      items[static_cast<std::size_t>(tmPrev)].succ = tmMID;
      items[static_cast<std::size_t>(tmPrev)].corner = 1;
      items[static_cast<std::size_t>(tmMID)].succ = tmNext;
      items[static_cast<std::size_t>(capNext)].succ = cu ? uS_g : lS_g;
      items[static_cast<std::size_t>(tmNext)].succ = cu ? lS_g : uS_g;
      // wait: capNext/tmNext succ already defaulted below; fixed here
    }
    if (m.variant == Variant::neutral) {
      // succ of uA_g/lA_g set above
    }
  }

  // far-edge back rewrites for over/under: the crossed cell is carved by the
  // cap, the other back is smoothly subdivided
  if (m.variant != Variant::neutral) {
    const OccRef crossed = cross_upper ? tu : tl;
    const OccRef smooth = cross_upper ? tl : tu;
    int nT_g = add_item(make_entry(out.t_g, false), 1, old_key(crossed.cell));
    int fCAP = add_item(make_entry(out.cap, true), 1, old_key(crossed.cell));
    int nT_d = add_item(make_entry(out.t_d, false), old_corner(crossed), old_key(crossed.cell));
    items[static_cast<std::size_t>(nT_g)].succ = fCAP;
    items[static_cast<std::size_t>(fCAP)].succ = nT_d;
    items[static_cast<std::size_t>(nT_d)].succ = old_succ(crossed);
    replace(crossed, nT_g);
    int wT_g = add_item(make_entry(out.t_g, false), 2, old_key(smooth.cell));
    int wT_m = add_item(make_entry(out.t_m, false), 2, old_key(smooth.cell));
    int wT_d = add_item(make_entry(out.t_d, false), old_corner(smooth), old_key(smooth.cell));
    items[static_cast<std::size_t>(wT_g)].succ = wT_m;
    items[static_cast<std::size_t>(wT_m)].succ = wT_d;
    items[static_cast<std::size_t>(wT_d)].succ = old_succ(smooth);
    replace(smooth, wT_g);
    // lens bigon: the cap's inner back against the middle piece
    int mCAP = add_item(make_entry(out.cap, false), 1, KLENS);
    int mT_m = add_item(make_entry(out.t_m, false), 1, KLENS);
    items[static_cast<std::size_t>(mCAP)].succ = mT_m;
    items[static_cast<std::size_t>(mT_m)].succ = mCAP;
  }

  // ---- trace the new words -------------------------------------------------
  auto resolve = [&](int tok) {
    auto it = redirect.find(tok);
    return it == redirect.end() ? tok : it->second;
  };
  std::vector<std::vector<int>> cycles;
  std::vector<char> visited(items.size(), 0);
  for (int start = 0; start < static_cast<int>(items.size()); ++start) {
    if (visited[static_cast<std::size_t>(start)] || items[static_cast<std::size_t>(start)].replaced)
      continue;
    std::vector<int> cyc;
    int cur = start;
    while (!visited[static_cast<std::size_t>(cur)]) {
      visited[static_cast<std::size_t>(cur)] = 1;
      cyc.push_back(cur);
      cur = resolve(items[static_cast<std::size_t>(cur)].succ);
    }
    if (cur != start) throw ComplexError("E_INTERNAL", "boundary trace did not close");
    cycles.push_back(std::move(cyc));
  }

  // ---- group cycles into cells ----------------------------------------------
  UnionFind uf;
  for (int k = 0; k < n_keys; ++k) uf.add();
  for (const auto& cyc : cycles)
    for (std::size_t i = 1; i < cyc.size(); ++i)
      uf.unite(items[static_cast<std::size_t>(cyc[0])].group_key,
               items[static_cast<std::size_t>(cyc[i])].group_key);
  if (m.variant == Variant::neutral) {
    uf.unite(old_key(su.cell), old_key(tu.cell));
    uf.unite(old_key(sl.cell), old_key(tl.cell));
  }

  // new cell ids per group root
  std::map<int, CellId> group_cell;
  CellId next_cell = nc.fresh_cell_id();
  // groups containing old cells keep the least old id
  for (CellId cid : old_cells) {
    int r = uf.find(old_key(cid));
    auto it = group_cell.find(r);
    if (it == group_cell.end() || cid < it->second) group_cell[r] = cid;
  }
  for (int key : {KSIGMA_G, KSIGMA_D, KLENS}) {
    int r = uf.find(key);
    if (!group_cell.count(r)) group_cell[r] = next_cell++;
  }

  // ---- rebuild cells ---------------------------------------------------------
  // remember unaffected words of affected cells, and the sigma leftover words
  struct NewWord {
    std::vector<std::int64_t> word;
    std::vector<int> corners;
  };
  std::map<CellId, std::vector<NewWord>> new_words;
  std::map<CellId, std::uint32_t> new_genus;
  std::map<int, int> chi;  // group root -> running Euler contribution

  auto chi_of = [&](const Cell& cell) {
    return 2 - 2 * static_cast<int>(cell.genus) - static_cast<int>(cell.boundary.size());
  };

  for (CellId cid : old_cells) {
    int r = uf.find(old_key(cid));
    if (cid == m.cell) continue;  // sigma accounted via KSIGMA_G / KSIGMA_D
    chi[r] += chi_of(*c.find_cell(cid));
  }
  {
    int rg = uf.find(KSIGMA_G), rd = uf.find(KSIGMA_D);
    chi[rg] += chi_of(*sigma);
    chi[rd] += 1;
    if (m.variant == Variant::neutral) {
      chi[uf.find(old_key(su.cell))] -= 1;
      chi[uf.find(old_key(sl.cell))] -= 1;
    } else {
      chi[uf.find(KLENS)] += 1;
    }
  }

  std::map<std::pair<CellId, int>, std::pair<CellId, int>> word_remap;  // old (cell,word) -> new
  std::map<int, OccRef> token_slot;  // token -> new occurrence

  // traced cycles
  for (const auto& cyc : cycles) {
    int r = uf.find(items[static_cast<std::size_t>(cyc[0])].group_key);
    CellId owner = group_cell.at(r);
    NewWord w;
    for (int tok : cyc) {
      w.word.push_back(items[static_cast<std::size_t>(tok)].entry);
      w.corners.push_back(items[static_cast<std::size_t>(tok)].corner);
    }
    int word_idx = static_cast<int>(new_words[owner].size());
    for (int i = 0; i < static_cast<int>(cyc.size()); ++i)
      token_slot[cyc[static_cast<std::size_t>(i)]] = {owner, word_idx, i};
    new_words[owner].push_back(std::move(w));
  }
  // unaffected words of affected cells follow their group; sigma's leftovers
  // follow the g-piece
  for (CellId cid : old_cells) {
    const Cell* cell = c.find_cell(cid);
    int key = cid == m.cell ? KSIGMA_G : old_key(cid);
    CellId owner = group_cell.at(uf.find(key));
    for (int w = 0; w < static_cast<int>(cell->boundary.size()); ++w) {
      if (affected.count({cid, w})) continue;
      int word_idx = static_cast<int>(new_words[owner].size());
      new_words[owner].push_back(
          {cell->boundary[static_cast<std::size_t>(w)], cell->corners[static_cast<std::size_t>(w)]});
      word_remap[{cid, w}] = {owner, word_idx};
    }
  }
  // genus from the Euler count per group
  for (const auto& [root, cell_id] : group_cell) {
    if (!new_words.count(cell_id)) continue;
    int b = static_cast<int>(new_words[cell_id].size());
    int x = chi.count(root) ? chi[root] : 0;
    int g2 = 2 - x - b;
    new_genus[cell_id] = static_cast<std::uint32_t>(std::max(0, g2 / 2));
  }

  // ---- apply to the complex --------------------------------------------------
  // drop affected cells, install groups
  std::set<CellId> drop(old_cells.begin(), old_cells.end());
  std::vector<Cell> kept;
  for (const auto& cell : nc.cells)
    if (!drop.count(cell.id)) kept.push_back(cell);
  nc.cells = std::move(kept);
  for (const auto& [owner, words] : new_words) {
    Cell cell;
    cell.id = owner;
    cell.genus = new_genus.count(owner) ? new_genus[owner] : 0;
    for (const auto& w : words) {
      cell.boundary.push_back(w.word);
      cell.corners.push_back(w.corners);
    }
    nc.cells.push_back(std::move(cell));
  }
  nc.sort_entities();

  // vertices
  auto add_vertex = [&](VertexId id, VertexKind kind) {
    Vertex v;
    v.id = id;
    v.kind = kind;
    nc.vertices.push_back(v);
  };
  add_vertex(out.p_g, VertexKind::subdivision);
  add_vertex(out.p_d, VertexKind::subdivision);
  if (m.variant == Variant::neutral) {
    add_vertex(out.q_g, VertexKind::subdivision);
    add_vertex(out.q_d, VertexKind::subdivision);
  } else {
    Vertex qg;
    qg.id = out.q_g;
    qg.kind = VertexKind::double_point;
    DoublePointData dg;
    dg.over_strand = m.variant == Variant::over ? 1 : 2;
    dg.sign = m.variant == Variant::over ? -1 : +1;
    dg.strands[0] = {EndRef{out.a_g, 1}, EndRef{out.cap, 0}};
    dg.strands[1] = {EndRef{out.t_g, 0}, EndRef{out.t_m, 1}};
    qg.dp = dg;
    nc.vertices.push_back(qg);
    Vertex qd;
    qd.id = out.q_d;
    qd.kind = VertexKind::double_point;
    DoublePointData dd;
    dd.over_strand = m.variant == Variant::over ? 1 : 2;
    dd.sign = m.variant == Variant::over ? +1 : -1;
    dd.strands[0] = {EndRef{out.cap, 1}, EndRef{out.a_d, 0}};
    dd.strands[1] = {EndRef{out.t_d, 1}, EndRef{out.t_m, 0}};
    qd.dp = dd;
    nc.vertices.push_back(qd);
  }

  // edge end remaps in strand data
  const EndRef s_at_u{s_id, entry_forward(s_entry) ? 0 : 1};
  const EndRef s_at_v{s_id, entry_forward(s_entry) ? 1 : 0};
  const EndRef t_at_u{t_id, entry_forward(t_entry) ? 0 : 1};
  const EndRef t_at_v{t_id, entry_forward(t_entry) ? 1 : 0};
  for (auto& v : nc.vertices) {
    if (!v.dp) continue;
    for (auto& strand : v.dp->strands)
      for (auto& end : strand) {
        if (end == s_at_u) end = {out.s_g, 0};
        else if (end == s_at_v) end = {out.s_d, 1};
        else if (end == t_at_u) end = {out.t_d, 0};
        else if (end == t_at_v) end = {out.t_g, 1};
      }
  }

  // edges: drop s, t; remap the survivors' occurrence refs
  auto remap_occ = [&](OccRef o) -> OccRef {
    if (affected.count({o.cell, o.word})) {
      auto it = slot_token.find(o);
      if (it != slot_token.end() && token_slot.count(it->second)) return token_slot.at(it->second);
      throw ComplexError("E_INTERNAL", "occurrence lost in surgery");
    }
    auto it = word_remap.find({o.cell, o.word});
    if (it != word_remap.end()) return {it->second.first, it->second.second, o.pos};
    return o;
  };
  std::vector<Edge> new_edges;
  for (const auto& e : nc.edges) {
    if (e.id == s_id || e.id == t_id) continue;
    Edge ne = e;
    if (ne.branch_side) ne.branch_side = remap_occ(*ne.branch_side);
    if (ne.stop_side) ne.stop_side = remap_occ(*ne.stop_side);
    new_edges.push_back(ne);
  }
  auto tok_occ = [&](int tok) { return token_slot.at(tok); };
  auto add_sing = [&](EdgeId id, VertexId a, VertexId b, int front_tok, int up_tok, int lo_tok,
                      AttachLevel attach) {
    Edge e;
    e.id = id;
    e.ends = {a, b};
    e.kind = EdgeKind::singular;
    e.branch_side = tok_occ(front_tok);
    e.attach_level = attach;
    e.stop_side = attach == AttachLevel::above ? tok_occ(up_tok) : tok_occ(lo_tok);
    new_edges.push_back(e);
  };
  const AttachLevel sa = *s->attach_level;
  const AttachLevel ta = *t->attach_level;
  add_sing(out.s_g, u_s, out.p_g, iS_g, uS_g, lS_g, sa);
  add_sing(out.s_d, out.p_d, v_s, iS_d, uS_d, lS_d, sa);
  if (m.variant == Variant::neutral) {
    // locate the far-edge back tokens inside the neutral detours
    // (they were created inline; recover via token_slot by scanning)
    // tokens for -t_g/-t_d inside the chains:
    int uT_g = -1, uT_d = -1, lT_g = -1, lT_d = -1;
    for (int tok = 0; tok < static_cast<int>(items.size()); ++tok) {
      const Item& it = items[static_cast<std::size_t>(tok)];
      if (it.is_old || it.replaced) continue;
      if (it.entry == make_entry(out.t_g, false))
        (uT_g == -1 ? uT_g : lT_g) = tok;
      if (it.entry == make_entry(out.t_d, false))
        (uT_d == -1 ? uT_d : lT_d) = tok;
    }
    // the first -t_g token created was the upper one; preserve creation order
    add_sing(out.t_g, out.q_g, v_t, iT_g, uT_g, lT_g, ta);
    add_sing(out.t_d, u_t, out.q_d, iT_d, uT_d, lT_d, ta);
    add_sing(out.a_g, out.p_g, out.q_g, iA_g, uA_g, lA_g, sa);
    add_sing(out.a_d, out.q_d, out.p_d, iA_d, uA_d, lA_d, sa);
  } else {
    int nT_g = -1, fCAP = -1, nT_d = -1, wT_g = -1, wT_m = -1, wT_d = -1, mCAP = -1, mT_m = -1;
    for (int tok = 0; tok < static_cast<int>(items.size()); ++tok) {
      const Item& it = items[static_cast<std::size_t>(tok)];
      if (it.is_old || it.replaced) continue;
      if (it.entry == make_entry(out.cap, true)) fCAP = tok;
      if (it.entry == make_entry(out.t_g, false)) (nT_g == -1 ? nT_g : wT_g) = tok;
      if (it.entry == make_entry(out.t_d, false)) (nT_d == -1 ? nT_d : wT_d) = tok;
      if (it.entry == make_entry(out.t_m, false)) {
        if (items[static_cast<std::size_t>(tok)].group_key == KLENS) mT_m = tok;
        else wT_m = tok;
      }
      if (it.entry == make_entry(out.cap, false)) {
        if (items[static_cast<std::size_t>(tok)].group_key == KLENS) mCAP = tok;
      }
    }
    (void)wT_m;
    int capBack = uMID != -1 && items[static_cast<std::size_t>(uMID)].entry == make_entry(out.cap, false)
                      ? uMID
                      : lMID;
    int tmFront = capBack == uMID ? lMID : uMID;
    // vertical slots:
    //   over:  t upper back carved (nT_*), lower smooth (wT_*); cap backs = detour (upper) + lens
    //   under: mirrored
    const bool cu = cross_upper;
    int tg_up = cu ? nT_g : wT_g, tg_lo = cu ? wT_g : nT_g;
    int td_up = cu ? nT_d : wT_d, td_lo = cu ? wT_d : nT_d;
    int tm_up = cu ? mT_m : wT_m, tm_lo = cu ? wT_m : mT_m;
    int cap_up = cu ? capBack : mCAP, cap_lo = cu ? mCAP : capBack;
    add_sing(out.t_g, out.q_g, v_t, iT_g, tg_up, tg_lo, ta);
    add_sing(out.t_d, u_t, out.q_d, iT_d, td_up, td_lo, ta);
    add_sing(out.t_m, out.q_d, out.q_g, tmFront, tm_up, tm_lo, ta);
    add_sing(out.a_g, out.p_g, out.q_g, iA_g, uA_g, lA_g, sa);
    add_sing(out.a_d, out.q_d, out.p_d, iA_d, uA_d, lA_d, sa);
    add_sing(out.cap, out.q_g, out.q_d, fCAP, cap_up, cap_lo, sa);
  }
  nc.edges = std::move(new_edges);
  nc.sort_entities();
  return out;
}

AdaptedResult adapted_variant(const BranchComplex& c, CellId cell, const OccRef& start,
                              const OccRef& end) {
  auto g = build_transition_graph(c);
  if (find_twisted_curve(g, Polarity::positive) || find_twisted_curve(g, Polarity::negative))
    throw ComplexError("E_HAS_TWISTED", "complex already has a twisted curve");
  for (Variant v : {Variant::neutral, Variant::over, Variant::under}) {
    SplitMove m{cell, start, end, v};
    SplitOutcome out = apply_split(c, m);
    auto ng = build_transition_graph(out.complex);
    if (!find_twisted_curve(ng, Polarity::positive) && !find_twisted_curve(ng, Polarity::negative))
      return {v, std::move(out)};
  }
  throw ComplexError("E_THEOREM_VIOLATION", "no splitting variant is adapted");
}

}  // namespace bsc
