#include "bsc/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bsc {

using json = nlohmann::ordered_json;

namespace {

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError(where, "unknown field '" + it.key() + "'");
}

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where, std::string("missing field '") + key + "'");
  return *it;
}

EndRef parse_end_ref(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(where, "edge-end reference must be [edge, end]");
  EndRef r;
  r.edge = j[0].get<EdgeId>();
  r.end = j[1].get<int>();
  if (r.end != 0 && r.end != 1) throw ParseError(where, "edge end must be 0 or 1");
  return r;
}

OccRef parse_occ_ref(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ParseError(where, "occurrence reference must be [cell, word, pos]");
  OccRef r;
  r.cell = j[0].get<CellId>();
  r.word = j[1].get<int>();
  r.pos = j[2].get<int>();
  return r;
}

}  // namespace

BranchComplex parse_complex(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "document must be an object");
  expect_keys(doc, {"meta", "vertices", "edges", "cells"}, "$");

  BranchComplex c;
  if (doc.contains("meta")) {
    const json& m = doc["meta"];
    expect_keys(m, {"name", "source", "comment"}, "$.meta");
    if (m.contains("name")) c.meta.name = m["name"].get<std::string>();
    if (m.contains("source")) c.meta.source = m["source"].get<std::string>();
    if (m.contains("comment")) c.meta.comment = m["comment"].get<std::string>();
  }

  std::size_t idx = 0;
  for (const json& jv : doc.value("vertices", json::array())) {
    std::string where = "$.vertices[" + std::to_string(idx++) + "]";
    expect_keys(jv, {"id", "kind", "sign", "over_strand", "strands"}, where);
    Vertex v;
    v.id = need(jv, "id", where).get<VertexId>();
    std::string kind = need(jv, "kind", where).get<std::string>();
    if (kind == "double_point") {
      v.kind = VertexKind::double_point;
      DoublePointData dp;
      dp.sign = need(jv, "sign", where).get<int>();
      if (dp.sign != 1 && dp.sign != -1) throw ParseError(where, "sign must be +1 or -1");
      dp.over_strand = need(jv, "over_strand", where).get<int>();
      if (dp.over_strand != 1 && dp.over_strand != 2)
        throw ParseError(where, "over_strand must be 1 or 2");
      const json& js = need(jv, "strands", where);
      if (!js.is_array() || js.size() != 2) throw ParseError(where, "strands must list two pairs");
      for (int s = 0; s < 2; ++s) {
        if (!js[s].is_array() || js[s].size() != 2)
          throw ParseError(where, "each strand must pair two edge-ends");
        for (int k = 0; k < 2; ++k)
          dp.strands[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)] =
              parse_end_ref(js[s][k], where + ".strands");
      }
      v.dp = dp;
    } else if (kind == "subdivision") {
      v.kind = VertexKind::subdivision;
      for (const char* f : {"sign", "over_strand", "strands"})
        if (jv.contains(f)) throw ParseError(where, std::string("field '") + f + "' only applies to double points");
    } else {
      throw ParseError(where, "unknown vertex kind '" + kind + "'");
    }
    c.vertices.push_back(std::move(v));
  }

  idx = 0;
  for (const json& je : doc.value("edges", json::array())) {
    std::string where = "$.edges[" + std::to_string(idx++) + "]";
    expect_keys(je, {"id", "ends", "kind", "branch_side", "stop_side", "attach_level"}, where);
    Edge e;
    e.id = need(je, "id", where).get<EdgeId>();
    if (e.id < 1) throw ParseError(where, "edge ids must be >= 1");
    const json& ends = need(je, "ends", where);
    if (!ends.is_array() || ends.size() != 2) throw ParseError(where, "ends must be [tail, head]");
    e.ends = {ends[0].get<VertexId>(), ends[1].get<VertexId>()};
    std::string kind = need(je, "kind", where).get<std::string>();
    if (kind == "singular") {
      e.kind = EdgeKind::singular;
      e.branch_side = parse_occ_ref(need(je, "branch_side", where), where + ".branch_side");
      e.stop_side = parse_occ_ref(need(je, "stop_side", where), where + ".stop_side");
      std::string lvl = need(je, "attach_level", where).get<std::string>();
      if (lvl == "above")
        e.attach_level = AttachLevel::above;
      else if (lvl == "below")
        e.attach_level = AttachLevel::below;
      else
        throw ParseError(where, "attach_level must be 'above' or 'below'");
    } else if (kind == "auxiliary") {
      e.kind = EdgeKind::auxiliary;
      for (const char* f : {"branch_side", "stop_side", "attach_level"})
        if (je.contains(f)) throw ParseError(where, std::string("field '") + f + "' only applies to singular edges");
    } else {
      throw ParseError(where, "unknown edge kind '" + kind + "'");
    }
    c.edges.push_back(std::move(e));
  }

  idx = 0;
  for (const json& jc : doc.value("cells", json::array())) {
    std::string where = "$.cells[" + std::to_string(idx++) + "]";
    expect_keys(jc, {"id", "boundary", "corners", "genus"}, where);
    Cell cell;
    cell.id = need(jc, "id", where).get<CellId>();
    const json& jb = need(jc, "boundary", where);
    if (!jb.is_array()) throw ParseError(where, "boundary must be an array of words");
    for (const json& jw : jb) {
      if (!jw.is_array() || jw.empty())
        throw ParseError(where, "each boundary word must be a non-empty array of signed edge ids");
      std::vector<std::int64_t> word;
      for (const json& je : jw) {
        std::int64_t v = je.get<std::int64_t>();
        if (v == 0) throw ParseError(where, "boundary entries are nonzero signed edge ids");
        word.push_back(v);
      }
      cell.boundary.push_back(std::move(word));
    }
    const json& jq = need(jc, "corners", where);
    if (!jq.is_array() || jq.size() != cell.boundary.size())
      throw ParseError(where, "corners must align with boundary words");
    for (std::size_t w = 0; w < cell.boundary.size(); ++w) {
      if (!jq[w].is_array() || jq[w].size() != cell.boundary[w].size())
        throw ParseError(where, "corner counts must align with boundary entries");
      std::vector<int> qs;
      for (const json& q : jq[w]) {
        int v = q.get<int>();
        if (v < 1 || v > 3) throw ParseError(where, "corner quadrant counts lie in {1,2,3}");
        qs.push_back(v);
      }
      cell.corners.push_back(std::move(qs));
    }
    if (jc.contains("genus")) cell.genus = jc["genus"].get<std::uint32_t>();
    c.cells.push_back(std::move(cell));
  }

  // referential integrity so the value is navigable
  std::set<VertexId> vids;
  for (const auto& v : c.vertices)
    if (!vids.insert(v.id).second)
      throw ParseError("$.vertices", "duplicate vertex id " + std::to_string(v.id));
  std::set<EdgeId> eids;
  for (const auto& e : c.edges) {
    if (!eids.insert(e.id).second)
      throw ParseError("$.edges", "duplicate edge id " + std::to_string(e.id));
    for (auto vid : e.ends)
      if (!vids.count(vid))
        throw ParseError("$.edges", "edge " + std::to_string(e.id) + " references unknown vertex");
  }
  std::set<CellId> cids;
  for (const auto& cell : c.cells)
    if (!cids.insert(cell.id).second)
      throw ParseError("$.cells", "duplicate cell id " + std::to_string(cell.id));
  for (const auto& cell : c.cells)
    for (const auto& word : cell.boundary)
      for (auto entry : word)
        if (!eids.count(entry_edge(entry)))
          throw ParseError("$.cells", "cell " + std::to_string(cell.id) + " references unknown edge");
  auto check_occ = [&](const OccRef& o, EdgeId e, const std::string& what) {
    const Cell* cell = c.find_cell(o.cell);
    if (!cell) throw ParseError("$.edges", what + " of edge " + std::to_string(e) + " names unknown cell");
    if (o.word < 0 || o.word >= static_cast<int>(cell->boundary.size()) || o.pos < 0 ||
        o.pos >= static_cast<int>(cell->boundary[static_cast<std::size_t>(o.word)].size()))
      throw ParseError("$.edges", what + " of edge " + std::to_string(e) + " is out of range");
  };
  for (const auto& e : c.edges) {
    if (e.branch_side) check_occ(*e.branch_side, e.id, "branch_side");
    if (e.stop_side) check_occ(*e.stop_side, e.id, "stop_side");
  }
  for (const auto& v : c.vertices)
    if (v.dp)
      for (const auto& strand : v.dp->strands)
        for (const auto& end : strand)
          if (!eids.count(end.edge))
            throw ParseError("$.vertices", "strand of vertex " + std::to_string(v.id) + " references unknown edge");

  c.sort_entities();
  return c;
}

std::string serialize_complex(const BranchComplex& cin) {
  BranchComplex c = cin;
  c.sort_entities();
  json doc = json::object();
  json m = json::object();
  if (!c.meta.name.empty()) m["name"] = c.meta.name;
  if (!c.meta.source.empty()) m["source"] = c.meta.source;
  if (!c.meta.comment.empty()) m["comment"] = c.meta.comment;
  doc["meta"] = m;
  doc["vertices"] = json::array();
  for (const auto& v : c.vertices) {
    json jv = json::object();
    jv["id"] = v.id;
    jv["kind"] = v.kind == VertexKind::double_point ? "double_point" : "subdivision";
    if (v.dp) {
      jv["sign"] = v.dp->sign;
      jv["over_strand"] = v.dp->over_strand;
      json js = json::array();
      for (const auto& strand : v.dp->strands) {
        json jp = json::array();
        for (const auto& end : strand) jp.push_back(json::array({end.edge, end.end}));
        js.push_back(jp);
      }
      jv["strands"] = js;
    }
    doc["vertices"].push_back(jv);
  }
  doc["edges"] = json::array();
  for (const auto& e : c.edges) {
    json je = json::object();
    je["id"] = e.id;
    je["ends"] = json::array({e.ends[0], e.ends[1]});
    je["kind"] = e.kind == EdgeKind::singular ? "singular" : "auxiliary";
    if (e.branch_side)
      je["branch_side"] = json::array({e.branch_side->cell, e.branch_side->word, e.branch_side->pos});
    if (e.stop_side)
      je["stop_side"] = json::array({e.stop_side->cell, e.stop_side->word, e.stop_side->pos});
    if (e.attach_level)
      je["attach_level"] = *e.attach_level == AttachLevel::above ? "above" : "below";
    doc["edges"].push_back(je);
  }
  doc["cells"] = json::array();
  for (const auto& cell : c.cells) {
    json jc = json::object();
    jc["id"] = cell.id;
    json jb = json::array();
    for (const auto& word : cell.boundary) jb.push_back(word);
    jc["boundary"] = jb;
    json jq = json::array();
    for (const auto& qs : cell.corners) jq.push_back(qs);
    jc["corners"] = jq;
    if (cell.genus != 0) jc["genus"] = cell.genus;
    doc["cells"].push_back(jc);
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "cannot write file");
  out << content;
}

BranchComplex load_complex_file(const std::string& path) {
  return parse_complex(read_file(path));
}

void save_complex_file(const BranchComplex& c, const std::string& path) {
  write_file(path, serialize_complex(c));
}

}  // namespace bsc
