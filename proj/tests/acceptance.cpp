// Acceptance suite: one pass/fail line per criterion, plus a determinism
// check that reruns everything with the same seeds and compares the reports.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bsc/classify.hpp"
#include "bsc/cli.hpp"
#include "bsc/io.hpp"
#include "bsc/resolve.hpp"
#include "bsc/splitting.hpp"
#include "bsc/tracks.hpp"
#include "bsc/twisted.hpp"
#include "bsc/validate.hpp"
#include "json.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bsc;
using nlohmann::ordered_json;

namespace {

std::string g_corpus = "corpus";
std::string path(const std::string& name) { return g_corpus + "/" + name; }

struct Criterion {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

double now_minus(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// C1: peeling decomposition agrees with the smooth-cycle check on >= 1000
// random circular tracks with at most 10 events
Criterion criterion1(std::uint64_t seed, ordered_json& rep) {
  Criterion c{"C1", false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  testing::Rng rng(seed);
  int agree = 0, total = 0, disagree = 0;
  for (int i = 0; i < 1000; ++i) {
    auto t = testing::random_circular_track(rng, 10);
    bool ok_i = !check_condition_i(t).has_value();
    bool deco = std::holds_alternative<CircleDecomposition>(peel_decompose(t));
    total += 1;
    (ok_i == deco ? agree : disagree) += 1;
  }
  c.pass = disagree == 0 && total >= 1000;
  c.detail = std::to_string(total) + " tracks, " + std::to_string(disagree) + " disagreements";
  c.seconds = now_minus(t0);
  rep["c1"] = {{"tracks", total}, {"disagreements", disagree}};
  return c;
}

// C2 + C3: detector vs bounded-walk oracle on >= 500 complexes with <= 6
// double points; every witness doubled into a non-simple one and re-extracted
void criteria23(std::uint64_t seed, Criterion& c2, Criterion& c3, ordered_json& rep) {
  auto t0 = std::chrono::steady_clock::now();
  testing::Rng rng(seed);
  int total = 0, disagree = 0, witnesses = 0, extraction_bad = 0, nonstrict = 0;
  for (int i = 0; i < 500; ++i) {
    auto c = testing::random_complex_retry(rng, 6);
    auto g = build_transition_graph(c);
    total += 1;
    for (Polarity p : {Polarity::positive, Polarity::negative}) {
      auto w = find_twisted_curve(g, p);
      if (w.has_value() != testing::oracle_has_twisted_walk(g, p)) disagree += 1;
      if (!w) continue;
      witnesses += 1;
      // a doubled traversal is a canonical non-simple witness
      TwistedWitness dbl = *w;
      dbl.steps.insert(dbl.steps.end(), w->steps.begin(), w->steps.end());
      std::vector<int> trace;
      auto s = extract_simple(dbl, g, &trace);
      std::set<int> support;
      for (const auto& st : w->steps) support.insert(st.node);
      bool contained = true;
      for (const auto& st : s.steps) contained = contained && support.count(st.node) > 0;
      if (!(witness_simple(s) && witness_valid(s, g) && contained &&
            s.corner_count() <= dbl.corner_count()))
        extraction_bad += 1;
      for (std::size_t k = 1; k < trace.size(); ++k)
        if (trace[k] >= trace[k - 1]) nonstrict += 1;
    }
  }
  c2 = {"C2", disagree == 0 && total >= 500,
        std::to_string(total) + " complexes, " + std::to_string(disagree) + " disagreements",
        now_minus(t0)};
  c3 = {"C3", extraction_bad == 0 && nonstrict == 0 && witnesses > 0,
        std::to_string(witnesses) + " witnesses, " + std::to_string(extraction_bad) +
            " bad extractions, " + std::to_string(nonstrict) + " non-strict steps",
        0};
  rep["c2"] = {{"complexes", total}, {"disagreements", disagree}};
  rep["c3"] = {{"witnesses", witnesses},
               {"bad_extractions", extraction_bad},
               {"non_strict", nonstrict}};
}

// C4: double point deltas, opposite signs, and the over/under involution on
// every face-to-face arc of generated complexes
Criterion criterion4(std::uint64_t seed, ordered_json& rep) {
  Criterion c{"C4", false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  testing::Rng rng(seed);
  int moves = 0, bad = 0;
  auto dp_count = [](const BranchComplex& x) {
    int n = 0;
    for (const auto& v : x.vertices) n += v.kind == VertexKind::double_point;
    return n;
  };
  auto sign_sum = [](const BranchComplex& x) {
    int n = 0;
    for (const auto& v : x.vertices)
      if (v.dp) n += v.dp->sign;
    return n;
  };
  for (int i = 0; i < 120; ++i) {
    auto cx = testing::random_complex_retry(rng, 4);
    for (const auto& cell : cx.cells) {
      for (const auto& [a, b] : find_face_to_face_arcs(cx, cell.id)) {
        SplitOutcome over, under, neutral;
        try {
          neutral = apply_split(cx, {cell.id, a, b, Variant::neutral});
          over = apply_split(cx, {cell.id, a, b, Variant::over});
          under = apply_split(cx, {cell.id, a, b, Variant::under});
        } catch (const ComplexError&) {
          bad += 3;
          moves += 3;
          continue;
        }
        moves += 3;
        bool ok = validate_complex(neutral.complex).ok() && validate_complex(over.complex).ok() &&
                  validate_complex(under.complex).ok();
        ok = ok && dp_count(neutral.complex) == dp_count(cx);
        ok = ok && dp_count(over.complex) == dp_count(cx) + 2;
        ok = ok && dp_count(under.complex) == dp_count(cx) + 2;
        ok = ok && sign_sum(neutral.complex) == sign_sum(cx);
        ok = ok && sign_sum(over.complex) == sign_sum(cx);
        ok = ok && sign_sum(under.complex) == sign_sum(cx);
        // opposite signs at the two new points
        const Vertex* qg = over.complex.find_vertex(over.q_g);
        const Vertex* qd = over.complex.find_vertex(over.q_d);
        ok = ok && qg && qd && qg->dp && qd->dp && qg->dp->sign == -qd->dp->sign;
        // involution: identical singular graph, double point data swapped
        ok = ok && over.complex.edges.size() == under.complex.edges.size() &&
             over.complex.vertices.size() == under.complex.vertices.size();
        if (ok) {
          for (std::size_t k = 0; k < over.complex.edges.size(); ++k) {
            const auto& ea = over.complex.edges[k];
            const auto& eb = under.complex.edges[k];
            ok = ok && ea.id == eb.id && ea.ends == eb.ends && ea.kind == eb.kind;
          }
          for (std::size_t k = 0; k < over.complex.vertices.size(); ++k) {
            const auto& va = over.complex.vertices[k];
            auto vb = under.complex.vertices[k];
            ok = ok && va.id == vb.id && va.kind == vb.kind;
            if (!ok) break;
            if (vb.id == under.q_g || vb.id == under.q_d) {
              vb.dp->over_strand = vb.dp->over_strand == 1 ? 2 : 1;
              vb.dp->sign = -vb.dp->sign;
            }
            if (va.dp)
              ok = ok && vb.dp && va.dp->sign == vb.dp->sign &&
                   va.dp->over_strand == vb.dp->over_strand && va.dp->strands == vb.dp->strands;
          }
        }
        if (!ok) bad += 1;
      }
    }
  }
  c.pass = bad == 0 && moves > 0;
  c.detail = std::to_string(moves) + " moves, " + std::to_string(bad) + " violations";
  c.seconds = now_minus(t0);
  rep["c4"] = {{"moves", moves}, {"violations", bad}};
  return c;
}

// C5: an adapted variant exists for every face-to-face arc of >= 500
// twisted-curve-free complexes
Criterion criterion5(std::uint64_t seed, ordered_json& rep) {
  Criterion c{"C5", false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  testing::Rng rng(seed);
  int free_complexes = 0, arcs = 0, violations = 0;
  int attempts = 0;
  while (free_complexes < 500 && attempts < 20000) {
    ++attempts;
    auto cx = testing::random_complex_retry(rng, 5);
    auto g = build_transition_graph(cx);
    if (find_twisted_curve(g, Polarity::positive) || find_twisted_curve(g, Polarity::negative))
      continue;
    free_complexes += 1;
    for (const auto& cell : cx.cells) {
      for (const auto& [a, b] : find_face_to_face_arcs(cx, cell.id)) {
        arcs += 1;
        try {
          adapted_variant(cx, cell.id, a, b);
        } catch (const ComplexError& e) {
          violations += 1;
        }
      }
    }
  }
  c.pass = violations == 0 && free_complexes >= 500;
  c.detail = std::to_string(free_complexes) + " twisted-free complexes, " +
             std::to_string(arcs) + " arcs, " + std::to_string(violations) + " violations";
  c.seconds = now_minus(t0);
  rep["c5"] = {{"complexes", free_complexes}, {"arcs", arcs}, {"violations", violations}};
  return c;
}

// C6: the sector obstruction fires exactly where it should, and the resolve
// command refuses the twisted disk via the twisted-curve gate
Criterion criterion6(ordered_json& rep) {
  Criterion c{"C6", false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  {
    auto cx = load_complex_file(path("twisted_disk.bsc"));
    auto obs = nonport_obstruction(cx);
    ok = ok && obs.has_value() && obs->second == -1;
  }
  for (const char* name : {"annulus.bsc", "notnecess.bsc"}) {
    auto cx = load_complex_file(path(name));
    ok = ok && !nonport_obstruction(cx).has_value();
  }
  std::string out, err;
  int code = run_command({"resolve", path("twisted_disk.bsc"), "--steps", "3"}, out, err);
  bool gate = code == 1 && out.find("E_HAS_TWISTED") != std::string::npos;
  ok = ok && gate;
  c.pass = ok;
  c.detail = std::string("obstruction checks ") + (ok ? "hold" : "fail") +
             ", resolve exit " + std::to_string(code);
  c.seconds = now_minus(t0);
  rep["c6"] = {{"ok", ok}, {"resolve_exit", code}};
  return c;
}

// C7: witnesses exist on the section-4 corpus and pass the oracle
Criterion criterion7(ordered_json& rep) {
  Criterion c{"C7", false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (const char* name : {"dcvv.bsc", "notnecess.bsc"}) {
    auto cx = load_complex_file(path(name));
    auto g = build_transition_graph(cx);
    bool any = false;
    for (Polarity p : {Polarity::positive, Polarity::negative}) {
      auto w = find_twisted_curve(g, p);
      if (!w) continue;
      any = true;
      ok = ok && witness_valid(*w, g) && witness_simple(*w) &&
           testing::oracle_has_twisted_walk(g, p);
    }
    ok = ok && any;
  }
  c.pass = ok;
  c.detail = ok ? "witnesses found and oracle-confirmed" : "missing or unconfirmed witness";
  c.seconds = now_minus(t0);
  rep["c7"] = {{"ok", ok}};
  return c;
}

// C8: full resolving run on the demo corpus with every stated invariant
Criterion criterion8(ordered_json& rep) {
  Criterion c{"C8", false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    auto cx = load_complex_file(path("no_twist_demo.bsc"));
    auto r = refine_decomposition(cx);
    auto st = initial_split(r);
    const std::uint64_t steps = 3 * st.frame.vertices.size();
    std::map<VertexId, std::size_t> last_code;
    std::vector<VertexId> vids;
    for (const auto& v : st.frame.vertices) vids.push_back(v.id);
    std::sort(vids.begin(), vids.end());
    for (std::uint64_t i = 0; i < steps; ++i) {
      const VertexId v = schedule(vids, st.stage);
      resolve_step(st);
      auto g = build_transition_graph(st.complex);
      ok = ok && !find_twisted_curve(g, Polarity::positive) &&
           !find_twisted_curve(g, Polarity::negative);
      // the scheduled zone is resolved right after its pass
      auto pre = lamination_prefix(st);
      ok = ok && pre.zones.at(v).resolved;
      for (const auto& [e, prof] : pre.edges)
        for (int n : prof.counts) ok = ok && n >= 1;
      for (const auto& [vid, zp] : pre.zones) {
        auto it = last_code.find(vid);
        if (it != last_code.end()) ok = ok && zp.transversal.size() >= it->second;
        last_code[vid] = zp.transversal.size();
      }
      for (const auto& cv : certify_null_holonomy(st)) ok = ok && cv.ok;
    }
    ok = ok && st.backward_violations == 0;
    detail = std::to_string(steps) + " steps, " + std::to_string(st.log.size()) + " log entries";
    ordered_json jlog = ordered_json::array();
    for (const auto& le : st.log)
      jlog.push_back({{"stage", le.stage}, {"kind", le.kind}, {"edge", le.edge},
                      {"variant", le.variant}});
    rep["c8"] = {{"ok", ok}, {"steps", steps}, {"log", jlog}};
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
    rep["c8"] = {{"ok", false}, {"error", e.what()}};
  }
  c.pass = ok;
  c.detail = detail;
  c.seconds = now_minus(t0);
  return c;
}

ordered_json run_all(std::uint64_t seed, std::vector<Criterion>& out) {
  ordered_json rep = ordered_json::object();
  out.push_back(criterion1(seed + 1, rep));
  Criterion c2, c3;
  criteria23(seed + 2, c2, c3, rep);
  out.push_back(c2);
  out.push_back(c3);
  out.push_back(criterion4(seed + 4, rep));
  out.push_back(criterion5(seed + 5, rep));
  out.push_back(criterion6(rep));
  out.push_back(criterion7(rep));
  out.push_back(criterion8(rep));
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 20260810;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--corpus") g_corpus = argv[i + 1];
    if (std::string(argv[i]) == "--seed") seed = std::stoull(argv[i + 1]);
  }
  std::vector<Criterion> crit;
  ordered_json rep1 = run_all(seed, crit);

  // C9: byte-identical reports on a rerun with the same seeds
  std::vector<Criterion> crit2;
  ordered_json rep2 = run_all(seed, crit2);
  Criterion c9{"C9", rep1.dump() == rep2.dump(), "", 0};
  c9.detail = c9.pass ? "reports byte-identical across reruns" : "reports differ";
  crit.push_back(c9);

  bool all = true;
  for (const auto& c : crit) {
    std::printf("%-3s %s  %s", c.id.c_str(), c.pass ? "PASS" : "FAIL", c.detail.c_str());
    if (c.seconds > 0) std::printf("  (%.1fs)", c.seconds);
    std::printf("\n");
    all = all && c.pass;
  }
  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
