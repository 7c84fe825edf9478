#include "bsc/cli.hpp"

#include <chrono>
#include <optional>
#include <sstream>

#include "bsc/classify.hpp"
#include "bsc/io.hpp"
#include "bsc/report.hpp"
#include "bsc/sha256.hpp"
#include "bsc/resolve.hpp"
#include "bsc/splitting.hpp"
#include "bsc/tracks.hpp"
#include "bsc/twisted.hpp"
#include "bsc/validate.hpp"

namespace bsc {

namespace {

using json = nlohmann::ordered_json;

json finding_json(const Finding& f) {
  return {{"code", f.code}, {"location", f.location}, {"message", f.message}};
}

json witness_json(const TwistedWitness& w, const TransitionGraph& g) {
  json steps = json::array();
  for (const auto& st : w.steps) {
    const auto& n = g.nodes[static_cast<std::size_t>(st.node)];
    steps.push_back({{"edge", n.edge},
                     {"dir", n.forward ? "+" : "-"},
                     {"label", st.label_to_next == ArcLabel::smooth
                                   ? "smooth"
                                   : st.label_to_next == ArcLabel::ascending ? "ascending"
                                                                             : "descending"}});
  }
  return {{"polarity", w.polarity == Polarity::positive ? "positive" : "negative"},
          {"corners", w.corner_count()},
          {"steps", steps}};
}

json cycle_json(const SmoothCycle& c) {
  json br = json::array();
  for (const auto& b : c.branchings)
    br.push_back({{"event", b.event},
                  {"dir", b.dir == BranchDir::direct ? "direct" : "backward"},
                  {"side", b.side == BranchSide::over ? "over" : "under"}});
  return {{"laps", c.laps}, {"positions", c.positions}, {"branchings", br}};
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int finish(json& rep, const Timer& t, int code, std::string& out) {
  rep["timing"] = {{"seconds", t.seconds()}};
  out = render_report(rep);
  return code;
}

std::optional<std::string> flag_value(std::vector<std::string>& args, const std::string& name) {
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == name && i + 1 < args.size()) {
      std::string v = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      return v;
    }
  return std::nullopt;
}

bool flag_present(std::vector<std::string>& args, const std::string& name) {
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == name) {
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  return false;
}

int cmd_validate(std::vector<std::string> args, std::string& out, std::string& err) {
  Timer t;
  if (args.empty()) {
    err = "usage: bsc validate <file.bsc>\n";
    return 2;
  }
  std::string bytes = read_file(args[0]);
  auto rep = make_report("validate", args[0], bytes);
  auto c = parse_complex(bytes);
  auto v = validate_complex(c);
  json je = json::array(), jw = json::array();
  for (const auto& f : v.errors) je.push_back(finding_json(f));
  for (const auto& f : v.warnings) jw.push_back(finding_json(f));
  rep["findings"] = {{"errors", je}, {"warnings", jw}};
  return finish(rep, t, v.ok() ? 0 : 1, out);
}

int cmd_twisted(std::vector<std::string> args, std::string& out, std::string& err) {
  Timer t;
  auto pol = flag_value(args, "--polarity").value_or("both");
  if (args.empty()) {
    err = "usage: bsc twisted <file.bsc> [--polarity positive|negative|both]\n";
    return 2;
  }
  std::string bytes = read_file(args[0]);
  auto rep = make_report("twisted", args[0], bytes);
  auto c = parse_complex(bytes);
  auto v = validate_complex(c);
  if (!v.ok()) {
    err = "complex fails validation\n";
    return 2;
  }
  auto g = build_transition_graph(c);
  json found = json::array();
  if (pol == "positive" || pol == "both") {
    auto w = find_twisted_curve(g, Polarity::positive);
    if (w) found.push_back(witness_json(*w, g));
  }
  if (pol == "negative" || pol == "both") {
    auto w = find_twisted_curve(g, Polarity::negative);
    if (w) found.push_back(witness_json(*w, g));
  }
  rep["findings"] = {{"witnesses", found}};
  return finish(rep, t, found.empty() ? 0 : 1, out);
}

int cmd_classify(std::vector<std::string> args, std::string& out, std::string& err) {
  Timer t;
  if (args.empty()) {
    err = "usage: bsc classify <file.bsc>\n";
    return 2;
  }
  std::string bytes = read_file(args[0]);
  auto rep = make_report("classify", args[0], bytes);
  auto c = parse_complex(bytes);
  auto v = validate_complex(c);
  if (!v.ok()) {
    err = "complex fails validation\n";
    return 2;
  }
  json cells = json::array();
  for (const auto& cell : c.cells) {
    auto cls = classify_cell(c, cell.id);
    json jc = {{"cell", cell.id}};
    switch (cls.kind) {
      case CellKind::plain: jc["class"] = "plain"; break;
      case CellKind::surface_of_contact: jc["class"] = "surface_of_contact"; break;
      case CellKind::sink_surface: jc["class"] = "sink_surface"; break;
      case CellKind::twisted_disk_of_contact:
        jc["class"] = "twisted_disk_of_contact";
        jc["sign"] = cls.sign;
        break;
    }
    cells.push_back(jc);
  }
  auto obs = nonport_obstruction(c);
  rep["findings"] = {{"cells", cells}};
  if (obs)
    rep["findings"]["obstruction"] = {{"cell", obs->first}, {"sign", obs->second}};
  return finish(rep, t, obs ? 1 : 0, out);
}

int cmd_split(std::vector<std::string> args, std::string& out, std::string& err) {
  Timer t;
  auto cell = flag_value(args, "--cell");
  auto start = flag_value(args, "--start-edge");
  auto end = flag_value(args, "--end-edge");
  auto variant = flag_value(args, "--variant").value_or("neutral");
  auto outfile = flag_value(args, "--out");
  if (args.empty() || !cell || !start || !end) {
    err = "usage: bsc split <file.bsc> --cell N --start-edge E --end-edge F "
          "[--variant neutral|over|under] [--out out.bsc]\n";
    return 2;
  }
  std::string bytes = read_file(args[0]);
  auto rep = make_report("split", args[0], bytes);
  auto c = parse_complex(bytes);
  const Edge* se = c.find_edge(static_cast<EdgeId>(std::stoul(*start)));
  const Edge* te = c.find_edge(static_cast<EdgeId>(std::stoul(*end)));
  if (!se || !te || !se->branch_side || !te->branch_side) {
    err = "anchor edges must be singular edges of the complex\n";
    return 2;
  }
  SplitMove m;
  m.cell = static_cast<CellId>(std::stoul(*cell));
  m.start = *se->branch_side;
  m.end = *te->branch_side;
  m.variant = variant == "over" ? Variant::over : variant == "under" ? Variant::under : Variant::neutral;
  SplitOutcome res;
  try {
    res = apply_split(c, m);
  } catch (const ComplexError& e) {
    err = std::string(e.what()) + "\n";
    return 2;
  }
  std::string serialized = serialize_complex(res.complex);
  if (outfile) write_file(*outfile, serialized);
  rep["findings"] = {{"variant", variant},
                     {"double_point_delta",
                      static_cast<int>(m.variant == Variant::neutral ? 0 : 2)},
                     {"new_double_points", m.variant == Variant::neutral
                                               ? json::array()
                                               : json::array({res.q_g, res.q_d})},
                     {"result_sha256", sha256_hex(serialized)}};
  return finish(rep, t, 0, out);
}

int cmd_tracks(std::vector<std::string> args, std::string& out, std::string& err) {
  Timer t;
  auto max_cycles = flag_value(args, "--max-cycles");
  if (args.size() < 2) {
    err = "usage: bsc tracks <file.ttk> cycles|check|peel [--max-cycles N]\n";
    return 2;
  }
  std::string bytes = read_file(args[0]);
  std::string sub = args[1];
  auto rep = make_report("tracks " + sub, args[0], bytes);
  TrainTrack tr = parse_track(bytes);
  std::size_t cap = max_cycles ? std::stoull(*max_cycles) : 100000;
  if (sub == "cycles") {
    auto cs = enumerate_smooth_cycles(tr, cap);
    json jc = json::array();
    for (const auto& c : cs) jc.push_back(cycle_json(c));
    rep["findings"] = {{"cycles", jc}};
    return finish(rep, t, 0, out);
  }
  if (sub == "check") {
    auto bad = check_condition_i(tr, cap);
    rep["findings"] = {{"ok", !bad.has_value()}};
    if (bad) rep["findings"]["violating_cycle"] = cycle_json(*bad);
    return finish(rep, t, bad ? 1 : 0, out);
  }
  if (sub == "peel") {
    auto res = peel_decompose(tr);
    if (std::holds_alternative<CircleDecomposition>(res)) {
      const auto& d = std::get<CircleDecomposition>(res);
      json jc = json::array();
      for (const auto& c : d.circles) jc.push_back(cycle_json(c));
      rep["findings"] = {{"decomposition", jc}, {"circles", d.circles.size()}};
      return finish(rep, t, 0, out);
    }
    const auto& p = std::get<TwistPattern>(res);
    rep["findings"] = {{"twist_pattern", cycle_json(p.top_circle)},
                       {"stage_track", serialize_track(p.stage)}};
    return finish(rep, t, 1, out);
  }
  err = "unknown tracks subcommand '" + sub + "'\n";
  return 2;
}

int cmd_resolve(std::vector<std::string> args, std::string& out, std::string& err) {
  Timer t;
  auto steps_s = flag_value(args, "--steps");
  bool assert_inv = flag_present(args, "--assert-invariants");
  auto outprefix = flag_value(args, "--out");
  if (args.empty()) {
    err = "usage: bsc resolve <file.bsc> [--steps N] [--assert-invariants] [--out prefix]\n";
    return 2;
  }
  std::string bytes = read_file(args[0]);
  auto rep = make_report("resolve", args[0], bytes);
  auto c = parse_complex(bytes);
  auto v = validate_complex(c);
  if (!v.ok()) {
    err = "complex fails validation\n";
    return 2;
  }
  auto refined = refine_decomposition(c);
  ResolveState st;
  try {
    st = initial_split(refined);
  } catch (const ComplexError& e) {
    if (e.code == "E_HAS_TWISTED") {
      auto g = build_transition_graph(strip_auxiliary(refined));
      json found = json::array();
      if (auto w = find_twisted_curve(g, Polarity::positive)) found.push_back(witness_json(*w, g));
      if (auto w = find_twisted_curve(g, Polarity::negative)) found.push_back(witness_json(*w, g));
      rep["findings"] = {{"error", "E_HAS_TWISTED"}, {"witnesses", found}};
      return finish(rep, t, 1, out);
    }
    err = std::string(e.what()) + "\n";
    return 2;
  }
  std::uint64_t steps = steps_s ? std::stoull(*steps_s) : 3 * st.frame.vertices.size();
  json stages = json::array();
  for (std::uint64_t i = 0; i < steps; ++i) {
    resolve_step(st);
    if (assert_inv) {
      auto pre = lamination_prefix(st);
      for (const auto& [e, prof] : pre.edges)
        for (int n : prof.counts)
          if (n < 1) throw ComplexError("E_INTERNAL", "plaque count dropped below one");
      auto cert = certify_null_holonomy(st);
      for (const auto& cv : cert)
        if (!cv.ok) throw ComplexError("E_INTERNAL", "null-holonomy certificate failed");
    }
  }
  auto pre = lamination_prefix(st);
  json zones = json::object();
  for (const auto& [vid, zp] : pre.zones)
    zones[std::to_string(vid)] = {{"resolved", zp.resolved}, {"transversal", zp.transversal}};
  json profiles = json::object();
  for (const auto& [e, prof] : pre.edges) profiles[std::to_string(e)] = prof.counts;
  auto cert = certify_null_holonomy(st);
  json jcert = json::array();
  bool all_ok = true;
  for (const auto& cv : cert) {
    jcert.push_back({{"cell", cv.cell}, {"ok", cv.ok}});
    all_ok = all_ok && cv.ok;
  }
  json jlog = json::array();
  for (const auto& le : st.log)
    jlog.push_back({{"stage", le.stage},
                    {"kind", le.kind},
                    {"edge", le.edge},
                    {"mark", le.mark},
                    {"variant", le.variant},
                    {"cell", le.cell}});
  rep["findings"] = {{"steps", steps},
                     {"zones", zones},
                     {"edge_profiles", profiles},
                     {"certificates", jcert},
                     {"log", jlog}};
  if (outprefix) write_file(*outprefix + ".report.json", render_report(strip_timing(rep)));
  return finish(rep, t, all_ok ? 0 : 1, out);
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::string& out, std::string& err) {
  if (argv.empty()) {
    err = "usage: bsc <validate|twisted|classify|split|tracks|resolve> ...\n";
    return 2;
  }
  std::vector<std::string> rest(argv.begin() + 1, argv.end());
  try {
    const std::string& cmd = argv[0];
    if (cmd == "validate") return cmd_validate(rest, out, err);
    if (cmd == "twisted") return cmd_twisted(rest, out, err);
    if (cmd == "classify") return cmd_classify(rest, out, err);
    if (cmd == "split") return cmd_split(rest, out, err);
    if (cmd == "tracks") return cmd_tracks(rest, out, err);
    if (cmd == "resolve") return cmd_resolve(rest, out, err);
    err = "unknown command '" + cmd + "'\n";
    return 2;
  } catch (const ParseError& e) {
    err = std::string("parse error: ") + e.what() + "\n";
    return 2;
  } catch (const ComplexError& e) {
    err = std::string(e.code) + ": " + e.what() + "\n";
    return 2;
  } catch (const TrackError& e) {
    err = std::string(e.code) + ": " + e.what() + "\n";
    return 2;
  } catch (const std::exception& e) {
    err = std::string("error: ") + e.what() + "\n";
    return 2;
  }
}

}  // namespace bsc
