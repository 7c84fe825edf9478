#include <algorithm>
#include <cstdlib>

#include "bsc/io.hpp"
#include "bsc/twisted.hpp"
#include "bsc/validate.hpp"
#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bsc;

namespace {
std::string corpus(const std::string& name) {
  const char* dir = std::getenv("BSC_CORPUS");
  return std::string(dir ? dir : "corpus") + "/" + name;
}
}  // namespace

TEST_CASE("empty singular locus: smooth-only graph, no witnesses") {
  auto c = load_complex_file(corpus("annulus.bsc"));
  auto g = build_transition_graph(c);
  CHECK(g.nodes.empty());
  CHECK(!find_twisted_curve(g, Polarity::positive));
  CHECK(!find_twisted_curve(g, Polarity::negative));
}

TEST_CASE("one double point yields eight corner arcs, half each polarity") {
  auto c = load_complex_file(corpus("twisted_disk.bsc"));
  auto g = build_transition_graph(c);
  int asc0 = 0, desc0 = 0;
  for (const auto& a : g.arcs) {
    if (a.at != 0) continue;
    asc0 += a.label == ArcLabel::ascending;
    desc0 += a.label == ArcLabel::descending;
  }
  CHECK(asc0 == 4);
  CHECK(desc0 == 4);
  CHECK(asc0 + desc0 == 8);
}

TEST_CASE("twisted disk corpus has a negative witness, validated") {
  auto c = load_complex_file(corpus("twisted_disk.bsc"));
  auto g = build_transition_graph(c);
  auto w = find_twisted_curve(g, Polarity::negative);
  REQUIRE(w.has_value());
  CHECK(witness_valid(*w, g));
  CHECK(witness_simple(*w));
  CHECK(w->corner_count() >= 1);
  CHECK(testing::oracle_has_twisted_walk(g, Polarity::negative));
  // the obstruction fires on the lens and names its sign
  auto obs = nonport_obstruction(c);
  REQUIRE(obs.has_value());
  CHECK(obs->first == 0);
  CHECK(obs->second == -1);
}

TEST_CASE("annulus of contact: no twisted curve, no obstruction") {
  auto c = load_complex_file(corpus("annulus_of_contact.bsc"));
  auto g = build_transition_graph(c);
  CHECK(!find_twisted_curve(g, Polarity::positive));
  CHECK(!find_twisted_curve(g, Polarity::negative));
  CHECK(!nonport_obstruction(c));
}

TEST_CASE("hidden twisted disks: witnesses without a sector obstruction") {
  for (const char* name : {"notnecess.bsc", "dcvv.bsc"}) {
    auto c = load_complex_file(corpus(name));
    auto g = build_transition_graph(c);
    auto w = find_twisted_curve(g, Polarity::negative);
    REQUIRE(w.has_value());
    CHECK(witness_valid(*w, g));
    CHECK(witness_simple(*w));
    CHECK(testing::oracle_has_twisted_walk(g, Polarity::negative));
    CHECK(!nonport_obstruction(c));
  }
}

TEST_CASE("no_twist_demo is twisted-free") {
  auto c = load_complex_file(corpus("no_twist_demo.bsc"));
  auto g = build_transition_graph(c);
  CHECK(!find_twisted_curve(g, Polarity::positive));
  CHECK(!find_twisted_curve(g, Polarity::negative));
}

TEST_CASE("detector agrees with the bounded walk oracle on random complexes") {
  testing::Rng rng(7001);
  int with_dp = 0;
  for (int i = 0; i < 200; ++i) {
    auto c = testing::random_complex_retry(rng, 6);
    auto g = build_transition_graph(c);
    for (Polarity p : {Polarity::positive, Polarity::negative}) {
      bool mine = find_twisted_curve(g, p).has_value();
      bool oracle = testing::oracle_has_twisted_walk(g, p);
      CHECK(mine == oracle);
    }
    for (const auto& v : c.vertices) with_dp += v.kind == VertexKind::double_point;
  }
  CHECK(with_dp > 0);
}

TEST_CASE("polarity duality: reversing orientation swaps positive and negative") {
  testing::Rng rng(7002);
  for (int i = 0; i < 100; ++i) {
    auto c = testing::random_complex_retry(rng, 5);
    auto g = build_transition_graph(c);
    // reversed graph: flip every node direction and swap labels
    TransitionGraph r = g;
    for (std::size_t k = 0; k < g.arcs.size(); ++k) {
      const auto& a = g.arcs[k];
      const auto& from = g.nodes[static_cast<std::size_t>(a.from)];
      const auto& to = g.nodes[static_cast<std::size_t>(a.to)];
      auto& b = r.arcs[k];
      b.from = r.node_id({to.edge, !to.forward});
      b.to = r.node_id({from.edge, !from.forward});
      if (a.label == ArcLabel::ascending)
        b.label = ArcLabel::descending;
      else if (a.label == ArcLabel::descending)
        b.label = ArcLabel::ascending;
    }
    CHECK(find_twisted_curve(g, Polarity::positive).has_value() ==
          find_twisted_curve(r, Polarity::negative).has_value());
    CHECK(find_twisted_curve(g, Polarity::negative).has_value() ==
          find_twisted_curve(r, Polarity::positive).has_value());
  }
}

TEST_CASE("extract_simple: fixed point and doubled loops") {
  auto c = load_complex_file(corpus("twisted_disk.bsc"));
  auto g = build_transition_graph(c);
  auto w = find_twisted_curve(g, Polarity::negative);
  REQUIRE(w.has_value());

  SUBCASE("already-simple witnesses are unchanged") {
    auto s = extract_simple(*w, g);
    CHECK(s == *w);
  }
  SUBCASE("a doubled traversal shortens to a simple loop") {
    TwistedWitness dbl = *w;
    dbl.steps.insert(dbl.steps.end(), w->steps.begin(), w->steps.end());
    CHECK(!witness_simple(dbl));
    CHECK(witness_valid(dbl, g));
    auto s = extract_simple(dbl, g);
    CHECK(witness_simple(s));
    CHECK(witness_valid(s, g));
    CHECK(s.corner_count() <= w->corner_count());
  }
}

TEST_CASE("returned witnesses are always simple and valid") {
  testing::Rng rng(7003);
  for (int i = 0; i < 100; ++i) {
    auto c = testing::random_complex_retry(rng, 6);
    auto g = build_transition_graph(c);
    for (Polarity p : {Polarity::positive, Polarity::negative}) {
      auto w = find_twisted_curve(g, p);
      if (!w) continue;
      CHECK(witness_valid(*w, g));
      CHECK(witness_simple(*w));
    }
  }
}
