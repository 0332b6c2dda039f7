#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "treecap/flow.hpp"
#include "treecap/rng.hpp"
#include "treecap/tree.hpp"

using namespace treecap;

TEST_CASE("uniform leaf flow on regular trees") {
  for (int b : {2, 3}) {
    Tree t = regular_tree(b, 4);
    Flow u = uniform_leaf_flow(t);
    CHECK(is_unit_flow(t, u, 1e-12));
    for (int v = 0; v < t.vertex_count(); ++v) {
      CHECK(u.at(v) == doctest::Approx(std::pow(b, -t.depth(v))));
    }
    auto s = level_square_sums(t, u);
    for (int n = 0; n <= 4; ++n) {
      CHECK(s[n] == doctest::Approx(std::pow(b, -n)));
    }
  }
}

TEST_CASE("uniform leaf flow counts descendants") {
  Tree t = parse_child_counts("2 1 0 2 0 0");
  Flow u = uniform_leaf_flow(t);
  auto level1 = t.level(1);
  CHECK(u.at(level1[0]) == doctest::Approx(1.0 / 3.0));
  CHECK(u.at(level1[1]) == doctest::Approx(2.0 / 3.0));
  for (int leaf : t.level(2)) {
    CHECK(u.at(leaf) == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("path flow is constant one") {
  Tree path = regular_tree(1, 6);
  Flow u = uniform_leaf_flow(path);
  for (int v = 0; v < path.vertex_count(); ++v) {
    CHECK(u.at(v) == doctest::Approx(1.0));
  }
}

TEST_CASE("flow construction validates") {
  Tree t = regular_tree(2, 1);
  std::vector<double> w{0.25, 0.75};
  Flow f = flow_from_leaf_weights(t, w);
  CHECK(is_unit_flow(t, f));
  CHECK(f.root() == doctest::Approx(1.0));

  std::vector<double> neg{-0.5, 1.5};
  CHECK_THROWS(flow_from_leaf_weights(t, neg));
  std::vector<double> wrong_size{1.0};
  CHECK_THROWS(flow_from_leaf_weights(t, wrong_size));

  Flow broken = f;
  broken.value[1] = 0.9;
  CHECK(!is_flow(t, broken));
}

TEST_CASE("flow bound stats on the regular tree") {
  Tree t = regular_tree(3, 5);
  std::vector<double> m(6);
  m[0] = 1.0;
  for (int n = 1; n <= 5; ++n) m[n] = m[n - 1] * 3.0;
  auto stats = flow_bound_stats(t, uniform_leaf_flow(t), m);
  CHECK(stats.c == doctest::Approx(1.0));
  for (double v : stats.profile) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("flow bound stats on a sampled tree") {
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.0, 0.5});
  std::vector<double> m(17);
  m[0] = 1.0;
  for (int n = 1; n <= 16; ++n) m[n] = m[n - 1] * 2.0;
  Tree t = sample_gw(law, 16, 3);
  auto stats = flow_bound_stats(t, uniform_leaf_flow(t), m);
  CHECK(stats.c >= 1.0);  // the root term alone gives M_0 S_0 = 1
  CHECK(std::isfinite(stats.c));
  CHECK(stats.profile.size() == 17);
}

TEST_CASE("pruned flow keeps everything on regular trees") {
  // W is identically 1 and the thresholds M_n a^{-n/2} = 2^{n/2} all exceed
  // 1, so no ray is dropped at any cutoff.
  Tree t = regular_tree(2, 8);
  Environment env = Environment::constant(OffspringLaw::deterministic(2), 8);
  for (int cutoff : {0, 2, 5}) {
    auto result = bounded_flow_bpve(t, env, cutoff);
    CHECK(result.pruned_leaves == 0);
    Flow u = uniform_leaf_flow(t);
    for (int v = 0; v < t.vertex_count(); ++v) {
      CHECK(result.flow.at(v) == doctest::Approx(u.at(v)));
    }
  }
}

TEST_CASE("pruned flow usually survives on supercritical samples") {
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.0, 0.5});
  Environment env = Environment::constant(law, 12);
  int nonempty = 0;
  const int seeds = 500;
  for (int i = 0; i < seeds; ++i) {
    Tree t = sample_bpve(env, 12, 40000 + i);
    try {
      auto result = bounded_flow_bpve(t, env, 4);
      CHECK(is_unit_flow(t, result.flow, 1e-9));
      CHECK(result.c_actual > 0.0);
      CHECK(result.c_bound > 0.0);
      ++nonempty;
    } catch (const EmptySupportError&) {
    }
  }
  CHECK(nonempty >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("pruned flow rejects bad arguments") {
  Tree t = regular_tree(2, 4);
  Environment env = Environment::constant(OffspringLaw::deterministic(2), 4);
  CHECK_THROWS(bounded_flow_bpve(t, env, 4));   // cutoff not below height
  Environment subcritical =
      Environment::constant(OffspringLaw::deterministic(1), 4);
  Tree path = regular_tree(1, 4);
  CHECK_THROWS(bounded_flow_bpve(path, subcritical, 1));  // a = 1
}
