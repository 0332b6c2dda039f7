#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "treecap/rng.hpp"
#include "treecap/tree.hpp"

using namespace treecap;

TEST_CASE("deterministic laws reproduce regular trees") {
  Tree binary = sample_gw(OffspringLaw::deterministic(2), 3, 42);
  CHECK(binary == regular_tree(2, 3));
  CHECK(binary.level_sizes() == std::vector<long long>{1, 2, 4, 8});

  Tree path = sample_gw(OffspringLaw::deterministic(1), 5, 7);
  CHECK(path.level_sizes() == std::vector<long long>{1, 1, 1, 1, 1, 1});
  CHECK(path.vertex_count() == 6);
}

TEST_CASE("level sizes track the branching mean") {
  // Oracle: E Z_n = m^n for any offspring law, by the branching recursion
  // E Z_{n+1} = m E Z_n. Sample mean of Z_10 / 2^10 must sit within three
  // standard errors of 1.
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.0, 0.5});
  CHECK(law.mean() == doctest::Approx(2.0));
  const int n_samples = 10000;
  const double scale = std::pow(2.0, 10);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    Tree t = sample_gw(law, 10, 1000 + i);
    double w = t.level_size(10) / scale;
    sum += w;
    sum_sq += w * w;
  }
  double mean = sum / n_samples;
  double variance = sum_sq / n_samples - mean * mean;
  double stderr_mean = std::sqrt(variance / n_samples);
  CHECK(std::abs(mean - 1.0) <= 3.0 * stderr_mean);
}

TEST_CASE("offspring law validation") {
  CHECK_THROWS(OffspringLaw::from_weights({0.1, 0.9}));        // q_0 > 0
  CHECK_THROWS(OffspringLaw::from_weights({0.0, 0.5, 0.4}));   // sum != 1
  CHECK_THROWS(OffspringLaw::from_weights({0.0, -0.5, 1.5}));  // negative
  CHECK_THROWS(OffspringLaw::from_weights({1.0}));             // no k >= 1
}

TEST_CASE("heavy-tail law hits the requested mean with large second moment") {
  auto law = OffspringLaw::heavy_tail(2.0, 0.25, 20000);
  CHECK(law.mean() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(law.weight(0) == 0.0);
  CHECK(law.second_moment() > 100.0);
}

TEST_CASE("varying environment sampling") {
  auto two = OffspringLaw::deterministic(2);
  auto three = OffspringLaw::deterministic(3);
  Environment env = Environment::alternating(two, three, 4);
  Tree t = sample_bpve(env, 4, 11);
  CHECK(t.level_sizes() == std::vector<long long>{1, 2, 6, 12, 36});
  CHECK(env.cumulative_means() == std::vector<double>{1, 2, 6, 12, 36});

  CHECK_THROWS(sample_bpve(env, 5, 11));  // environment too short

  // Constant environment draws the same stream as the plain sampler.
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.0, 0.5});
  Environment constant = Environment::constant(law, 6);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CHECK(sample_bpve(constant, 6, seed) == sample_gw(law, 6, seed));
  }
}

TEST_CASE("constant environment matches the one-law sampler in distribution") {
  // Two-sample Kolmogorov-Smirnov on Z_6 across disjoint seed streams;
  // the laws are identical so the statistic stays under the 1% critical
  // value 1.63 * sqrt(2/n) (conservative for discrete data).
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.0, 0.5});
  Environment env = Environment::constant(law, 6);
  const int n = 10000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = sample_gw(law, 6, 500000 + i).level_size(6);
    b[i] = sample_bpve(env, 6, 900000 + i).level_size(6);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double ks = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double v = std::min(i < a.size() ? a[i] : b[j],
                        j < b.size() ? b[j] : a[i]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / n -
                               static_cast<double>(j) / n));
  }
  CHECK(ks <= 1.63 * std::sqrt(2.0 / n));
}

TEST_CASE("regular and spherical constructions") {
  CHECK(regular_tree(2, 1).level_sizes() == std::vector<long long>{1, 2});
  CHECK(regular_tree(3, 4).level_size(4) == 81);
  CHECK(regular_tree(1, 7).vertex_count() == 8);

  std::vector<int> c{2, 3};
  CHECK(spherical_tree(c).level_sizes() == std::vector<long long>{1, 2, 6});
  std::vector<int> ones{1, 1, 1};
  CHECK(spherical_tree(ones).vertex_count() == 4);
  std::vector<int> c2{4, 2, 2};
  CHECK(spherical_tree(c2).level_size(3) == 16);
}

TEST_CASE("dominating spherical construction follows the multiple rule") {
  std::vector<double> doubling{1, 2, 4, 8};
  Tree t = dominating_spherical(doubling, 1.0);
  CHECK(t.level_sizes() == std::vector<long long>{1, 2, 4, 8});

  // Hand evaluation: M = (1, 2.5, 6.25), scale 1. |T_1| = 3; multiples of 3
  // are 3, 6, 9 and 6 < 6.25, so |T_2| = 9.
  std::vector<double> m{1.0, 2.5, 6.25};
  Tree s = dominating_spherical(m, 1.0);
  CHECK(s.level_sizes() == std::vector<long long>{1, 3, 9});
}

TEST_CASE("dominating spherical stays within twice the target") {
  auto eng = make_engine(2024);
  for (int trial = 0; trial < 50; ++trial) {
    int height = 1 + static_cast<int>(uniform_below(eng, 6));
    double scale = 1.0 + 50.0 * uniform01(eng);
    std::vector<double> m(height + 1);
    m[0] = 1.0;
    for (int n = 1; n <= height; ++n) {
      m[n] = m[n - 1] * (1.0 + 2.5 * uniform01(eng));
    }
    Tree t = dominating_spherical(m, scale);
    auto z = t.level_sizes();
    for (int n = 1; n <= height; ++n) {
      CHECK(static_cast<double>(z[n]) >= scale * m[n]);
      CHECK(static_cast<double>(z[n]) <= 2.0 * scale * m[n]);
      CHECK(z[n] % z[n - 1] == 0);
    }
  }
}

TEST_CASE("tree stats") {
  std::vector<double> doubling{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  Tree binary = regular_tree(2, 3);
  auto stats = tree_stats(binary, std::span(doubling.data(), 4));
  CHECK(stats.a_gamma == doctest::Approx(1.0));
  CHECK(stats.w_bottom == doctest::Approx(1.0));

  Tree path = regular_tree(1, 3);
  auto path_stats = tree_stats(path, std::span(doubling.data(), 4));
  CHECK(path_stats.a_gamma == doctest::Approx(1.0));  // attained at n = 0

  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.0, 0.5});
  Tree t = sample_gw(law, 12, 5);
  auto s = tree_stats(t, doubling);
  double direct = 0.0;
  for (int n = 0; n <= 12; ++n) {
    direct = std::max(direct, t.level_size(n) / doubling[n]);
  }
  CHECK(s.a_gamma == doctest::Approx(direct));
  CHECK(s.a_gamma >= 1.0 / 4096);
}

TEST_CASE("child-count codec round trip and hand cases") {
  Tree two_leaves = parse_child_counts("2 0 0");
  CHECK(two_leaves.height() == 1);
  CHECK(two_leaves.level_sizes() == std::vector<long long>{1, 2});
  CHECK(emit_child_counts(two_leaves) == "2 0 0");

  Tree path2 = parse_child_counts("1 1 0");
  CHECK(path2.height() == 2);
  CHECK(path2.vertex_count() == 3);

  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.25, 0.25});
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Tree t = sample_gw(law, 5, seed);
    CHECK(parse_child_counts(emit_child_counts(t)) == t);
  }
}

TEST_CASE("json codec round trip") {
  Tree t = parse_child_counts("2 1 0 2 0 0");
  nlohmann::json j = tree_to_json(t);
  CHECK(j.dump() == "[[[]],[[],[]]]");
  CHECK(tree_from_json(j) == t);

  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.5});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Tree sample = sample_gw(law, 6, seed);
    CHECK(tree_from_json(tree_to_json(sample)) == sample);
  }
}

TEST_CASE("malformed text is rejected with a byte offset") {
  CHECK_THROWS_AS(parse_child_counts(""), ParseError);
  CHECK_THROWS_AS(parse_child_counts("2 x 0"), ParseError);
  try {
    parse_child_counts("2 x 0");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  // Structurally invalid: a leaf above the bottom level.
  CHECK_THROWS_AS(parse_child_counts("2 0 1 0"), ParseError);
  // Too few / too many vertices.
  CHECK_THROWS_AS(parse_child_counts("2 0"), ParseError);
  CHECK_THROWS_AS(parse_child_counts("1 0 0"), ParseError);
}

TEST_CASE("preorder invariants of sampled trees") {
  auto law = OffspringLaw::from_weights({0.0, 0.25, 0.5, 0.25});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Tree t = sample_gw(law, 6, seed);
    // Parent/child tables agree.
    for (int v = 0; v < t.vertex_count(); ++v) {
      for (int c : t.children(v)) CHECK(t.parent(c) == v);
      CHECK(static_cast<int>(t.children(v).size()) == t.child_count(v));
    }
    // Sum of child counts over level n equals Z_{n+1}.
    for (int n = 0; n < t.height(); ++n) {
      long long total = 0;
      for (int v : t.level(n)) total += t.child_count(v);
      CHECK(total == t.level_size(n + 1));
    }
  }
}

TEST_CASE("vertex cap rejects runaway growth") {
  CHECK_THROWS_AS(regular_tree(2, 30, 1000), ResourceLimitError);
}

TEST_CASE("truncation keeps the top of the tree") {
  Tree t = parse_child_counts("2 1 0 2 0 0");
  Tree cut = t.truncate(1);
  CHECK(cut.level_sizes() == std::vector<long long>{1, 2});
  CHECK(t.truncate(2) == t);
}
