#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "treecap/euclid.hpp"
#include "treecap/rng.hpp"

using namespace treecap;

TEST_CASE("cube map anchors") {
  std::vector<int> empty;
  auto origin = map_point(empty, 2, 3);
  CHECK(origin == std::vector<double>{0.0, 0.0, 0.0});

  std::vector<int> word{1, 0, 1};
  auto p = map_point(word, 2, 1);
  CHECK(p[0] == doctest::Approx(0.625));

  // base 3, two coordinates: letter (1,2) encodes 1 + 2*3 = 7.
  std::vector<int> pair{7};
  auto q = map_point(pair, 3, 2);
  CHECK(q[0] == doctest::Approx(1.0 / 3.0));
  CHECK(q[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fractal sampling shape") {
  auto full = OffspringLaw::deterministic(4);
  auto [t1, l1] = cantor_sample(full, 2, 2, 3, 9);
  CHECK(t1 == regular_tree(4, 3));

  auto single = OffspringLaw::deterministic(1);
  auto [t2, l2] = cantor_sample(single, 2, 2, 5, 10);
  CHECK(t2.vertex_count() == 6);

  // E Z_n = 1.5^n; three-sigma band over the sample mean.
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.5});
  const int samples = 4000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    auto [t, l] = cantor_sample(law, 2, 1, 8, 100 + i);
    double w = t.level_size(8) / std::pow(1.5, 8);
    sum += w;
    sum_sq += w * w;
  }
  double mean = sum / samples;
  double sd = std::sqrt(sum_sq / samples - mean * mean);
  CHECK(std::abs(mean - 1.0) <= 3.0 * sd / std::sqrt(samples));
}

TEST_CASE("sibling letters are distinct") {
  auto law = OffspringLaw::from_weights({0.0, 0.25, 0.25, 0.25, 0.25});
  for (int i = 0; i < 20; ++i) {
    auto [t, labeling] = cantor_sample(law, 2, 2, 4, 500 + i);
    for (int v = 0; v < t.vertex_count(); ++v) {
      std::set<int> seen;
      for (int c : t.children(v)) {
        CHECK(labeling.letter[c] >= 0);
        CHECK(labeling.letter[c] < 4);
        CHECK(seen.insert(labeling.letter[c]).second);
      }
    }
  }
}

TEST_CASE("offspring support must fit the subcube count") {
  auto law = OffspringLaw::from_weights({0.0, 0.0, 0.0, 1.0});  // always 3
  CHECK_THROWS(cantor_sample(law, 2, 1, 3, 1));  // only 2 subcubes
}

TEST_CASE("hand-worked floored energy") {
  // Full binary tree of height 1 in one dimension, uniform flow, g = 1/t:
  // cross pairs at distance 1/2 contribute 2 * (1/4) * 2 = 1 and the
  // diagonal floor terms another 2 * (1/4) * 2 = 1.
  Tree t = regular_tree(2, 1);
  CubeLabeling labeling = sequential_labeling(t, 2, 1);
  Flow u = uniform_leaf_flow(t);
  double e = euclid_energy(t, labeling, u, [](double x) { return 1.0 / x; });
  CHECK(e == doctest::Approx(2.0));
}

TEST_CASE("energy comparison on full binary trees") {
  auto g = [](double t) { return std::pow(t, -0.5); };
  for (int height : {4, 6, 8}) {
    Tree t = regular_tree(2, height);
    auto r = euclid_comparison(t, sequential_labeling(t, 2, 1),
                               uniform_leaf_flow(t), g);
    CHECK(r.neighbors_ok);
    CHECK(r.level_ratio_ok);
    CHECK(r.ratio_lower == doctest::Approx(1.0));  // l = 0 in dimension 1
    CHECK(r.ratio_upper == doctest::Approx(6.0));
    CHECK(r.ratio_ok);
  }
}

TEST_CASE("energy comparison in the plane") {
  auto g = [](double t) { return std::pow(t, -0.5); };
  Tree t = regular_tree(2, 6);
  auto r = euclid_comparison(t, random_labeling(t, 2, 2, 17),
                             uniform_leaf_flow(t), g);
  CHECK(r.ratio_lower == doctest::Approx(0.25));  // l = 1: 2^1 >= sqrt(2)
  CHECK(r.ratio_upper == doctest::Approx(36.0));
  CHECK(r.neighbors_ok);
  CHECK(r.level_ratio_ok);
  CHECK(r.ratio_ok);
}

TEST_CASE("point-mass flows stay within the comparison band") {
  Tree t = regular_tree(2, 5);
  std::vector<double> w(t.leaf_count(), 0.0);
  w[7] = 1.0;
  Flow point = flow_from_leaf_weights(t, w);
  auto r = euclid_comparison(t, sequential_labeling(t, 2, 1), point,
                             [](double x) { return std::pow(x, -0.5); });
  CHECK(r.level_ratio_ok);  // S_k is identically 1
  CHECK(r.ratio_ok);
}

TEST_CASE("comparison bounds hold across random fractal samples") {
  auto g = [](double t) { return std::pow(t, -0.5); };
  for (int i = 0; i < 15; ++i) {
    auto law1 = OffspringLaw::from_weights({0.0, 0.5, 0.5});
    auto [t1, l1] = cantor_sample(law1, 2, 1, 7, 900 + i);
    auto r1 = euclid_comparison(t1, l1, uniform_leaf_flow(t1), g);
    CHECK(r1.neighbors_ok);
    CHECK(r1.level_ratio_ok);
    CHECK(r1.ratio_ok);

    auto law2 = OffspringLaw::from_weights({0.0, 0.25, 0.25, 0.25, 0.25});
    auto [t2, l2] = cantor_sample(law2, 2, 2, 6, 950 + i);
    auto r2 = euclid_comparison(t2, l2, uniform_leaf_flow(t2), g);
    CHECK(r2.neighbors_ok);
    CHECK(r2.level_ratio_ok);
    CHECK(r2.ratio_ok);
  }
}

TEST_CASE("capacity criterion certificates") {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.5});  // mean 1.5

  // Convergent gauge: alpha below log2(1.5).
  double alpha_small = 0.3 * std::log2(1.5);
  auto rows_conv = cap_criterion(
      law, [alpha_small](double t) { return std::pow(t, -alpha_small); }, 2, 1,
      8, 4, seeds);
  for (const auto& row : rows_conv) CHECK(row.bounds_ok);
  // Partial sums converge geometrically, so the deepest capacity keeps a
  // positive certificate.
  for (const auto& row : rows_conv) CHECK(row.lower_certificate > 0.0);

  // Critical gauge: alpha = log2(m) makes the partial sums grow linearly
  // and pushes the capacity upper bound toward zero.
  double alpha_crit = std::log2(1.5);
  auto rows_crit = cap_criterion(
      law, [alpha_crit](double t) { return std::pow(t, -alpha_crit); }, 2, 1, 8,
      4, seeds);
  for (const auto& row : rows_crit) CHECK(row.bounds_ok);
  for (std::size_t i = 0; i + 1 < rows_crit.size(); ++i) {
    if (rows_crit[i].seed == rows_crit[i + 1].seed) {
      CHECK(rows_crit[i + 1].partial_sum > rows_crit[i].partial_sum);
      CHECK(rows_crit[i + 1].upper_bound <
            rows_crit[i].upper_bound + 1e-12);
    }
  }

  // Flat gauge: only the root increment remains and every capacity is 1.
  auto rows_flat = cap_criterion(
      law, [](double) { return 1.0; }, 2, 1, 6, 4, seeds);
  for (const auto& row : rows_flat) {
    CHECK(row.cap == doctest::Approx(1.0));
    CHECK(row.bounds_ok);
  }
}

TEST_CASE("larger gauges never increase capacity") {
  auto law = OffspringLaw::from_weights({0.0, 0.5, 0.5});
  std::vector<std::uint64_t> seeds{11};
  auto small = cap_criterion(
      law, [](double t) { return std::pow(t, -0.2); }, 2, 1, 7, 7, seeds);
  auto large = cap_criterion(
      law, [](double t) { return std::pow(t, -0.5); }, 2, 1, 7, 7, seeds);
  REQUIRE(small.size() == large.size());
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(large[i].cap <= small[i].cap + 1e-12);
  }
}
