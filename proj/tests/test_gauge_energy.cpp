#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "treecap/flow.hpp"
#include "treecap/gauge.hpp"
#include "treecap/rng.hpp"
#include "treecap/tree.hpp"

using namespace treecap;

namespace {

// Independent energy oracle: the kernel double sum over ordered leaf pairs,
// E = sum_{x,y} f(|x ^ y|) w(x) w(y), accumulated in extended precision.
// Shares nothing with the summation-by-parts route it checks.
double double_sum_energy(const Tree& tree, const Gauge& gauge, const Flow& flow) {
  auto leaves = tree.level(tree.height());
  long double total = 0.0L;
  for (int x : leaves) {
    for (int y : leaves) {
      int u = x, v = y;
      while (u != v) {
        if (tree.depth(u) >= tree.depth(v)) u = tree.parent(u);
        if (tree.depth(v) > tree.depth(u)) v = tree.parent(v);
      }
      total += static_cast<long double>(gauge.value(tree.depth(u))) *
               flow.at(x) * flow.at(y);
    }
  }
  return static_cast<double>(total);
}

Flow dirichlet_flow(const Tree& tree, std::mt19937_64& eng) {
  std::vector<double> w(tree.leaf_count());
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log(1.0 - uniform01(eng));
    total += x;
  }
  for (auto& x : w) x /= total;
  return flow_from_leaf_weights(tree, w);
}

}  // namespace

TEST_CASE("gauge constructors match hand values") {
  std::vector<double> half{0.5, 0.5};
  Gauge perc = Gauge::percolation(half);
  CHECK(perc.value(0) == doctest::Approx(1.0));
  CHECK(perc.value(1) == doctest::Approx(2.0));
  CHECK(perc.value(2) == doctest::Approx(4.0));
  CHECK(perc.increment(0) == doctest::Approx(1.0));
  CHECK(perc.increment(1) == doctest::Approx(1.0));
  CHECK(perc.increment(2) == doctest::Approx(2.0));

  // Doubling profile: each term below the top contributes 1/2, the top
  // contributes b^N / M_N = 1.
  std::vector<double> m{1, 2, 4};
  Gauge phi = Gauge::phi(m, 2);
  CHECK(phi.value(0) == doctest::Approx(0.5));
  CHECK(phi.value(1) == doctest::Approx(1.0));
  CHECK(phi.value(2) == doctest::Approx(2.0));

  double alpha = 0.7;
  Gauge euclid = Gauge::euclid([alpha](double t) { return std::pow(t, -alpha); },
                               2, 5);
  for (int n = 0; n <= 5; ++n) {
    CHECK(euclid.value(n) == doctest::Approx(std::pow(2.0, alpha * n)));
  }

  Gauge pow3 = Gauge::power(3.0, 3);
  CHECK(pow3.value(0) == doctest::Approx(1.0));
  CHECK(pow3.value(3) == doctest::Approx(27.0));
}

TEST_CASE("gauge constructors reject bad input") {
  std::vector<double> bad_p{0.5, 1.5};
  CHECK_THROWS(Gauge::percolation(bad_p));
  std::vector<double> zero_p{0.0, 0.5};
  CHECK_THROWS(Gauge::percolation(zero_p));
  std::vector<double> decreasing{1.0, 0.5, 0.25};
  CHECK_THROWS(Gauge::phi(decreasing, 2));
  std::vector<double> not_one{2.0, 4.0};
  CHECK_THROWS(Gauge::phi(not_one, 2));
  // Increasing g makes f decreasing.
  CHECK_THROWS(Gauge::euclid([](double t) { return t; }, 2, 3));
  CHECK_THROWS(Gauge(std::vector<double>{1.0, -0.5}));
}

TEST_CASE("energy with a root-only gauge is the squared root mass") {
  Tree t = regular_tree(3, 2);
  Flow u = uniform_leaf_flow(t);
  Gauge g(std::vector<double>{2.5, 0.0, 0.0});
  CHECK(energy(t, g, u).energy == doctest::Approx(2.5));
}

TEST_CASE("uniform flow on the binary tree of height 2") {
  Tree t = regular_tree(2, 2);
  Flow u = uniform_leaf_flow(t);
  Gauge g(std::vector<double>{1.0, 1.0, 2.0});  // f = (1, 2, 4)
  auto report = energy(t, g, u);
  CHECK(report.level_sq[0] == doctest::Approx(1.0));
  CHECK(report.level_sq[1] == doctest::Approx(0.5));
  CHECK(report.level_sq[2] == doctest::Approx(0.25));
  CHECK(report.energy == doctest::Approx(2.0));
  CHECK(std::abs(report.energy - double_sum_energy(t, g, u)) <= 1e-12);
}

TEST_CASE("path energy is f(N) for the forced unit flow") {
  Tree path = regular_tree(1, 3);
  Flow u = uniform_leaf_flow(path);
  Gauge g(std::vector<double>{1.0, 1.0, 1.0, 1.0});  // f = (1,2,3,4)
  CHECK(energy(path, g, u).energy == doctest::Approx(4.0));
}

TEST_CASE("summation-by-parts equals the kernel double sum") {
  // All suite trees up to 200 leaves, three flows each, 1e-12 relative.
  auto law = OffspringLaw::from_weights({0.0, 0.3, 0.4, 0.3});
  auto eng = make_engine(99);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int height = 1 + static_cast<int>(seed % 6);
    Tree t = sample_gw(law, height, seed);
    if (t.leaf_count() > 200) continue;
    std::vector<double> p(height);
    for (auto& x : p) x = 0.3 + 0.7 * uniform01(eng);
    for (const Gauge& g :
         {Gauge::percolation(p), Gauge::power(1.7, height),
          Gauge(std::vector<double>(height + 1, 0.25))}) {
      Flow flows[] = {uniform_leaf_flow(t), dirichlet_flow(t, eng)};
      for (const Flow& flow : flows) {
        double lhs = energy(t, g, flow).energy;
        double rhs = double_sum_energy(t, g, flow);
        CHECK(std::abs(lhs - rhs) <=
              1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
      }
    }
  }
}

TEST_CASE("energy requires a tall enough gauge") {
  Tree t = regular_tree(2, 3);
  Gauge g(std::vector<double>{1.0, 1.0});
  CHECK_THROWS(energy(t, g, uniform_leaf_flow(t)));
}

TEST_CASE("energy report serializes") {
  Tree t = regular_tree(2, 1);
  Gauge g(std::vector<double>{1.0, 1.0});
  auto j = energy(t, g, uniform_leaf_flow(t)).to_json();
  CHECK(j.contains("gauge"));
  CHECK(j.contains("S"));
  CHECK(j.contains("energy"));
  CHECK(j["S"].size() == 2);

  Gauge back = Gauge::from_json(g.to_json());
  CHECK(back.value(1) == doctest::Approx(g.value(1)));
}
