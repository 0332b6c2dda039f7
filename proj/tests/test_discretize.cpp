#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "treecap/discretize.hpp"
#include "treecap/percolation.hpp"
#include "treecap/rng.hpp"

using namespace treecap;

namespace {

RatBoxUnion box1(std::initializer_list<std::pair<const char*, const char*>> sides) {
  RatBox box;
  for (const auto& [lo, hi] : sides) {
    box.sides.push_back({Rat::parse(lo), Rat::parse(hi)});
  }
  return RatBoxUnion{{box}};
}

}  // namespace

TEST_CASE("rational arithmetic basics") {
  CHECK(Rat::parse("0.3") == Rat::of(3, 10));
  CHECK(Rat::parse("3/8") == Rat::of(3, 8));
  CHECK(Rat::parse("-0.125") == Rat::of(-1, 8));
  CHECK((Rat::of(1, 3) + Rat::of(1, 6)) == Rat::of(1, 2));
  CHECK((Rat::of(2, 3) * Rat::of(3, 4)) == Rat::of(1, 2));
  CHECK(Rat::of(1, 3) < Rat::of(1, 2));
  CHECK((Rat::of(1, 2) - Rat::of(1, 2)).is_zero());
  CHECK(Rat::of(7, 2).to_string() == "7/2");
  CHECK_THROWS(Rat::parse("abc"));
}

TEST_CASE("the full cube accepts every word") {
  auto b = box1({{"0", "1"}, {"0", "1"}, {"0", "1"}});
  for (int j : {1, 2, 3}) {
    TargetTrie t = discretize_target(b, j);
    CHECK(t.word_count() == doctest::Approx(std::pow(std::pow(2.0, j), 3)));
  }
}

TEST_CASE("half-interval box at grid resolution one") {
  auto b = box1({{"0", "0.5"}, {"0", "1"}});
  TargetTrie t = discretize_target(b, 1);
  std::vector<int> w00{0, 0}, w01{0, 1}, w10{1, 0}, w11{1, 1};
  CHECK(t.contains(w00));
  CHECK(t.contains(w01));
  CHECK(!t.contains(w10));
  CHECK(!t.contains(w11));
  CHECK(t.word_count() == doctest::Approx(2.0));
}

TEST_CASE("a 0.3 interval rounds by majority coverage") {
  auto b = box1({{"0", "0.3"}, {"0", "1"}});
  // Coarse grid: the cell [0, 1/2] is covered on fraction 0.6 > 1/2.
  TargetTrie coarse = discretize_target(b, 1);
  std::vector<int> w0{0, 0}, w1{1, 0};
  CHECK(coarse.contains(w0));
  CHECK(!coarse.contains(w1));
  CHECK(coarse.word_count() == doctest::Approx(2.0));

  // Finer grid: [0, 1/4] is fully covered, [1/4, 1/2] only on 0.05/0.25.
  TargetTrie fine = discretize_target(b, 2);
  for (int y2 = 0; y2 < 4; ++y2) {
    std::vector<int> inside{0, y2}, outside{1, y2};
    CHECK(fine.contains(inside));
    CHECK(!fine.contains(outside));
  }
  CHECK(fine.word_count() == doctest::Approx(4.0));
}

TEST_CASE("exact half coverage is rejected") {
  auto b = box1({{"0", "0.25"}, {"0", "1"}});
  TargetTrie t = discretize_target(b, 1);
  CHECK(t.empty());
  CHECK(t.word_count() == 0.0);
}

TEST_CASE("unions overlap without double counting") {
  // Two boxes overlapping on [0.2, 0.4]: their union covers [0, 0.6] of the
  // first coordinate, so the left cell is covered 1.0 + accepted and the
  // right cell 0.2 rejected at j = 1.
  RatBoxUnion u;
  u.boxes.push_back(box1({{"0", "0.4"}, {"0", "1"}}).boxes[0]);
  u.boxes.push_back(box1({{"0.2", "0.6"}, {"0", "1"}}).boxes[0]);
  TargetTrie t = discretize_target(u, 1);
  std::vector<int> left{0, 0}, right{1, 1};
  CHECK(t.contains(left));
  CHECK(!t.contains(right));
}

TEST_CASE("fine grids stay compact via state sharing") {
  RatBoxUnion u;
  u.boxes.push_back(box1({{"0", "0.3"}, {"0.1", "0.8"}, {"0.25", "1"}, {"0", "0.9"}})
                        .boxes[0]);
  u.boxes.push_back(box1({{"0.5", "0.95"}, {"0", "0.45"}, {"0.3", "0.7"}, {"0.2", "1"}})
                        .boxes[0]);
  TargetTrie t = discretize_target(u, 12);
  // 2^48 words would be unrepresentable without node sharing.
  CHECK(t.node_count() < 5000);
  CHECK(t.word_count() > 0.0);
  // Acceptance is close to the true volume fraction at a fine grid.
  double volume = 0.0;
  for (const auto& box : u.boxes) {
    double v = 1.0;
    for (const auto& [lo, hi] : box.sides) {
      v *= (hi - lo).to_double();
    }
    volume += v;  // boxes overlap a little; only a sanity band
  }
  double fraction = t.word_count() / std::pow(2.0, 4 * 12);
  CHECK(fraction > 0.25 * volume);
  CHECK(fraction < 1.25 * volume);
}

TEST_CASE("discretized acceptance converges to the continuous probability") {
  // The event "some path's labels fall in the union" under uniform labels,
  // approximated through majority-vote cells, approaches the Monte Carlo
  // value; and the exact values stabilize between grid exponents 10 and 12.
  Tree tree = regular_tree(2, 3);
  RatBoxUnion u;
  u.boxes.push_back(box1({{"0", "0.35"}, {"0.2", "0.9"}, {"0.1", "0.75"}}).boxes[0]);
  u.boxes.push_back(box1({{"0.45", "1"}, {"0", "0.55"}, {"0.3", "0.8"}}).boxes[0]);

  double p10 = target_exact(tree, discretize_target(u, 10));
  double p12 = target_exact(tree, discretize_target(u, 12));
  CHECK(std::abs(p12 - p10) <= 1e-3);

  auto mc = target_mc(tree, LabelLaw::uniform01(),
                      TargetPredicate::box_union(u), 200000, 97);
  CHECK(std::abs(p12 - mc.estimate) <= 4.0 * std::max(mc.std_error, 5e-4));
}

TEST_CASE("every stored prefix extends to an accepted word") {
  auto b = box1({{"0.1", "0.6"}, {"0.2", "0.7"}});
  TargetTrie t = discretize_target(b, 4);
  for (int node = 0; node < t.node_count(); ++node) {
    if (t.node_depth(node) < t.depth()) {
      CHECK(!t.edges(node).empty());
    }
  }
}
