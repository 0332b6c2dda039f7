#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "treecap/capacity.hpp"
#include "treecap/flow.hpp"
#include "treecap/gauge.hpp"
#include "treecap/tree.hpp"

namespace treecap {

/// Injective edge labels embedding a tree into the b^d-ary tree: each vertex
/// below the root carries a letter of {0..b-1}^d (encoded base-b, digit i =
/// coordinate i), distinct among siblings. A depth-k vertex then names a
/// cube of side b^-k in [0,1]^d.
struct CubeLabeling {
  int base = 2;               // b
  int dimension = 1;          // d
  std::vector<int> letter;    // per vertex; root entry unused (-1)

  int letters_available() const {
    int n = 1;
    for (int i = 0; i < dimension; ++i) n *= base;
    return n;
  }
};

/// Lower corner of the cube addressed by a letter word.
std::vector<double> map_point(std::span<const int> word, int base, int dimension);

/// Identity labeling of a subtree of the b^d-ary tree where siblings take
/// letters 0,1,.. in order; valid for any tree with child counts <= b^d.
CubeLabeling sequential_labeling(const Tree& tree, int base, int dimension);

/// Uniformly random injective sibling letters.
CubeLabeling random_labeling(const Tree& tree, int base, int dimension,
                             std::uint64_t seed);

/// Random fractal-percolation tree: offspring law on {1..b^d} with uniformly
/// random distinct cube positions per sibling set.
std::pair<Tree, CubeLabeling> cantor_sample(const OffspringLaw& law, int base,
                                            int dimension, int height,
                                            std::uint64_t seed,
                                            std::size_t vertex_cap = kDefaultVertexCap);

/// Integer cube anchors (anchor * b^depth) for all bottom-level vertices,
/// flattened by coordinate; exact, so cube adjacency tests stay exact.
std::vector<std::int64_t> leaf_anchors(const Tree& tree, const CubeLabeling& labeling);

/// Riesz-type energy of the pushforward of a unit flow under the cube map:
/// sum over ordered leaf pairs of g(max(|x-y|, b^-N)) theta(x) theta(y),
/// distances between cube anchors, floored at the bottom cube scale because
/// the finite-depth pushforward is atomic.
double euclid_energy(const Tree& tree, const CubeLabeling& labeling,
                     const Flow& flow, const std::function<double(double)>& g);

/// Scale-by-scale comparison between the tree energy in the gauge
/// f(n) = g(b^-n) and the Euclidean energy of the mapped flow, together with
/// the two structural facts it relies on: at most 3^d same-level neighbor
/// cubes, and S_{k-1} <= b^d S_k for flows on subtrees of the b^d-ary tree.
struct EuclidComparisonReport {
  int max_neighbors = 0;
  bool neighbors_ok = false;    // max_neighbors <= 3^d
  bool level_ratio_ok = false;  // S_{k-1} <= b^d S_k at every level
  int level_ratio_witness = -1;
  double tree_energy = 0.0;
  double euclid = 0.0;
  double ratio = 0.0;  // euclid / tree_energy
  double ratio_lower = 0.0;  // b^{-d l}, b^l >= sqrt(d)
  double ratio_upper = 0.0;  // (3b)^d
  bool ratio_ok = false;
};

EuclidComparisonReport euclid_comparison(const Tree& tree,
                                         const CubeLabeling& labeling,
                                         const Flow& flow,
                                         const std::function<double(double)>& g,
                                         double slack = 1e-9);

/// Capacity trend of sampled fractal trees in the gauge f(n) = g(b^-n),
/// with the exact two-sided certificate A / sum >= cap >= 1 / (C_U sum)
/// where sum = sum_{n<=depth} h(n) m^-n.
struct CapCriterionRow {
  int depth = 0;
  std::uint64_t seed = 0;
  double cap = 0.0;
  double partial_sum = 0.0;       // sum_{n<=depth} h(n) m^-n
  double upper_bound = 0.0;       // a_gamma / partial_sum
  double lower_certificate = 0.0; // 1 / (c_u * partial_sum)
  bool bounds_ok = false;
};

std::vector<CapCriterionRow> cap_criterion(const OffspringLaw& law,
                                           const std::function<double(double)>& g,
                                           int base, int dimension, int height,
                                           int min_depth,
                                           std::span<const std::uint64_t> seeds,
                                           double slack = 1e-9);

}  // namespace treecap
