#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treecap/capacity.hpp"
#include "treecap/flow.hpp"
#include "treecap/gauge.hpp"
#include "treecap/target.hpp"
#include "treecap/tree.hpp"

namespace treecap {

/// Pair tree of a base tree and the label tree of a target set: vertices are
/// the pairs (tree vertex, trie node) of equal depth, and the boundary is
/// (bottom vertex, accepted word). The trie must be in expanded letter-tree
/// form so that each label branch is its own flow variable — callers go
/// through TargetTrie::expanded(). Never materialized beyond `size_cap`
/// vertices.
class ProductTree {
 public:
  ProductTree(const Tree& tree, const TargetTrie& expanded_target,
              std::size_t size_cap = 2'000'000);

  const Tree& tree() const { return *tree_; }
  const TargetTrie& target() const { return *target_; }
  int height() const { return tree_->height(); }
  int alphabet() const { return target_->alphabet(); }

  int node_count() const { return static_cast<int>(node_tree_.size()); }
  int level_begin(int n) const { return level_offset_[n]; }
  int level_end(int n) const { return level_offset_[n + 1]; }
  int boundary_count() const {
    return level_end(height()) - level_begin(height());
  }
  /// Product node id for (vertex, trie node) looked up by level positions.
  int node_at(int level, int vertex_pos, int trie_pos) const {
    return level_offset_[level] + vertex_pos * trie_level_size_[level] + trie_pos;
  }
  int node_tree_vertex(int node) const { return node_tree_[node]; }
  int node_trie_node(int node) const { return node_trie_[node]; }
  int node_level(int node) const;
  /// Parent product node (root has none).
  int node_parent(int node) const { return parent_[node]; }
  /// Ancestor product node ids of a boundary pair, one per level 0..N.
  std::span<const int> boundary_pair_ancestors(int boundary_index) const {
    return {ancestor_.data() +
                static_cast<std::size_t>(boundary_index) * (height() + 1),
            static_cast<std::size_t>(height() + 1)};
  }

 private:
  const Tree* tree_;
  const TargetTrie* target_;
  std::vector<int> node_tree_;
  std::vector<int> node_trie_;
  std::vector<int> parent_;
  std::vector<int> level_offset_;
  std::vector<int> trie_level_size_;
  std::vector<int> ancestor_;  // boundary pair -> its N+1 ancestor node ids
};

/// Flow on the product tree, dense per product vertex.
struct ProductFlow {
  std::vector<double> value;

  /// Upward accumulation of boundary-pair weights.
  static ProductFlow from_boundary(const ProductTree& pt,
                                   std::span<const double> boundary_weights);
  /// Rank-1 flow (U x theta)(v, x) = U(v) * theta(x); conserves whenever both
  /// factors conserve.
  static ProductFlow rank_one(const ProductTree& pt, const Flow& tree_flow,
                              std::span<const double> word_weights);
};

/// Boundary kernel value b^{|a^b|} [|x^y| >= |a^b|] for two boundary pairs.
double pair_kernel(const ProductTree& pt, int boundary_i, int boundary_j);

/// Kernel energy of a product flow, evaluated level-by-level in linear time.
double kernel_energy(const ProductTree& pt, const ProductFlow& flow);

/// O(pairs^2) evaluation straight from the kernel; the cross-check route.
double kernel_energy_direct(const ProductTree& pt,
                            std::span<const double> boundary_weights);

/// Rank-1 factored evaluation sum_k b^k (S_k(U) - S_{k+1}(U)) S_k(theta)
/// without touching the product tree.
double kernel_energy_rank1(const Tree& tree, const TargetTrie& expanded_target,
                           const Flow& tree_flow,
                           std::span<const double> word_weights);

/// Kernel capacity of the boundary set by pairwise Frank-Wolfe over the
/// product-tree flow polytope. The returned capacity is 1/energy of the
/// certificate flow (hence a lower bound on the true capacity); `gap` bounds
/// energy - min energy.
struct CapKResult {
  double capacity = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  long iterations = 0;
  std::vector<double> boundary_weights;
};

CapKResult cap_k(const Tree& tree, const TargetTrie& target,
                 double rel_tol = 1e-7, long max_iterations = 400000,
                 std::size_t size_cap = 2'000'000);

/// The two-sided comparison between hitting probability and the phi-gauge
/// capacity of the target set, with the constants computed from the tree:
/// c_u^{-1} cap_phi <= p <= 8 a_gamma cap_phi. `slack` absorbs float
/// rounding; the inequalities themselves are exact.
struct RegularityReport {
  double a_gamma = 0.0;
  double c_u = 0.0;
  double cap_phi = 0.0;
  double p_exact = 0.0;
  double lower = 0.0;  // c_u^{-1} cap_phi
  double upper = 0.0;  // 8 a_gamma cap_phi
  bool lower_ok = false;
  bool upper_ok = false;
  bool ok() const { return lower_ok && upper_ok; }
};

RegularityReport regularity_bounds(const Tree& tree, const TargetTrie& target,
                                   std::span<const double> cumulative_means,
                                   double slack = 1e-12);

/// Hitting probabilities cannot decrease when the tree is replaced by a
/// spherically symmetric tree with at least the same level sizes. The
/// dominating tree is built from the tree's own level profile.
struct SphericalCompareReport {
  double p_tree = 0.0;
  double p_dominating = 0.0;
  std::vector<long long> dominating_levels;
  bool ok = false;
};

SphericalCompareReport compare_spherical(const Tree& tree,
                                         const TargetTrie& target,
                                         double slack = 1e-12);

/// Certified domination of a fixed tree by a sampled varying-environment
/// tree: p(gamma) >= (8 a_delta c)^{-1} p(delta) with c the level bound of
/// the pruned uniform flow on gamma. Reports the certified constant, the
/// exact ratio, and the intermediate inequalities.
struct BpveDominationReport {
  double a_delta = 0.0;
  double c = 0.0;
  int cutoff_used = 0;
  double certified_constant = 0.0;  // (8 a_delta c)^{-1}
  double cap_phi = 0.0;
  double p_gamma = 0.0;
  double p_delta = 0.0;
  double ratio = 0.0;  // p_gamma / p_delta (inf when p_delta == 0)
  bool certified_ok = false;
  bool chain_lower_ok = false;  // cap_phi <= c * p_gamma
  bool chain_upper_ok = false;  // p_delta <= 8 a_delta cap_phi
};

BpveDominationReport bpve_dominates(const Tree& gamma, const Tree& delta,
                                    const Environment& env,
                                    const TargetTrie& target, int initial_cutoff,
                                    double slack = 1e-12);

}  // namespace treecap
