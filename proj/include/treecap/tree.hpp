#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "treecap/common.hpp"

#include <nlohmann/json_fwd.hpp>

namespace treecap {

/// Finite rooted ordered tree of height N. Every vertex at depth < N has at
/// least one child and every vertex at depth N is a leaf, so all boundary
/// rays reach depth N. Vertices are stored in preorder; levels are exposed
/// as index lists. Immutable after construction and safe to share across
/// threads.
class Tree {
 public:
  /// Builds from the preorder child-count sequence and validates the
  /// leaves-only-at-the-bottom shape.
  static Tree from_preorder(std::span<const int> child_counts,
                            std::size_t vertex_cap = kDefaultVertexCap);

  int height() const { return height_; }
  int vertex_count() const { return static_cast<int>(child_count_.size()); }

  int child_count(int v) const { return child_count_[v]; }
  int parent(int v) const { return parent_[v]; }
  int depth(int v) const { return depth_[v]; }
  bool is_leaf(int v) const { return child_count_[v] == 0; }

  std::span<const int> children(int v) const {
    return {child_vertex_.data() + child_offset_[v],
            child_vertex_.data() + child_offset_[v + 1]};
  }

  /// Vertices at depth n, in preorder.
  std::span<const int> level(int n) const {
    return {level_vertex_.data() + level_offset_[n],
            level_vertex_.data() + level_offset_[n + 1]};
  }
  int level_size(int n) const {
    return level_offset_[n + 1] - level_offset_[n];
  }
  int leaf_count() const { return level_size(height_); }

  std::vector<long long> level_sizes() const;

  std::span<const int> preorder_child_counts() const { return child_count_; }

  /// Height-h truncation (keeps exactly the vertices of depth <= h).
  Tree truncate(int h) const;

  bool operator==(const Tree& other) const {
    return child_count_ == other.child_count_;
  }

 private:
  Tree() = default;

  int height_ = 0;
  std::vector<int> child_count_;
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<int> child_offset_;
  std::vector<int> child_vertex_;
  std::vector<int> level_offset_;
  std::vector<int> level_vertex_;
};

/// Offspring distribution on {1, 2, ...}: no zero offspring, so sampled
/// trees never die out before the target height.
class OffspringLaw {
 public:
  /// weights[k] is the probability of k children; weights[0] must be 0 and
  /// the weights must sum to 1 within 1e-12.
  static OffspringLaw from_weights(std::vector<double> weights);
  static OffspringLaw deterministic(int k);
  /// Law with tail weights proportional to k^-(2+epsilon) on {2..kmax} and
  /// the weight at 1 chosen to hit the requested mean. Infinite-variance
  /// surrogate: the second moment grows without bound as kmax grows.
  static OffspringLaw heavy_tail(double mean, double epsilon, int kmax);

  double mean() const { return mean_; }
  double second_moment() const { return second_moment_; }
  /// E[N(N-1)], the second factorial moment.
  double second_factorial_moment() const { return second_moment_ - mean_; }
  double variance() const { return second_moment_ - mean_ * mean_; }
  int max_children() const { return static_cast<int>(weights_.size()) - 1; }
  double weight(int k) const;

  int sample(std::mt19937_64& eng) const;

 private:
  std::vector<double> weights_;  // index = child count, [0] == 0
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
};

/// Per-generation offspring laws Q_1..Q_L with cumulative means
/// M_n = prod_{j<=n} mean(Q_j), M_0 = 1.
class Environment {
 public:
  explicit Environment(std::vector<OffspringLaw> laws);
  static Environment constant(const OffspringLaw& q, int length);
  static Environment alternating(const OffspringLaw& odd,
                                 const OffspringLaw& even, int length);

  int length() const { return static_cast<int>(laws_.size()); }
  /// Q_n, 1-based generation index.
  const OffspringLaw& law(int n) const { return laws_[n - 1]; }
  /// M_0..M_L.
  const std::vector<double>& cumulative_means() const { return means_; }
  /// a = inf_n mean(Q_n).
  double min_mean() const { return min_mean_; }
  /// V = sup_n E[N(N-1)] over the generations.
  double max_second_factorial() const { return max_second_factorial_; }

 private:
  std::vector<OffspringLaw> laws_;
  std::vector<double> means_;
  double min_mean_ = 0.0;
  double max_second_factorial_ = 0.0;
};

struct TreeStats {
  std::vector<long long> level_sizes;  // Z_0..Z_N
  double a_gamma = 0.0;                // max_n Z_n / M_n
  double w_bottom = 0.0;               // Z_N / M_N
};

Tree sample_gw(const OffspringLaw& q, int height, std::uint64_t seed,
               std::size_t vertex_cap = kDefaultVertexCap);

Tree sample_bpve(const Environment& env, int height, std::uint64_t seed,
                 std::size_t vertex_cap = kDefaultVertexCap);

Tree regular_tree(int branching, int height,
                  std::size_t vertex_cap = kDefaultVertexCap);

/// Spherically symmetric tree: every vertex at depth n-1 has child_counts[n-1]
/// children.
Tree spherical_tree(std::span<const int> child_counts,
                    std::size_t vertex_cap = kDefaultVertexCap);

/// Smallest spherically symmetric tree whose level sizes dominate scale*M_n:
/// |T_n| is the least integral multiple of |T_{n-1}| with |T_n| >= scale*M_n,
/// which also guarantees |T_n| <= 2*scale*M_n.
Tree dominating_spherical(std::span<const double> cumulative_means,
                          double scale,
                          std::size_t vertex_cap = kDefaultVertexCap);

/// Level sizes and their maximum ratio against the growth profile M.
TreeStats tree_stats(const Tree& tree, std::span<const double> cumulative_means);

// --- text codecs -----------------------------------------------------------

/// Compact format: whitespace-separated preorder child counts ("2 0 0").
std::string emit_child_counts(const Tree& tree);
Tree parse_child_counts(std::string_view text,
                        std::size_t vertex_cap = kDefaultVertexCap);

/// Nested-array format: each vertex is the array of its children ("[[],[]]").
nlohmann::json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& j,
                    std::size_t vertex_cap = kDefaultVertexCap);

}  // namespace treecap
