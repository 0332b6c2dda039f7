#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "treecap/rational.hpp"

namespace treecap {

/// Set of accepted words of length N over the alphabet {0..b-1}, stored as a
/// trie whose nodes are prefixes of accepted words. Edges carry inclusive
/// letter ranges, so structured sets (products, dyadic discretizations) stay
/// compact; several letters on one edge share the child, and two distinct
/// prefixes with identical futures may share a node. Every stored word has
/// length N; membership is a root-to-bottom walk.
class TargetTrie {
 public:
  struct Edge {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;  // inclusive
    int child = -1;

    std::uint32_t width() const { return hi - lo + 1; }
  };

  int alphabet() const { return alphabet_; }
  int depth() const { return depth_; }
  int node_count() const { return static_cast<int>(edge_offset_.size()) - 1; }
  int root() const { return 0; }

  std::span<const Edge> edges(int node) const {
    return {edges_.data() + edge_offset_[node],
            edges_.data() + edge_offset_[node + 1]};
  }
  /// Node ids at trie depth n are [level_begin(n), level_end(n)).
  int level_begin(int n) const { return level_offset_[n]; }
  int level_end(int n) const { return level_offset_[n + 1]; }
  int level_size(int n) const { return level_end(n) - level_begin(n); }
  int node_depth(int node) const;

  bool contains(std::span<const int> word) const;
  /// Number of accepted words (exact while it fits a double).
  double word_count() const;
  bool empty() const { return depth_ > 0 ? edges(0).empty() : node_count() == 0; }

  /// All accepted words, enumerated in lexicographic order; guarded.
  std::vector<std::vector<int>> enumerate_words(std::size_t cap = 200000) const;

  /// Letter-tree form: every edge a single letter, nodes unshared. Needed by
  /// algorithms that treat label branches as distinct flow variables.
  TargetTrie expanded(std::size_t cap = 200000) const;
  bool is_expanded() const;

  bool subset_of(const TargetTrie& other) const;

  static TargetTrie empty_set(int alphabet, int depth);
  static TargetTrie all_words(int alphabet, int depth);
  static TargetTrie from_words(int alphabet, int depth,
                               std::span<const std::vector<int>> words);
  /// Product set: level-n letters 0..allowed_counts[n-1]-1.
  static TargetTrie product(int alphabet, std::span<const int> allowed_counts);
  /// Every word of {0..b-1}^N kept independently with probability p.
  static TargetTrie random_subset(int alphabet, int depth, double keep_probability,
                                  std::uint64_t seed);

  /// Raw constructor for builders: nodes must be level-major, edges sorted by
  /// letter with no overlaps, all maximal paths of length `depth`.
  static TargetTrie from_parts(int alphabet, int depth,
                               std::vector<Edge> edges,
                               std::vector<int> edge_offset,
                               std::vector<int> level_offset);

 private:
  TargetTrie() = default;

  int alphabet_ = 0;
  int depth_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> edge_offset_;   // per node
  std::vector<int> level_offset_;  // nodes grouped by depth
};

/// Real-valued target set on label sequences, by named constructor. The
/// prefix-prunable kinds expose an exact viability test: once a prefix is
/// unviable no extension can be accepted, which lets Monte Carlo search cut
/// whole subtrees.
class TargetPredicate {
 public:
  enum class Kind { Product, FppExplosion, Envelope, RegionAvoiding, BoxUnion };

  using Interval = std::pair<double, double>;  // closed

  /// x_i must lie in the union of intervals coordinate_sets[i-1].
  static TargetPredicate product(std::vector<std::vector<Interval>> coordinate_sets);
  /// sum_j x_j <= budget.
  static TargetPredicate fpp_explosion(double budget, int length);
  /// sum_{j<=n} x_j >= floors[n-1] for every n.
  static TargetPredicate envelope(std::vector<double> floors);
  /// Partial sums avoid the union of closed intervals at every step.
  static TargetPredicate region_avoiding(std::vector<Interval> forbidden, int length);
  static TargetPredicate box_union(RatBoxUnion geometry);

  Kind kind() const { return kind_; }
  int length() const { return length_; }
  const char* kind_name() const;

  bool accepts(std::span<const double> labels) const;

  /// Exact prefix pruning: returns false only when no completion can be
  /// accepted. `label_min` is the least value the label law can produce
  /// (used by the explosion kind, whose pruning depends on it).
  bool viable_prefix(std::span<const double> prefix, double label_min) const;
  bool prefix_prunable() const;

  const RatBoxUnion& geometry() const;

 private:
  TargetPredicate() = default;

  Kind kind_ = Kind::Product;
  int length_ = 0;
  std::vector<std::vector<Interval>> coordinate_sets_;
  double budget_ = 0.0;
  std::vector<double> floors_;
  std::vector<Interval> forbidden_;
  RatBoxUnion geometry_;
};

/// IID label distribution.
class LabelLaw {
 public:
  enum class Kind { UniformFinite, Uniform01, Quantile };

  static LabelLaw uniform_finite(int alphabet);
  static LabelLaw uniform01();
  /// Labels distributed as quantile(U) for U uniform on [0,1).
  static LabelLaw quantile(std::function<double(double)> quantile_fn,
                           double min_value);

  Kind kind() const { return kind_; }
  int alphabet() const { return alphabet_; }
  double min_value() const { return min_value_; }
  double sample(std::mt19937_64& eng) const;

 private:
  LabelLaw() = default;

  Kind kind_ = Kind::Uniform01;
  int alphabet_ = 0;
  double min_value_ = 0.0;
  std::function<double(double)> quantile_;
};

}  // namespace treecap
