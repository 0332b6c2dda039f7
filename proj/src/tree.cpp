#include "treecap/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "treecap/rng.hpp"

namespace treecap {

Tree Tree::from_preorder(std::span<const int> child_counts,
                         std::size_t vertex_cap) {
  require(!child_counts.empty(), "tree must have at least a root");
  if (child_counts.size() > vertex_cap) {
    throw ResourceLimitError("tree exceeds vertex cap");
  }

  Tree t;
  const int n = static_cast<int>(child_counts.size());
  t.child_count_.assign(child_counts.begin(), child_counts.end());
  t.parent_.assign(n, -1);
  t.depth_.assign(n, 0);

  // Reconstruct parents/depths from the preorder walk.
  std::vector<std::pair<int, int>> stack;  // (vertex, children still owed)
  for (int v = 0; v < n; ++v) {
    require(child_counts[v] >= 0, "negative child count");
    if (v > 0) {
      require(!stack.empty(), "trailing vertices after the tree is complete");
      auto& [p, owed] = stack.back();
      t.parent_[v] = p;
      t.depth_[v] = t.depth_[p] + 1;
      if (--owed == 0) stack.pop_back();
    }
    if (child_counts[v] > 0) stack.emplace_back(v, child_counts[v]);
  }
  require(stack.empty(), "child counts promise more vertices than provided");

  t.height_ = *std::max_element(t.depth_.begin(), t.depth_.end());
  for (int v = 0; v < n; ++v) {
    if (child_counts[v] == 0 && t.depth_[v] != t.height_) {
      throw std::invalid_argument(
          "leaf at depth " + std::to_string(t.depth_[v]) +
          " but height is " + std::to_string(t.height_) +
          "; all rays must reach the bottom level");
    }
  }

  // Children in preorder, CSR layout.
  t.child_offset_.assign(n + 1, 0);
  for (int v = 1; v < n; ++v) t.child_offset_[t.parent_[v] + 1]++;
  std::partial_sum(t.child_offset_.begin(), t.child_offset_.end(),
                   t.child_offset_.begin());
  t.child_vertex_.resize(n > 0 ? n - 1 : 0);
  {
    std::vector<int> cursor(t.child_offset_.begin(), t.child_offset_.end() - 1);
    for (int v = 1; v < n; ++v) t.child_vertex_[cursor[t.parent_[v]]++] = v;
  }

  // Levels, preorder within each level.
  t.level_offset_.assign(t.height_ + 2, 0);
  for (int v = 0; v < n; ++v) t.level_offset_[t.depth_[v] + 1]++;
  std::partial_sum(t.level_offset_.begin(), t.level_offset_.end(),
                   t.level_offset_.begin());
  t.level_vertex_.resize(n);
  {
    std::vector<int> cursor(t.level_offset_.begin(), t.level_offset_.end() - 1);
    for (int v = 0; v < n; ++v) t.level_vertex_[cursor[t.depth_[v]]++] = v;
  }
  return t;
}

std::vector<long long> Tree::level_sizes() const {
  std::vector<long long> z(height_ + 1);
  for (int d = 0; d <= height_; ++d) z[d] = level_size(d);
  return z;
}

Tree Tree::truncate(int h) const {
  require(h >= 0 && h <= height_, "truncation height out of range");
  if (h == height_) return *this;
  std::vector<int> counts;
  counts.reserve(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) {
    if (depth_[v] < h) {
      counts.push_back(child_count_[v]);
    } else if (depth_[v] == h) {
      counts.push_back(0);
    }
  }
  return from_preorder(counts);
}

// --- offspring laws ---------------------------------------------------------

OffspringLaw OffspringLaw::from_weights(std::vector<double> weights) {
  require(weights.size() >= 2, "law needs support on k >= 1");
  require(weights[0] == 0.0, "zero offspring is not allowed");
  double sum = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    require(weights[k] >= 0.0, "negative weight");
    sum += weights[k];
    mean += static_cast<double>(k) * weights[k];
    second += static_cast<double>(k) * static_cast<double>(k) * weights[k];
  }
  require(std::abs(sum - 1.0) <= 1e-12, "weights must sum to 1");

  OffspringLaw law;
  law.weights_ = std::move(weights);
  law.mean_ = mean;
  law.second_moment_ = second;
  law.cdf_.resize(law.weights_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < law.weights_.size(); ++k) {
    acc += law.weights_[k];
    law.cdf_[k] = acc;
  }
  law.cdf_.back() = 1.0;
  return law;
}

OffspringLaw OffspringLaw::deterministic(int k) {
  require(k >= 1, "deterministic law needs k >= 1");
  std::vector<double> w(k + 1, 0.0);
  w[k] = 1.0;
  return from_weights(std::move(w));
}

OffspringLaw OffspringLaw::heavy_tail(double mean, double epsilon, int kmax) {
  require(mean > 1.0, "heavy-tail law needs mean > 1");
  require(epsilon > 0.0, "epsilon must be positive");
  require(kmax >= 3, "kmax too small");
  // Tail weights t_k = k^-(2+eps) for k >= 2; the weight at 1 is the free
  // parameter solving (w1 + sum k t_k) / (w1 + sum t_k) = mean.
  double tail_mass = 0.0, tail_mean_mass = 0.0;
  std::vector<double> w(kmax + 1, 0.0);
  for (int k = 2; k <= kmax; ++k) {
    double tk = std::pow(static_cast<double>(k), -(2.0 + epsilon));
    w[k] = tk;
    tail_mass += tk;
    tail_mean_mass += k * tk;
  }
  double w1 = (tail_mean_mass - mean * tail_mass) / (mean - 1.0);
  require(w1 >= 0.0,
          "tail mean below target mean; increase kmax or decrease epsilon");
  w[1] = w1;
  double total = w1 + tail_mass;
  for (auto& x : w) x /= total;
  // Renormalization drift is well under the validation tolerance.
  return from_weights(std::move(w));
}

double OffspringLaw::weight(int k) const {
  if (k < 0 || k >= static_cast<int>(weights_.size())) return 0.0;
  return weights_[k];
}

int OffspringLaw::sample(std::mt19937_64& eng) const {
  double u = uniform01(eng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  int k = static_cast<int>(it - cdf_.begin());
  return k == 0 ? 1 : k;  // cdf_[0] == 0, so k == 0 cannot occur for u >= 0
}

// --- environments ------------------------------------------------------------

Environment::Environment(std::vector<OffspringLaw> laws) : laws_(std::move(laws)) {
  require(!laws_.empty(), "environment must have at least one generation");
  means_.resize(laws_.size() + 1);
  means_[0] = 1.0;
  min_mean_ = laws_[0].mean();
  max_second_factorial_ = 0.0;
  for (std::size_t n = 0; n < laws_.size(); ++n) {
    means_[n + 1] = means_[n] * laws_[n].mean();
    min_mean_ = std::min(min_mean_, laws_[n].mean());
    max_second_factorial_ =
        std::max(max_second_factorial_, laws_[n].second_factorial_moment());
  }
}

Environment Environment::constant(const OffspringLaw& q, int length) {
  require(length >= 1, "length must be positive");
  return Environment(std::vector<OffspringLaw>(length, q));
}

Environment Environment::alternating(const OffspringLaw& odd,
                                     const OffspringLaw& even, int length) {
  require(length >= 1, "length must be positive");
  std::vector<OffspringLaw> laws;
  laws.reserve(length);
  for (int n = 1; n <= length; ++n) laws.push_back(n % 2 == 1 ? odd : even);
  return Environment(std::move(laws));
}

// --- samplers ----------------------------------------------------------------

namespace {

// Generates preorder child counts depth-first; `draw(depth)` supplies the
// count for an internal vertex at that depth.
template <typename Draw>
std::vector<int> preorder_counts(int height, std::size_t vertex_cap, Draw draw) {
  require(height >= 0, "height must be nonnegative");
  std::vector<int> counts;
  // (depth, children still owed) stack over the preorder walk.
  std::vector<std::pair<int, int>> stack;
  auto emit = [&](int depth) {
    int c = depth < height ? draw(depth) : 0;
    counts.push_back(c);
    if (counts.size() > vertex_cap) {
      throw ResourceLimitError("sampled tree exceeds vertex cap");
    }
    if (c > 0) stack.emplace_back(depth, c);
  };
  emit(0);
  while (!stack.empty()) {
    auto& [depth, owed] = stack.back();
    int child_depth = depth + 1;
    if (--owed == 0) stack.pop_back();
    emit(child_depth);  // invalidates `depth`/`owed`
  }
  return counts;
}

}  // namespace

Tree sample_gw(const OffspringLaw& q, int height, std::uint64_t seed,
               std::size_t vertex_cap) {
  auto eng = make_engine(seed);
  auto counts = preorder_counts(height, vertex_cap,
                                [&](int) { return q.sample(eng); });
  return Tree::from_preorder(counts, vertex_cap);
}

Tree sample_bpve(const Environment& env, int height, std::uint64_t seed,
                 std::size_t vertex_cap) {
  require(env.length() >= height, "environment shorter than requested height");
  auto eng = make_engine(seed);
  auto counts = preorder_counts(
      height, vertex_cap,
      [&](int depth) { return env.law(depth + 1).sample(eng); });
  return Tree::from_preorder(counts, vertex_cap);
}

Tree regular_tree(int branching, int height, std::size_t vertex_cap) {
  require(branching >= 1, "branching must be >= 1");
  auto counts = preorder_counts(height, vertex_cap, [&](int) { return branching; });
  return Tree::from_preorder(counts, vertex_cap);
}

Tree spherical_tree(std::span<const int> child_counts, std::size_t vertex_cap) {
  for (int c : child_counts) require(c >= 1, "child counts must be >= 1");
  int height = static_cast<int>(child_counts.size());
  auto counts = preorder_counts(height, vertex_cap,
                                [&](int depth) { return child_counts[depth]; });
  return Tree::from_preorder(counts, vertex_cap);
}

Tree dominating_spherical(std::span<const double> cumulative_means, double scale,
                          std::size_t vertex_cap) {
  require(cumulative_means.size() >= 1, "growth profile must include M_0");
  require(std::abs(cumulative_means[0] - 1.0) <= 1e-12, "M_0 must be 1");
  require(scale >= 1.0, "scale must be >= 1");
  const int height = static_cast<int>(cumulative_means.size()) - 1;
  std::vector<int> per_level(height);
  long long size_prev = 1;
  double total = 1;
  for (int n = 1; n <= height; ++n) {
    require(cumulative_means[n] >= cumulative_means[n - 1],
            "growth profile must be nondecreasing");
    double target = scale * cumulative_means[n];
    long long mult = static_cast<long long>(std::ceil(target / size_prev));
    if (mult < 1) mult = 1;
    long long size_n = size_prev * mult;
    // The construction promises |T_n| <= 2*scale*M_n; anything else is a bug.
    if (static_cast<double>(size_n) > 2.0 * target + 1e-9) {
      throw std::logic_error("dominating level size exceeded twice its target");
    }
    total += static_cast<double>(size_n);
    if (total > static_cast<double>(vertex_cap)) {
      throw ResourceLimitError("dominating tree exceeds vertex cap");
    }
    per_level[n - 1] = static_cast<int>(mult);
    size_prev = size_n;
  }
  return spherical_tree(per_level, vertex_cap);
}

TreeStats tree_stats(const Tree& tree, std::span<const double> cumulative_means) {
  require(static_cast<int>(cumulative_means.size()) >= tree.height() + 1,
          "growth profile shorter than tree height");
  require(std::abs(cumulative_means[0] - 1.0) <= 1e-12, "M_0 must be 1");
  TreeStats stats;
  stats.level_sizes = tree.level_sizes();
  for (int n = 0; n <= tree.height(); ++n) {
    require(cumulative_means[n] > 0.0, "growth profile must be positive");
    stats.a_gamma = std::max(
        stats.a_gamma, static_cast<double>(stats.level_sizes[n]) /
                           cumulative_means[n]);
  }
  stats.w_bottom = static_cast<double>(stats.level_sizes[tree.height()]) /
                   cumulative_means[tree.height()];
  return stats;
}

// --- codecs ------------------------------------------------------------------

std::string emit_child_counts(const Tree& tree) {
  std::string out;
  for (int v = 0; v < tree.vertex_count(); ++v) {
    if (v > 0) out.push_back(' ');
    out += std::to_string(tree.child_count(v));
  }
  return out;
}

Tree parse_child_counts(std::string_view text, std::size_t vertex_cap) {
  std::vector<int> counts;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError("expected a nonnegative integer", start);
    }
    long value = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      value = value * 10 + (text[i] - '0');
      if (value > 1'000'000'000L) throw ParseError("child count overflow", start);
      ++i;
    }
    counts.push_back(static_cast<int>(value));
  }
  if (counts.empty()) throw ParseError("empty input", 0);
  try {
    return Tree::from_preorder(counts, vertex_cap);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), n);
  }
}

namespace {

void append_json(const Tree& tree, int v, nlohmann::json& out) {
  out = nlohmann::json::array();
  for (int c : tree.children(v)) {
    nlohmann::json child;
    append_json(tree, c, child);
    out.push_back(std::move(child));
  }
}

void flatten_json(const nlohmann::json& j, std::vector<int>& counts) {
  if (!j.is_array()) {
    throw std::invalid_argument("tree JSON must be nested arrays");
  }
  counts.push_back(static_cast<int>(j.size()));
  for (const auto& child : j) flatten_json(child, counts);
}

}  // namespace

nlohmann::json tree_to_json(const Tree& tree) {
  nlohmann::json j;
  append_json(tree, 0, j);
  return j;
}

Tree tree_from_json(const nlohmann::json& j, std::size_t vertex_cap) {
  std::vector<int> counts;
  flatten_json(j, counts);
  return Tree::from_preorder(counts, vertex_cap);
}

}  // namespace treecap
