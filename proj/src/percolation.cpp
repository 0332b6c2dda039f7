#include "treecap/percolation.hpp"

#include <cmath>

#include "treecap/common.hpp"
#include "treecap/rng.hpp"

namespace treecap {

namespace {

// Accumulates 1 - prod_i (1 - x_i) for x_i in [0,1]. The direct product is
// exact arithmetic on clean inputs; when the complement ends up close to 1
// the value is recomputed as -expm1(sum log1p(-x_i)) with compensated
// summation, which keeps full relative precision for tiny results.
class UnionProbability {
 public:
  void add(double x) {
    product_ *= (1.0 - x);
    log_sum_.add(std::log1p(-x));
  }
  double value() const {
    if (product_ > 0.5) return -std::expm1(log_sum_.value());
    return 1.0 - product_;
  }

 private:
  double product_ = 1.0;
  NeumaierSum log_sum_;
};

}  // namespace

double survival_exact(const Tree& tree, std::span<const double> p) {
  require(static_cast<int>(p.size()) >= tree.height(),
          "need one probability per level");
  for (int n = 0; n < tree.height(); ++n) {
    require(p[n] >= 0.0 && p[n] <= 1.0, "probabilities must lie in [0,1]");
  }
  std::vector<double> s(tree.vertex_count(), 1.0);
  for (int v = tree.vertex_count() - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) continue;
    UnionProbability u;
    for (int c : tree.children(v)) u.add(p[tree.depth(c) - 1] * s[c]);
    s[v] = u.value();
  }
  return s[0];
}

McEstimate survival_mc(const Tree& tree, std::span<const double> p,
                       long long trials, std::uint64_t seed) {
  require(trials >= 1, "need at least one trial");
  require(static_cast<int>(p.size()) >= tree.height(),
          "need one probability per level");
  const int height = tree.height();
  McEstimate out;
  out.trials = trials;

  std::vector<int> stack;
  for (long long t = 0; t < trials; ++t) {
    auto eng = substream(seed, static_cast<std::uint64_t>(t));
    stack.clear();
    stack.push_back(0);
    bool reached = height == 0;
    while (!stack.empty() && !reached) {
      int v = stack.back();
      stack.pop_back();
      for (int c : tree.children(v)) {
        if (uniform01(eng) < p[tree.depth(c) - 1]) {
          if (tree.depth(c) == height) {
            reached = true;
            break;
          }
          stack.push_back(c);
        }
      }
    }
    if (reached) out.successes++;
  }
  out.estimate = static_cast<double>(out.successes) / trials;
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / trials);
  return out;
}

double target_exact(const Tree& tree, const TargetTrie& target,
                    std::size_t work_cap) {
  require(target.depth() == tree.height(),
          "target depth must equal tree height");
  const int height = tree.height();
  const int b = target.alphabet();
  if (target.node_count() == 0) return 0.0;
  if (height == 0) return target.empty() ? 0.0 : 1.0;

  double work = 0.0;
  for (int n = 0; n <= height; ++n) {
    work += static_cast<double>(tree.level_size(n)) * target.level_size(n) * b;
  }
  if (work > static_cast<double>(work_cap)) {
    throw ResourceLimitError("tree x target recursion exceeds the work cap");
  }

  // success[(vertex index in level) * T_n + (trie node index in level)],
  // rolled over levels from the bottom up. At the bottom every surviving
  // trie node is accepting, so the value is 1.
  const double inv_b = 1.0 / static_cast<double>(b);
  std::vector<double> below(
      static_cast<std::size_t>(tree.level_size(height)) *
          std::max(target.level_size(height), 1),
      1.0);
  std::vector<double> current;
  // Child values are looked up by position: children of level-n vertices are
  // exactly the level-(n+1) vertices, in preorder; ditto trie children via
  // edges. Build a per-level index from vertex id to level position.
  std::vector<int> pos(tree.vertex_count(), 0);
  for (int n = 0; n <= height; ++n) {
    auto verts = tree.level(n);
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) pos[verts[i]] = i;
  }

  for (int n = height - 1; n >= 0; --n) {
    const int tn = target.level_size(n);
    const int tn_below = target.level_size(n + 1);
    const int node_base = target.level_begin(n);
    const int node_base_below = target.level_begin(n + 1);
    auto verts = tree.level(n);
    current.assign(static_cast<std::size_t>(verts.size()) * std::max(tn, 1), 0.0);
    for (int vi = 0; vi < static_cast<int>(verts.size()); ++vi) {
      int v = verts[vi];
      for (int ui = 0; ui < tn; ++ui) {
        int u = node_base + ui;
        UnionProbability prob;
        for (int c : tree.children(v)) {
          const double* srow =
              below.data() + static_cast<std::size_t>(pos[c]) * tn_below;
          double letter_sum = 0.0;
          for (const auto& e : target.edges(u)) {
            letter_sum += e.width() * srow[e.child - node_base_below];
          }
          prob.add(inv_b * letter_sum);
        }
        current[static_cast<std::size_t>(vi) * tn + ui] = prob.value();
      }
    }
    below = std::move(current);
  }
  return below.empty() ? 0.0 : below[0];
}

McEstimate target_mc(const Tree& tree, const LabelLaw& law,
                     const TargetPredicate& target, long long trials,
                     std::uint64_t seed) {
  require(trials >= 1, "need at least one trial");
  require(target.length() == tree.height(),
          "target length must equal tree height");
  if (law.kind() == LabelLaw::Kind::UniformFinite &&
      target.kind() == TargetPredicate::Kind::BoxUnion) {
    throw std::invalid_argument("box-union targets need real-valued labels");
  }
  const int height = tree.height();
  McEstimate out;
  out.trials = trials;

  std::vector<double> prefix;
  std::vector<std::pair<int, int>> stack;  // (vertex, prefix length on entry)
  const double label_min = law.min_value();
  const bool prune = target.prefix_prunable();

  for (long long t = 0; t < trials; ++t) {
    auto eng = substream(seed, static_cast<std::uint64_t>(t));
    bool hit = height == 0 ? target.accepts({}) : false;
    prefix.clear();
    stack.clear();
    // Depth-first over vertices; each vertex's label is drawn exactly once,
    // when the search first reaches it.
    for (int c : tree.children(0)) stack.emplace_back(c, 0);
    while (!stack.empty() && !hit) {
      auto [v, plen] = stack.back();
      stack.pop_back();
      prefix.resize(plen);
      prefix.push_back(law.sample(eng));
      if (prune && !target.viable_prefix(prefix, label_min)) continue;
      if (tree.depth(v) == height) {
        if (target.accepts(prefix)) hit = true;
        continue;
      }
      for (int c : tree.children(v)) {
        stack.emplace_back(c, static_cast<int>(prefix.size()));
      }
    }
    if (hit) out.successes++;
  }
  out.estimate = static_cast<double>(out.successes) / trials;
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / trials);
  return out;
}

}  // namespace treecap
