#include "treecap/flow.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "treecap/common.hpp"

namespace treecap {

Flow flow_from_leaf_weights(const Tree& tree, std::span<const double> leaf_weights) {
  require(static_cast<int>(leaf_weights.size()) == tree.leaf_count(),
          "one weight per bottom-level vertex required");
  Flow flow;
  flow.value.assign(tree.vertex_count(), 0.0);
  auto leaves = tree.level(tree.height());
  for (std::size_t i = 0; i < leaf_weights.size(); ++i) {
    require(leaf_weights[i] >= 0.0, "leaf weights must be nonnegative");
    flow.value[leaves[i]] = leaf_weights[i];
  }
  // Reverse preorder visits children before parents.
  for (int v = tree.vertex_count() - 1; v >= 1; --v) {
    flow.value[tree.parent(v)] += flow.value[v];
  }
  return flow;
}

bool is_flow(const Tree& tree, const Flow& flow, double tol) {
  if (static_cast<int>(flow.value.size()) != tree.vertex_count()) return false;
  for (int v = 0; v < tree.vertex_count(); ++v) {
    if (!(flow.value[v] >= 0.0)) return false;
    if (tree.is_leaf(v)) continue;
    double sum = 0.0;
    for (int c : tree.children(v)) sum += flow.value[c];
    double scale = std::max(1.0, std::abs(flow.value[v]));
    if (std::abs(sum - flow.value[v]) > tol * scale) return false;
  }
  return true;
}

bool is_unit_flow(const Tree& tree, const Flow& flow, double tol) {
  return is_flow(tree, flow, tol) && std::abs(flow.root() - 1.0) <= tol;
}

std::vector<long long> descendant_leaf_counts(const Tree& tree) {
  std::vector<long long> count(tree.vertex_count(), 0);
  for (int v : tree.level(tree.height())) count[v] = 1;
  for (int v = tree.vertex_count() - 1; v >= 1; --v) {
    count[tree.parent(v)] += count[v];
  }
  return count;
}

Flow uniform_leaf_flow(const Tree& tree) {
  auto counts = descendant_leaf_counts(tree);
  double total = static_cast<double>(counts[0]);
  Flow flow;
  flow.value.resize(tree.vertex_count());
  for (int v = 0; v < tree.vertex_count(); ++v) {
    flow.value[v] = static_cast<double>(counts[v]) / total;
  }
  return flow;
}

std::vector<double> level_square_sums(const Tree& tree, const Flow& flow) {
  require(static_cast<int>(flow.value.size()) == tree.vertex_count(),
          "flow does not match tree");
  std::vector<double> s(tree.height() + 1);
  for (int n = 0; n <= tree.height(); ++n) {
    NeumaierSum sum;
    for (int v : tree.level(n)) sum.add(flow.value[v] * flow.value[v]);
    s[n] = sum.value();
  }
  return s;
}

EnergyReport energy(const Tree& tree, const Gauge& gauge, const Flow& flow) {
  require(gauge.height() >= tree.height(), "gauge shorter than tree height");
  EnergyReport report;
  report.level_sq = level_square_sums(tree, flow);
  report.gauge_increments.assign(gauge.increments().begin(),
                                 gauge.increments().begin() + tree.height() + 1);
  NeumaierSum total;
  for (int k = 0; k <= tree.height(); ++k) {
    total.add(report.gauge_increments[k] * report.level_sq[k]);
  }
  report.energy = total.value();
  return report;
}

nlohmann::json EnergyReport::to_json() const {
  return nlohmann::json{{"gauge", gauge_increments},
                        {"S", level_sq},
                        {"energy", energy}};
}

FlowBoundStats flow_bound_stats(const Tree& tree, const Flow& flow,
                                std::span<const double> cumulative_means) {
  require(static_cast<int>(cumulative_means.size()) >= tree.height() + 1,
          "growth profile shorter than tree height");
  auto s = level_square_sums(tree, flow);
  FlowBoundStats stats;
  stats.profile.resize(tree.height() + 1);
  for (int n = 0; n <= tree.height(); ++n) {
    require(cumulative_means[n] > 0.0, "growth profile must be positive");
    stats.profile[n] = cumulative_means[n] * s[n];
    stats.c = std::max(stats.c, stats.profile[n]);
  }
  return stats;
}

BoundedFlowResult bounded_flow_bpve(const Tree& tree, const Environment& env,
                                    int cutoff) {
  const int height = tree.height();
  require(env.length() >= height, "environment shorter than tree height");
  require(cutoff >= 0 && cutoff < height, "cutoff must lie in [0, height)");
  const double a = env.min_mean();
  require(a > 1.0, "environment must have min mean > 1");
  const auto& m = env.cumulative_means();

  auto desc = descendant_leaf_counts(tree);
  const double m_bottom = m[height];
  const double z_bottom = static_cast<double>(desc[0]);

  // W(v) = M_{|v|} Z_N(v) / M_N; a vertex is bad when W(v)^2 exceeds the
  // level threshold M_n a^{-n/2}. Badness propagates to all descendants.
  std::vector<char> blocked(tree.vertex_count(), 0);
  std::vector<double> w(tree.vertex_count());
  for (int v = 0; v < tree.vertex_count(); ++v) {
    int n = tree.depth(v);
    w[v] = m[n] * static_cast<double>(desc[v]) / m_bottom;
    bool bad = n > cutoff && w[v] * w[v] > m[n] * std::pow(a, -0.5 * n);
    blocked[v] = (v > 0 && blocked[tree.parent(v)]) || bad;
  }

  BoundedFlowResult result;
  auto leaves = tree.level(height);
  std::vector<double> leaf_weights(leaves.size(), 0.0);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (!blocked[leaves[i]]) {
      leaf_weights[i] = 1.0;
      result.surviving_leaves++;
    }
  }
  result.pruned_leaves = static_cast<long long>(leaves.size()) -
                         result.surviving_leaves;
  if (result.surviving_leaves == 0) {
    throw EmptySupportError("no ray survives the level thresholds; raise cutoff");
  }
  for (auto& x : leaf_weights) x /= static_cast<double>(result.surviving_leaves);
  result.flow = flow_from_leaf_weights(tree, leaf_weights);

  for (int n = 0; n <= height; ++n) {
    NeumaierSum sum;
    for (int v : tree.level(n)) sum.add(w[v] * w[v]);
    result.d_hat = std::max(result.d_hat, sum.value() / tree.level_size(n));
  }
  result.w_root = z_bottom / m_bottom;
  result.c_bound = 4.0 * result.d_hat * result.w_root;
  result.c_actual =
      flow_bound_stats(tree, result.flow, std::span(m.data(), height + 1)).c;
  return result;
}

}  // namespace treecap
