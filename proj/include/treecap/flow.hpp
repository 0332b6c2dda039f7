#pragma once

#include <span>
#include <vector>

#include "treecap/gauge.hpp"
#include "treecap/tree.hpp"

#include <nlohmann/json_fwd.hpp>

namespace treecap {

/// Nonnegative vertex weights with each internal value equal to the sum over
/// its children; equivalently a measure on the bottom level. Unit flow means
/// value 1 at the root.
struct Flow {
  std::vector<double> value;  // aligned with tree vertex ids

  double at(int v) const { return value[v]; }
  double root() const { return value[0]; }
};

/// Fills internal vertices by summing leaf weights upward. `leaf_weights`
/// follows the preorder of level N.
Flow flow_from_leaf_weights(const Tree& tree, std::span<const double> leaf_weights);

/// Conservation + nonnegativity check.
bool is_flow(const Tree& tree, const Flow& flow, double tol = 1e-9);
bool is_unit_flow(const Tree& tree, const Flow& flow, double tol = 1e-9);

/// Unit flow giving each vertex weight proportional to its number of
/// bottom-level descendants; the height-N truncation of the limit-uniform
/// flow.
Flow uniform_leaf_flow(const Tree& tree);

/// Number of depth-N descendants per vertex.
std::vector<long long> descendant_leaf_counts(const Tree& tree);

/// Per-level quadratic sums S_k = sum_{|v|=k} theta(v)^2 together with the
/// energy sum_k h(k) S_k.
struct EnergyReport {
  std::vector<double> level_sq;  // S_0..S_N
  double energy = 0.0;
  std::vector<double> gauge_increments;

  nlohmann::json to_json() const;
};

EnergyReport energy(const Tree& tree, const Gauge& gauge, const Flow& flow);

/// Just the per-level quadratic sums.
std::vector<double> level_square_sums(const Tree& tree, const Flow& flow);

/// C = max_n M_n * S_n(flow) and the full profile M_n * S_n, the constant
/// controlling the comparison bounds.
struct FlowBoundStats {
  double c = 0.0;
  std::vector<double> profile;
};

FlowBoundStats flow_bound_stats(const Tree& tree, const Flow& flow,
                                std::span<const double> cumulative_means);

/// Uniform-on-surviving-leaves unit flow after pruning every leaf whose
/// ancestor path violates W(v_n)^2 <= M_n a^{-n/2} at some level n in
/// (cutoff, N], where W(v) = M_{|v|} Z_N(v) / M_N. Throws EmptySupportError
/// when nothing survives; callers retry with a larger cutoff.
struct BoundedFlowResult {
  Flow flow;
  long long surviving_leaves = 0;
  long long pruned_leaves = 0;
  // Diagnostics mirroring the construction's second-moment bookkeeping.
  double d_hat = 0.0;        // max_n mean of W^2 over level n
  double w_root = 0.0;       // Z_N / M_N
  double c_bound = 0.0;      // 4 * d_hat * w_root
  double c_actual = 0.0;     // flow_bound_stats of the returned flow
};

BoundedFlowResult bounded_flow_bpve(const Tree& tree, const Environment& env,
                                    int cutoff);

}  // namespace treecap
