#pragma once

#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace treecap {

/// Nondecreasing depth gauge f on {-1, 0, ..., N} with f(-1) = 0, stored as
/// the nonnegative increments h(k) = f(k) - f(k-1). The increment at depth 0
/// is part of the energy: the root carries series weight h(0) = f(0).
class Gauge {
 public:
  /// From raw increments h(0..N); all must be nonnegative.
  explicit Gauge(std::vector<double> increments);

  int height() const { return static_cast<int>(increments_.size()) - 1; }
  double increment(int k) const { return increments_[k]; }
  /// f(k); accepts k = -1 (returns 0).
  double value(int k) const { return k < 0 ? 0.0 : values_[k]; }
  std::span<const double> increments() const { return increments_; }
  bool all_zero() const;

  /// f(n) = prod_{i<=n} 1/p_i for survival probabilities p_1..p_N in (0,1].
  static Gauge percolation(std::span<const double> p);

  /// f(n) = g(b^-n) for a decreasing positive g; rejects g that fails to be
  /// decreasing on the sampled grid.
  static Gauge euclid(const std::function<double(double)>& g, int base, int height);

  /// phi(n) = sum_{j<=n} b^j (M_j^{-1} - M_{j+1}^{-1} [j < N]) for a
  /// nondecreasing growth profile M with M_0 = 1.
  static Gauge phi(std::span<const double> cumulative_means, int base);

  /// f(n) = m0^n, m0 >= 1.
  static Gauge power(double m0, int height);

  nlohmann::json to_json() const;
  static Gauge from_json(const nlohmann::json& j);

 private:
  std::vector<double> increments_;
  std::vector<double> values_;
};

}  // namespace treecap
