#include "treecap/gauge.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "treecap/common.hpp"

namespace treecap {

Gauge::Gauge(std::vector<double> increments) : increments_(std::move(increments)) {
  require(!increments_.empty(), "gauge needs at least the depth-0 increment");
  values_.resize(increments_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < increments_.size(); ++k) {
    require(increments_[k] >= 0.0, "gauge increments must be nonnegative");
    require(std::isfinite(increments_[k]), "gauge increments must be finite");
    acc += increments_[k];
    values_[k] = acc;
  }
}

bool Gauge::all_zero() const {
  for (double h : increments_) {
    if (h != 0.0) return false;
  }
  return true;
}

Gauge Gauge::percolation(std::span<const double> p) {
  std::vector<double> h(p.size() + 1);
  double f_prev = 0.0, f = 1.0;  // f(0) = empty product
  h[0] = 1.0;
  f_prev = 1.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    require(p[n] > 0.0 && p[n] <= 1.0, "survival probabilities must lie in (0,1]");
    f = f_prev / p[n];
    h[n + 1] = f - f_prev;
    f_prev = f;
  }
  return Gauge(std::move(h));
}

Gauge Gauge::euclid(const std::function<double(double)>& g, int base, int height) {
  require(base >= 2, "base must be >= 2");
  require(height >= 0, "height must be nonnegative");
  std::vector<double> h(height + 1);
  double f_prev = 0.0;
  for (int n = 0; n <= height; ++n) {
    double f = g(std::pow(static_cast<double>(base), -n));
    require(std::isfinite(f) && f > 0.0, "gauge values must be finite and positive");
    require(f >= f_prev, "g must be decreasing so that f(n) = g(b^-n) increases");
    h[n] = f - f_prev;
    f_prev = f;
  }
  return Gauge(std::move(h));
}

Gauge Gauge::phi(std::span<const double> cumulative_means, int base) {
  require(base >= 2, "base must be >= 2");
  require(cumulative_means.size() >= 1, "growth profile must include M_0");
  require(std::abs(cumulative_means[0] - 1.0) <= 1e-12, "M_0 must be 1");
  const int height = static_cast<int>(cumulative_means.size()) - 1;
  std::vector<double> h(height + 1);
  double scale = 1.0;  // b^n
  for (int n = 0; n <= height; ++n) {
    require(cumulative_means[n] > 0.0, "growth profile must be positive");
    if (n > 0) {
      require(cumulative_means[n] >= cumulative_means[n - 1],
              "growth profile must be nondecreasing");
    }
    double inv = 1.0 / cumulative_means[n];
    double inv_next = n < height ? 1.0 / cumulative_means[n + 1] : 0.0;
    h[n] = scale * (inv - inv_next);
    scale *= base;
  }
  return Gauge(std::move(h));
}

Gauge Gauge::power(double m0, int height) {
  require(m0 >= 1.0, "power gauge needs m0 >= 1");
  require(height >= 0, "height must be nonnegative");
  std::vector<double> h(height + 1);
  double f_prev = 0.0, f = 1.0;
  for (int n = 0; n <= height; ++n) {
    h[n] = f - f_prev;
    f_prev = f;
    f *= m0;
  }
  return Gauge(std::move(h));
}

nlohmann::json Gauge::to_json() const {
  return nlohmann::json{{"increments", increments_}};
}

Gauge Gauge::from_json(const nlohmann::json& j) {
  return Gauge(j.at("increments").get<std::vector<double>>());
}

}  // namespace treecap
