#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace treecap {

/// Default cap on total vertices of any constructed tree. Supercritical
/// growth is exponential, so every constructor takes an explicit cap and
/// fails cleanly instead of exhausting memory.
inline constexpr std::size_t kDefaultVertexCap = 10'000'000;

/// Thrown when text input cannot be parsed; `offset` is the byte position
/// of the first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Thrown when an instance exceeds a configured resource cap.
class ResourceLimitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by bounded_flow_bpve when no leaf survives the threshold pruning;
/// callers retry with a larger cutoff level.
class EmptySupportError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compensated (Neumaier) summation; used wherever a level sum or energy
/// must agree with an independent route to 1e-12 relative.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace treecap
