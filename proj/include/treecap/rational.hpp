#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treecap/common.hpp"

namespace treecap {

/// Exact rational on __int128 with overflow-checked arithmetic. Wide enough
/// for dyadic-cell volume comparisons at the depths and grid resolutions the
/// experiments use; anything larger fails loudly instead of silently losing
/// exactness.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n, long long d);

  static Rat of(long long n, long long d = 1) { return Rat(n, d); }
  /// Parses "0.35", "1", "-0.125", or "3/8".
  static Rat parse(std::string_view text);

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  bool is_zero() const { return num_ == 0; }
  bool nonnegative() const { return num_ >= 0; }
  double to_double() const;
  std::string to_string() const;
  std::uint64_t hash() const;

  static Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
  static Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

 private:
  Rat(__int128 n, __int128 d, int);  // already reduced
  void normalize();

  __int128 num_;
  __int128 den_;  // > 0
};

/// Closed axis-aligned box inside [0,1]^N with exact rational corners.
struct RatBox {
  std::vector<std::pair<Rat, Rat>> sides;  // per coordinate [lo, hi]

  int dimension() const { return static_cast<int>(sides.size()); }
  bool contains(std::span<const double> point) const;
};

/// Finite union of boxes; the real-valued box-union target geometry.
struct RatBoxUnion {
  std::vector<RatBox> boxes;

  int dimension() const {
    return boxes.empty() ? 0 : boxes.front().dimension();
  }
  bool contains(std::span<const double> point) const;
  void validate() const;
};

}  // namespace treecap
