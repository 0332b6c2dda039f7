#include "treecap/rational.hpp"

#include <cstdlib>

namespace treecap {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ResourceLimitError(
        "rational arithmetic overflow; use coarser endpoints or a smaller grid");
  }
  return out;
}

__int128 checked_add(__int128 a, __int128 b) {
  __int128 out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ResourceLimitError("rational arithmetic overflow");
  }
  return out;
}

}  // namespace

Rat::Rat(long long n, long long d) : num_(n), den_(d) {
  require(d != 0, "rational with zero denominator");
  normalize();
}

Rat::Rat(__int128 n, __int128 d, int) : num_(n), den_(d) { normalize(); }

void Rat::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  __int128 g = gcd128(num_, den_);
  num_ /= g;
  den_ /= g;
}

Rat Rat::parse(std::string_view text) {
  require(!text.empty(), "empty rational literal");
  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    long long n = std::stoll(s.substr(0, slash));
    long long d = std::stoll(s.substr(slash + 1));
    return Rat(n, d);
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '-' || s[i] == '+') {
    negative = s[i] == '-';
    ++i;
  }
  long long num = 0;
  long long den = 1;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.') {
      require(!seen_dot, "malformed rational literal");
      seen_dot = true;
      continue;
    }
    require(s[i] >= '0' && s[i] <= '9', "malformed rational literal");
    seen_digit = true;
    require(num < (1LL << 56), "rational literal too long");
    num = num * 10 + (s[i] - '0');
    if (seen_dot) den *= 10;
  }
  require(seen_digit, "malformed rational literal");
  return Rat(negative ? -num : num, den);
}

Rat Rat::operator+(const Rat& o) const {
  __int128 g = gcd128(den_, o.den_);
  __int128 lhs = checked_mul(num_, o.den_ / g);
  __int128 rhs = checked_mul(o.num_, den_ / g);
  return Rat(checked_add(lhs, rhs), checked_mul(den_ / g, o.den_), 0);
}

Rat Rat::operator-(const Rat& o) const {
  Rat neg = o;
  neg.num_ = -neg.num_;
  return *this + neg;
}

Rat Rat::operator*(const Rat& o) const {
  __int128 g1 = gcd128(num_, o.den_);
  __int128 g2 = gcd128(o.num_, den_);
  return Rat(checked_mul(num_ / g1, o.num_ / g2),
             checked_mul(den_ / g2, o.den_ / g1), 0);
}

bool Rat::operator<(const Rat& o) const {
  return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
}

double Rat::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rat::to_string() const {
  auto print128 = [](__int128 v) {
    if (v == 0) return std::string("0");
    bool neg = v < 0;
    if (neg) v = -v;
    std::string out;
    while (v > 0) {
      out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    if (neg) out.push_back('-');
    return std::string(out.rbegin(), out.rend());
  };
  if (den_ == 1) return print128(num_);
  return print128(num_) + "/" + print128(den_);
}

std::uint64_t Rat::hash() const {
  auto mix = [](std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
  };
  std::uint64_t h = mix(static_cast<std::uint64_t>(num_)) * 31 +
                    mix(static_cast<std::uint64_t>(num_ >> 64));
  h = h * 31 + mix(static_cast<std::uint64_t>(den_));
  h = h * 31 + mix(static_cast<std::uint64_t>(den_ >> 64));
  return h;
}

bool RatBox::contains(std::span<const double> point) const {
  if (point.size() != sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (point[i] < sides[i].first.to_double() ||
        point[i] > sides[i].second.to_double()) {
      return false;
    }
  }
  return true;
}

bool RatBoxUnion::contains(std::span<const double> point) const {
  for (const auto& box : boxes) {
    if (box.contains(point)) return true;
  }
  return false;
}

void RatBoxUnion::validate() const {
  require(!boxes.empty(), "box union must contain at least one box");
  int dim = boxes.front().dimension();
  require(dim >= 1, "boxes must have positive dimension");
  for (const auto& box : boxes) {
    require(box.dimension() == dim, "boxes must share a dimension");
    for (const auto& [lo, hi] : box.sides) {
      require(lo.nonnegative() && hi <= Rat::of(1) && lo <= hi,
              "box sides must satisfy 0 <= lo <= hi <= 1");
    }
  }
}

}  // namespace treecap
