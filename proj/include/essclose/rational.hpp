#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace essclose {

/// Exact rational scalar backed by 128-bit integers.
///
/// Invariants: den > 0, gcd(|num|, den) = 1, and |num|, den < 2^62 after
/// normalization, so any single +,-,*,/ stays inside __int128 without
/// overflow checks on the intermediate products. Magnitudes beyond the
/// bound throw std::overflow_error; the symbolic engine operates on small
/// coordinates where this never triggers.
class Rat {
 public:
  using Int = __int128;

  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(Int n, Int d) : num_(n), den_(d) { normalize(); }

  static Rat pow2(int e) {
    if (e >= 0) {
      if (e > 61) throw std::overflow_error("Rat::pow2 exponent too large");
      return Rat(Int(1) << e, 1);
    }
    if (e < -61) throw std::overflow_error("Rat::pow2 exponent too small");
    return Rat(1, Int(1) << (-e));
  }

  /// Exact value of a binary64 double (doubles are dyadic rationals).
  static Rat from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("Rat::from_double: non-finite");
    if (x == 0.0) return Rat(0);
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    auto n = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    while (n != 0 && (n & 1) == 0) {
      n >>= 1;
      ++e;
    }
    return Rat(n) * pow2(e);
  }

  Int num() const { return num_; }
  Int den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  Rat operator-() const { return Rat(-num_, den_, unchecked_tag{}); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return Rat(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  /// Largest integer <= value.
  long long floor() const {
    Int q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return to_ll(q);
  }
  long long ceil() const {
    Int q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return to_ll(q);
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return int_to_string(num_);
    return int_to_string(num_) + "/" + int_to_string(den_);
  }

  /// Parses "n", "-n" or "n/d".
  static Rat parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s), 1);
    return Rat(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  struct unchecked_tag {};
  Rat(Int n, Int d, unchecked_tag) : num_(n), den_(d) {}

  static constexpr Int kBound = Int(1) << 62;

  static Int iabs(Int v) { return v < 0 ? -v : v; }

  static Int gcd(Int a, Int b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
      Int t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    Int g = gcd(num_, den_);
    num_ /= g;
    den_ /= g;
    if (iabs(num_) >= kBound || den_ >= kBound)
      throw std::overflow_error("Rat: magnitude exceeds 2^62 after reduction");
  }

  static long long to_ll(Int v) {
    if (v > Int(INT64_MAX) || v < Int(INT64_MIN))
      throw std::overflow_error("Rat: integer part exceeds 64 bits");
    return static_cast<long long>(v);
  }

  static std::string int_to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    char buf[48];
    int i = 48;
    while (u != 0) {
      buf[--i] = char('0' + int(u % 10));
      u /= 10;
    }
    std::string out(buf + i, 48 - i);
    return neg ? "-" + out : out;
  }

  static Int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: empty component");
    size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("Rat::parse: no digits");
    Int v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw std::invalid_argument("Rat::parse: invalid character in '" + s + "'");
      v = v * 10 + (s[i] - '0');
      if (v >= kBound) throw std::overflow_error("Rat::parse: value too large");
    }
    return neg ? -v : v;
  }

  Int num_;
  Int den_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace essclose

namespace Eigen {

template <>
struct NumTraits<essclose::Rat> {
  using Real = essclose::Rat;
  using NonInteger = essclose::Rat;
  using Nested = essclose::Rat;
  using Literal = long long;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 12,
    MulCost = 12,
  };
  static inline Real epsilon() { return essclose::Rat(0); }
  static inline Real dummy_precision() { return essclose::Rat(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
