#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "essclose/rational.hpp"

namespace essclose {

/// Ambient dimension cap of the symbolic engine. Copula evaluation is not
/// capped; only piece sets and grids live in dimension <= 3.
inline constexpr int kMaxDim = 3;

// Dense column vector / direction matrix over an arbitrary scalar.
template <class Scalar>
using VecK = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatKP = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RatVec = VecK<Rat>;
using RatMat = MatKP<Rat>;
using DVec = VecK<double>;

/// Structured input problems (bad JSON, dimension mismatch, invalid flags).
/// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Closed interval [lo, hi] with rational endpoints.
struct Interval {
  Rat lo;
  Rat hi;

  Interval() = default;
  Interval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw InputError("Interval: hi < lo");
  }

  Rat length() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

  std::optional<Interval> intersect(const Interval& o) const {
    Rat l = max(lo, o.lo), h = min(hi, o.hi);
    if (h < l) return std::nullopt;
    return Interval(l, h);
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

inline const Interval& unit_interval() {
  static const Interval u(Rat(0), Rat(1));
  return u;
}

/// Merges closed intervals, joining overlapping or abutting ones.
inline std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

/// Set of axis indices naming a standard subspace of R^k. Axes are 0-based
/// internally; the JSON/CLI layer speaks 1-based. d = 0 (no axes) names the
/// trivial subspace {0}.
struct AxisSet {
  int k = 0;
  std::vector<int> axes;  // strictly increasing, in [0, k)

  AxisSet() = default;
  AxisSet(int k_, std::vector<int> axes_) : k(k_), axes(std::move(axes_)) {
    if (k < 0) throw InputError("AxisSet: negative ambient dimension");
    int prev = -1;
    for (int a : axes) {
      if (a < 0 || a >= k) throw InputError("AxisSet: axis out of range");
      if (a <= prev) throw InputError("AxisSet: axes must be strictly increasing");
      prev = a;
    }
  }

  static AxisSet full(int k) {
    std::vector<int> ax(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) ax[static_cast<size_t>(i)] = i;
    return AxisSet(k, std::move(ax));
  }

  /// First n axes of R^k (the subspace W_0).
  static AxisSet leading(int k, int n) {
    std::vector<int> ax(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ax[static_cast<size_t>(i)] = i;
    return AxisSet(k, std::move(ax));
  }

  int d() const { return static_cast<int>(axes.size()); }
};

/// All axis subsets of size d, lexicographic. k <= 3 keeps this tiny.
inline std::vector<AxisSet> axis_subsets(int k, int d) {
  if (d < 0 || d > k) throw InputError("axis_subsets: d out of range");
  std::vector<AxisSet> out;
  std::vector<int> idx(static_cast<size_t>(d));
  // standard combination enumeration
  for (int i = 0; i < d; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    out.emplace_back(k, idx);
    int i = d - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == k - d + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < d; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

/// Permutation of {0..k-1}; result coordinate j reads source coordinate
/// perm[j], matching the point-set definition of coordinate permutation.
struct Permutation {
  std::vector<int> map;  // map[j] = sigma(j)

  explicit Permutation(std::vector<int> m) : map(std::move(m)) {
    std::vector<char> seen(map.size(), 0);
    for (int v : map) {
      if (v < 0 || v >= static_cast<int>(map.size()) || seen[static_cast<size_t>(v)])
        throw InputError("Permutation: not a bijection");
      seen[static_cast<size_t>(v)] = 1;
    }
  }

  static Permutation identity(int k) {
    std::vector<int> m(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) m[static_cast<size_t>(i)] = i;
    return Permutation(std::move(m));
  }

  int k() const { return static_cast<int>(map.size()); }

  Permutation inverse() const {
    std::vector<int> inv(map.size());
    for (int j = 0; j < k(); ++j) inv[static_cast<size_t>(map[static_cast<size_t>(j)])] = j;
    return Permutation(std::move(inv));
  }
};

}  // namespace essclose
