#pragma once

#include <functional>
#include <variant>

#include "essclose/setmodel.hpp"

namespace essclose {

/// One leg of an interval exchange: source maps onto target affinely with
/// slope +1 or -1. |source| = |target| exactly.
struct ShufflePiece {
  Interval src;
  Interval dst;
  int orientation = 1;  // +1 ascending, -1 descending
};

/// Shuffle of Min: sources and targets each partition [0,1] up to endpoints.
struct ShuffleOfMin {
  std::vector<ShufflePiece> pieces;
};

/// One affine piece of a map [0,1]^n -> [0,1]^m: x |-> coef * x + offset on
/// the domain box. Null pieces are dense measure-zero overrides.
struct MapPiece {
  std::vector<Interval> box;  // n intervals
  Tag tag = Tag::Full;
  RatMat coef;                // m x n
  RatVec offset;              // m
};

/// Piecewise-affine map with Full pieces covering [0,1]^n up to a null set,
/// overlapping only on boundaries.
struct PiecewiseMap {
  int n = 1;
  int m = 1;
  std::vector<MapPiece> pieces;

  /// Value from Full pieces with half-open boxes [lo, hi) (closed at 1).
  RatVec value_full(const RatVec& x) const;
  bool has_null_pieces() const;
};

void validate_piecewise_map(const PiecewiseMap& F);

struct ProductCopula {
  int k = 2;
};
struct MinCopula {
  int k = 2;
};
struct WLowerCopula {};  // W_2(u,v) = max(u+v-1, 0), k = 2 only

/// Bipartite dependence copula (U, F(U)) with U uniform on [0,1]^n; the base
/// is the 1-dimensional uniform for n = 1 and the product copula for n = 2,
/// which keeps the base measure equivalent to Lebesgue.
struct BipartiteCopula {
  int n = 1;
  PiecewiseMap map;
};

struct RawCopula {
  int k = 2;
  std::function<double(const std::vector<double>&)> cdf;
  std::string name;
};

class CopulaSpec {
 public:
  using Variant =
      std::variant<ProductCopula, MinCopula, WLowerCopula, ShuffleOfMin, BipartiteCopula, RawCopula>;

  static CopulaSpec product(int k);
  static CopulaSpec min_copula(int k);
  static CopulaSpec w2();
  static CopulaSpec shuffle(ShuffleOfMin s);
  static CopulaSpec bipartite(int n, PiecewiseMap map);
  static CopulaSpec raw(int k, std::function<double(const std::vector<double>&)> cdf,
                        std::string name);

  int dim() const;
  bool exact() const;  // everything except Raw evaluates in rationals
  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

 private:
  explicit CopulaSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// CDF values. The exact form throws InputError on Raw copulas.
Rat copula_cdf_exact(const CopulaSpec& C, const RatVec& u);
double copula_cdf(const CopulaSpec& C, const std::vector<double>& u);

/// Signed inclusion-exclusion corner sum over the 2^k box corners.
Rat c_volume_exact(const CopulaSpec& C, const std::vector<Interval>& box);
double c_volume(const CopulaSpec& C, const std::vector<Interval>& box);

/// Mass of [0,u] x [0,v] under the shuffle measure, in closed form per leg.
Rat shuffle_cdf(const ShuffleOfMin& S, const Rat& u, const Rat& v);

struct AxiomReport {
  double tolerance = 0;
  bool grounded_pass = true;
  std::string grounded_witness;
  bool margins_pass = true;
  double margin_max_dev = 0;
  std::string margin_witness;
  bool k_increasing_pass = true;
  double min_volume = 0;
  std::vector<Interval> min_volume_box;

  bool all_pass() const { return grounded_pass && margins_pass && k_increasing_pass; }
};

/// Groundedness and margins on a lattice plus seeded random probe points;
/// k-increasing via c_volume on deterministic half/full boxes plus seeded
/// random boxes. Tolerance 1e-12 for exact variants, 1e-9 for Raw.
AxiomReport check_copula_axioms(const CopulaSpec& C, int probes, uint64_t seed);

/// Deterministic sampler; throws InputError for Raw (no generic sampler).
SampleCloud sample_copula(const CopulaSpec& C, uint64_t N, uint64_t seed);

struct MeasurePreservationReport {
  bool preserving = false;
  Rat max_deviation;
  long long worst_bin = -1;

  explicit operator bool() const { return preserving; }
};

/// Exact pushforward of lambda_n under a scalar coordinate map onto level-L
/// dyadic bins; preserving iff every bin receives mass exactly 2^-L.
/// Requires m = 1 and nonconstant pieces.
MeasurePreservationReport validate_measure_preserving(const PiecewiseMap& T, int L);
MeasurePreservationReport validate_measure_preserving(const ShuffleOfMin& S, int L);

/// Coordinate map j of F as a scalar PiecewiseMap.
PiecewiseMap coordinate_map(const PiecewiseMap& F, int j);

/// Drops Null pieces; the result equals F almost everywhere and its graph
/// has no open region projecting null onto the domain axes yet positively
/// onto a codomain axis.
PiecewiseMap essential_refinement(const PiecewiseMap& F);

/// The shuffle's transformation T as a piecewise-affine map (slope +-1).
PiecewiseMap shuffle_to_map(const ShuffleOfMin& S);

/// Interval exchange inverse: sources and targets swap roles.
ShuffleOfMin inverse_shuffle(const ShuffleOfMin& S);

void validate_shuffle(const ShuffleOfMin& S);

}  // namespace essclose
