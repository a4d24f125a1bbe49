#pragma once

#include "essclose/closure.hpp"
#include "essclose/copula.hpp"

namespace essclose {

/// Empirical support: cells of a sample cloud holding at least min_count
/// points.
struct SupportEstimate {
  DyadicGridSet grid;
  int min_count = 1;
  uint64_t sample_size = 0;
  uint64_t seed = 0;
};

/// A piece sitting inside an axis-perpendicular hyperplane {x_axis = coord}
/// with a relatively interior point isolated from the rest of the set.
struct HyperplaneViolation {
  int axis = 0;  // 0-based
  Rat coordinate;
  RatVec witness;
  Rat isolation_radius;
  size_t piece_index = 0;
};

/// Graph {(x, f_1(x), ..., f_m(x))} as a symbolic set; one piece per map
/// piece, tags inherited. Requires n + m <= 3.
TaggedPieceSet hypergraph(const PiecewiseMap& F);

/// The explicit support formula: n-essential closure of the hypergraph of
/// the essential refinement. Coordinate maps are validated
/// measure-preserving first.
TaggedPieceSet support_bipartite_exact(const PiecewiseMap& F, int n);

/// Exact support of a constructible copula (diagonal for Min, antidiagonal
/// for W_2, graph closure for shuffles and bipartite copulas, the full
/// square for the 2-dimensional product). Throws InputError where the
/// symbolic class cannot represent it.
TaggedPieceSet support_exact(const CopulaSpec& C);

SupportEstimate support_estimate(const SampleCloud& cloud, int L, int min_count);

struct ClosednessResult {
  bool closed = true;
  TaggedPieceSet residual_pieces;  // symbolic route
  DyadicGridSet residual_cells;    // grid route
};

/// Necessary condition: supports are 1-essentially closed. Returns the
/// pieces/cells that die under the 1-closure.
ClosednessResult check_one_essential_closedness(const TaggedPieceSet& S);
ClosednessResult check_one_essential_closedness(const SupportEstimate& E,
                                                const GridClosureParams& params = {});

/// Necessary condition: no open set may meet the candidate support inside an
/// axis-perpendicular hyperplane only (such hyperplanes carry no mass under
/// any stochastic measure). Empty result means the condition holds.
std::vector<HyperplaneViolation> check_hyperplane_condition(const TaggedPieceSet& S);

TaggedPieceSet permuted_support(const TaggedPieceSet& S, const Permutation& sigma);
DyadicGridSet permuted_support(const DyadicGridSet& A, const Permutation& sigma);

struct DimensionEstimate {
  double slope = 0;
  std::vector<std::pair<int, uint64_t>> level_counts;
};

/// Box-counting slope of log2(occupied cells) against the level, least
/// squares over >= 3 levels.
DimensionEstimate box_counting_dimension(const TaggedPieceSet& S, const std::vector<int>& levels);
DimensionEstimate box_counting_dimension(const CopulaSpec& C, const std::vector<int>& levels,
                                         uint64_t N, uint64_t seed, int min_count);

/// Rebuilds the interval-exchange function from a union of non-vertical Full
/// segments tiling [0,1] in x, dropping the rightmost point of every piece
/// but the last (half-open sources). Round trip:
/// support_bipartite_exact(extract_function_from_support(S), 1) == S.
PiecewiseMap extract_function_from_support(const TaggedPieceSet& S);

}  // namespace essclose
