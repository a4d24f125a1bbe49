#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "essclose/types.hpp"

namespace essclose {

enum class Tag : uint8_t { Full, Null };

/// Affine piece of intrinsic dimension p in [0,1]^k:
///   { anchor + sum_i t_i * dirs.col(i) : t in param box }.
/// Tag Full denotes the whole closed piece; Tag Null denotes the dense
/// measure-zero subset of points with all-rational coordinates (the only
/// null-set structure the engine represents).
struct AffinePiece {
  int k = 0;
  int p = 0;
  RatVec anchor;
  RatMat dirs;                // k x p, linearly independent columns
  std::vector<Interval> box;  // p closed parameter intervals
  Tag tag = Tag::Full;

  AffinePiece() = default;
  AffinePiece(RatVec anchor_, RatMat dirs_, std::vector<Interval> box_, Tag tag_);

  static AffinePiece point(RatVec x, Tag tag = Tag::Full);
  static AffinePiece segment(const RatVec& a, const RatVec& b, Tag tag = Tag::Full);
  /// Parallelogram patch spanned by u, v from corner a, parameters in [0,1]^2.
  static AffinePiece patch(const RatVec& a, const RatVec& u, const RatVec& v,
                           Tag tag = Tag::Full);
  /// Axis-aligned box piece (k = 2 only for p = 2).
  static AffinePiece axis_box(const std::vector<Interval>& ranges, Tag tag = Tag::Full);

  RatVec at(const RatVec& t) const;
  /// Images of the 2^p parameter-box corners.
  std::vector<RatVec> corners() const;
};

/// Finite union of affine pieces in a common ambient dimension. Value type;
/// all operations are pure.
struct TaggedPieceSet {
  int k = 0;
  std::vector<AffinePiece> pieces;

  TaggedPieceSet() = default;
  explicit TaggedPieceSet(int k_) : k(k_) {}
  TaggedPieceSet(int k_, std::vector<AffinePiece> pieces_);

  bool empty() const { return pieces.empty(); }
};

/// Cell index tuple; coordinates beyond k are zero.
using Cell = std::array<int32_t, kMaxDim>;

/// Union of closed level-L dyadic cells in [0,1]^k. Cell (i_1..i_k) denotes
/// the closed box prod_j [i_j/2^L, (i_j+1)/2^L]. k = 0 is allowed: the set is
/// then either empty or the single point {0}.
struct DyadicGridSet {
  int k = 0;
  int L = 0;
  std::set<Cell> cells;

  DyadicGridSet() = default;
  DyadicGridSet(int k_, int L_);
  DyadicGridSet(int k_, int L_, std::set<Cell> cells_);

  int cells_per_axis() const { return 1 << L; }
  bool empty() const { return cells.empty(); }
  bool contains(const Cell& c) const { return cells.count(c) != 0; }
  void check_cell(const Cell& c) const;
  void insert_checked(const Cell& c);
};

/// Point sample in [0,1]^k together with the seed that produced it.
struct SampleCloud {
  int k = 0;
  uint64_t seed = 0;
  std::vector<DVec> points;
};

// --- setmodel operations ---

/// Drops coordinates outside W. |W| = 0 yields the 0-dimensional marker set:
/// one (empty) cell iff A is nonempty.
DyadicGridSet project_grid(const DyadicGridSet& A, const AxisSet& W);

/// |cells| * 2^(-k L), exact.
Rat grid_measure(const DyadicGridSet& A);

/// All cells within Chebyshev distance r_cells of A, clipped to the grid.
DyadicGridSet dilate(const DyadicGridSet& A, int r_cells);

/// Occupies every cell whose closed box meets the closed piece image. Null
/// pieces rasterize like Full ones (they are dense in the piece).
DyadicGridSet rasterize(const TaggedPieceSet& S, int L);
/// Cell containing each point; boundary points go to the lower-index cell.
DyadicGridSet rasterize(const SampleCloud& cloud, int L);

TaggedPieceSet coordinate_permute(const TaggedPieceSet& S, const Permutation& sigma);
DyadicGridSet coordinate_permute(const DyadicGridSet& A, const Permutation& sigma);

/// Unique normal form within the representable class: parameter boxes
/// normalized, degenerate pieces demoted, same-tag collinear/coplanar
/// overlapping pieces merged, pieces absorbed by containment, Null segments
/// trimmed against collinear Full ones, then sorted. Equal canonical forms
/// denote equal point sets.
TaggedPieceSet canonicalize(const TaggedPieceSet& S);

/// Concatenation of the piece lists (same ambient k required).
TaggedPieceSet set_union(const TaggedPieceSet& A, const TaggedPieceSet& B);

/// Point-set containment / equality, decided on canonical forms.
bool set_subset(const TaggedPieceSet& A, const TaggedPieceSet& B);
bool set_equal(const TaggedPieceSet& A, const TaggedPieceSet& B);

/// Deterministic total order used by canonical sorting; exposed for tests.
bool piece_less(const AffinePiece& a, const AffinePiece& b);

}  // namespace essclose
