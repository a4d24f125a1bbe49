#pragma once

#include <optional>
#include <vector>

#include "essclose/setmodel.hpp"

namespace essclose {

// Exact geometric predicates on the piecewise-affine class. Everything here
// is rational arithmetic; no tolerances.

/// Rank of a rational matrix via fraction-free elimination.
int rat_rank(RatMat m);

/// Membership of a point in the closed piece (tags ignored).
bool point_in_piece(const RatVec& x, const AffinePiece& piece);

/// Geometry containment: closed image of `inner` inside closed image of
/// `outer`. Convexity makes the corner test sufficient.
bool piece_geometry_contains(const AffinePiece& outer, const AffinePiece& inner);

/// Parameter interval of `seg` (a p = 1 piece) covered by the closed image of
/// `other`; nullopt when disjoint. Intersections of convex pieces with a
/// segment are parameter intervals, possibly degenerate.
std::optional<Interval> segment_cover_interval(const AffinePiece& seg,
                                               const AffinePiece& other);

/// Convex polygon in an exact 2-dimensional parameter plane, CCW or CW.
using RatPolygon = std::vector<Eigen::Matrix<Rat, 2, 1>>;

/// Clips `poly` against the closed half-plane a.x + b.y <= c.
RatPolygon clip_halfplane(const RatPolygon& poly, const Rat& a, const Rat& b, const Rat& c);

/// Twice the signed area (shoelace).
Rat polygon_area2(const RatPolygon& poly);

/// Whether the closed piece meets the closed axis box (exact).
bool piece_meets_box(const AffinePiece& piece, const std::vector<Interval>& box);

/// Squared Euclidean distance from x to the closed piece, exact rational.
Rat distance2_point_piece(const RatVec& x, const AffinePiece& piece);

/// Rational r > 0 with r^2 <= q, for q > 0 (lower bound on sqrt(q)).
Rat rational_sqrt_lower(const Rat& q);

/// lambda_p(projection of the piece onto W) > 0? True iff the piece is Full
/// with direction space projecting at full rank |W| (d = 0: nonempty).
bool piece_projects_positively(const AffinePiece& piece, const AxisSet& W);

/// Exact d-dimensional measure of the projection of S onto W, d = |W| <= 2.
/// d = 1 merges intervals; d = 2 uses inclusion-exclusion over convex clips.
Rat projection_measure(const TaggedPieceSet& S, const AxisSet& W);

}  // namespace essclose
