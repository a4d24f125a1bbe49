#include "essclose/support.hpp"

#include <algorithm>
#include <map>

#include "essclose/geometry.hpp"

namespace essclose {

TaggedPieceSet hypergraph(const PiecewiseMap& F) {
  int k = F.n + F.m;
  if (k > kMaxDim)
    throw InputError("hypergraph: n + m <= 3 required for symbolic output; use the grid path");
  TaggedPieceSet out(k);
  for (const auto& piece : F.pieces) {
    RatVec anchor(k);
    RatMat dirs(k, F.n);
    for (int j = 0; j < F.n; ++j) anchor[j] = Rat(0);
    for (int i = 0; i < F.m; ++i) anchor[F.n + i] = piece.offset[i];
    for (int c = 0; c < F.n; ++c) {
      for (int j = 0; j < F.n; ++j) dirs(j, c) = (j == c) ? Rat(1) : Rat(0);
      for (int i = 0; i < F.m; ++i) dirs(F.n + i, c) = piece.coef(i, c);
    }
    out.pieces.emplace_back(std::move(anchor), std::move(dirs), piece.box, piece.tag);
  }
  return out;
}

TaggedPieceSet support_bipartite_exact(const PiecewiseMap& F, int n) {
  if (F.n != n) throw InputError("support_bipartite_exact: map domain dimension != n");
  validate_piecewise_map(F);
  for (int j = 0; j < F.m; ++j) {
    auto rep = validate_measure_preserving(coordinate_map(F, j), 10);
    if (!rep.preserving)
      throw InputError("support_bipartite_exact: coordinate map " + std::to_string(j + 1) +
                       " is not measure-preserving");
  }
  return essential_closure_exact(hypergraph(essential_refinement(F)), n);
}

namespace {

PiecewiseMap identity_tuple(int m) {
  PiecewiseMap F;
  F.n = 1;
  F.m = m;
  MapPiece piece;
  piece.box = {unit_interval()};
  piece.tag = Tag::Full;
  piece.coef.resize(m, 1);
  piece.offset.resize(m);
  for (int i = 0; i < m; ++i) {
    piece.coef(i, 0) = Rat(1);
    piece.offset[i] = Rat(0);
  }
  F.pieces.push_back(std::move(piece));
  return F;
}

}  // namespace

TaggedPieceSet support_exact(const CopulaSpec& C) {
  if (auto* p = C.get_if<ProductCopula>()) {
    if (p->k > 2)
      throw InputError("support_exact: the full k-cube exceeds the symbolic class for k = " +
                       std::to_string(p->k) + "; use the sampled estimate");
    TaggedPieceSet out(2);
    out.pieces.push_back(AffinePiece::axis_box({unit_interval(), unit_interval()}));
    return canonicalize(out);
  }
  if (auto* p = C.get_if<MinCopula>()) {
    if (p->k > kMaxDim)
      throw InputError("support_exact: diagonal of dimension > 3 is unrepresentable");
    return support_bipartite_exact(identity_tuple(p->k - 1), 1);
  }
  if (C.get_if<WLowerCopula>()) {
    TaggedPieceSet out(2);
    RatVec a(2), b(2);
    a << Rat(0), Rat(1);
    b << Rat(1), Rat(0);
    out.pieces.push_back(AffinePiece::segment(a, b));
    return canonicalize(out);
  }
  if (auto* s = C.get_if<ShuffleOfMin>())
    return support_bipartite_exact(shuffle_to_map(*s), 1);
  if (auto* b = C.get_if<BipartiteCopula>())
    return support_bipartite_exact(b->map, b->n);
  throw InputError("support_exact: raw copulas have no symbolic support");
}

SupportEstimate support_estimate(const SampleCloud& cloud, int L, int min_count) {
  if (min_count < 1) throw InputError("support_estimate: min_count >= 1 required");
  SupportEstimate est;
  est.min_count = min_count;
  est.sample_size = cloud.points.size();
  est.seed = cloud.seed;
  est.grid = DyadicGridSet(cloud.k, L);
  int m = est.grid.cells_per_axis();
  std::map<Cell, uint64_t> counts;
  for (const auto& pt : cloud.points) {
    Cell c{0, 0, 0};
    for (int j = 0; j < cloud.k; ++j) {
      double scaled = pt[j] * m;
      auto idx = static_cast<long long>(std::ceil(scaled)) - 1;
      c[static_cast<size_t>(j)] = static_cast<int32_t>(std::clamp<long long>(idx, 0, m - 1));
    }
    ++counts[c];
  }
  for (const auto& [cell, n] : counts)
    if (n >= static_cast<uint64_t>(min_count)) est.grid.cells.insert(cell);
  return est;
}

ClosednessResult check_one_essential_closedness(const TaggedPieceSet& S) {
  ClosednessResult res;
  TaggedPieceSet canon = canonicalize(S);
  TaggedPieceSet closed = essential_closure_exact(canon, 1);
  res.closed = set_equal(closed, canon);
  res.residual_pieces = TaggedPieceSet(S.k);
  if (!res.closed) {
    for (const auto& piece : canon.pieces) {
      TaggedPieceSet one(S.k);
      one.pieces.push_back(piece);
      if (!set_subset(one, closed)) res.residual_pieces.pieces.push_back(piece);
    }
  }
  return res;
}

ClosednessResult check_one_essential_closedness(const SupportEstimate& E,
                                                const GridClosureParams& params) {
  GridClosureParams p = params;
  p.d = 1;
  ClosednessResult res;
  DyadicGridSet closed = essential_closure_grid(E.grid, p);
  res.residual_cells = DyadicGridSet(E.grid.k, E.grid.L);
  for (const auto& c : E.grid.cells)
    if (!closed.contains(c)) res.residual_cells.cells.insert(c);
  res.closed = res.residual_cells.empty();
  return res;
}

namespace {

// Is the piece contained in the hyperplane {x_axis = c}?
std::optional<Rat> hyperplane_coordinate(const AffinePiece& piece, int axis) {
  for (int c = 0; c < piece.p; ++c)
    if (!piece.dirs(axis, c).is_zero()) return std::nullopt;
  return piece.anchor[axis];
}

// Candidate parameters inside the open gap (lo, hi), avoiding a finite set
// of excluded parameter values: midpoints of the subintervals the exclusions
// cut out of the gap.
std::vector<Rat> gap_candidates(const Rat& lo, const Rat& hi, std::vector<Rat> excluded) {
  std::vector<Rat> bounds{lo};
  std::sort(excluded.begin(), excluded.end());
  for (const auto& x : excluded)
    if (lo < x && x < hi) bounds.push_back(x);
  bounds.push_back(hi);
  std::vector<Rat> out;
  for (size_t i = 0; i + 1 < bounds.size(); ++i)
    if (bounds[i] < bounds[i + 1]) out.push_back((bounds[i] + bounds[i + 1]) / Rat(2));
  return out;
}

}  // namespace

std::vector<HyperplaneViolation> check_hyperplane_condition(const TaggedPieceSet& S) {
  TaggedPieceSet canon = canonicalize(S);
  std::vector<HyperplaneViolation> out;

  for (size_t pi = 0; pi < canon.pieces.size(); ++pi) {
    const AffinePiece& piece = canon.pieces[pi];
    for (int axis = 0; axis < canon.k; ++axis) {
      auto coord = hyperplane_coordinate(piece, axis);
      if (!coord) continue;

      // Pieces not contained in this hyperplane; only those can cover.
      std::vector<const AffinePiece*> others;
      for (size_t qi = 0; qi < canon.pieces.size(); ++qi) {
        if (qi == pi) continue;
        auto oc = hyperplane_coordinate(canon.pieces[qi], axis);
        if (oc && *oc == *coord) continue;
        others.push_back(&canon.pieces[qi]);
      }

      auto min_dist2 = [&](const RatVec& x) {
        Rat best(-1);
        for (const auto* o : others) {
          Rat d2 = distance2_point_piece(x, *o);
          if (best.sign() < 0 || d2 < best) best = d2;
        }
        return best;  // -1 when there is nothing to cover with
      };

      auto emit = [&](const RatVec& witness) {
        Rat d2 = min_dist2(witness);
        HyperplaneViolation v;
        v.axis = axis;
        v.coordinate = *coord;
        v.witness = witness;
        v.isolation_radius = d2.sign() < 0 ? Rat(1) : rational_sqrt_lower(d2);
        v.piece_index = pi;
        out.push_back(std::move(v));
      };

      if (piece.p == 0) {
        bool covered = false;
        for (const auto* o : others)
          if (point_in_piece(piece.anchor, *o)) {
            covered = true;
            break;
          }
        if (!covered) emit(piece.anchor);
        continue;
      }

      if (piece.p == 1) {
        // Exact coverage of the parameter line: other pieces cut closed
        // intervals out of [0,1]; degenerate touches cannot cover a gap but
        // must be dodged when placing the witness.
        std::vector<Interval> cover;
        std::vector<Rat> touches;
        for (const auto* o : others) {
          if (auto iv = segment_cover_interval(piece, *o)) {
            if (iv->degenerate())
              touches.push_back(iv->lo);
            else
              cover.push_back(*iv);
          }
        }
        cover = merge_intervals(std::move(cover));
        Rat cur = piece.box[0].lo;
        std::optional<std::pair<Rat, Rat>> gap;
        for (const auto& cv : cover) {
          if (cv.lo > cur) {
            gap = {cur, cv.lo};
            break;
          }
          cur = max(cur, cv.hi);
        }
        if (!gap && cur < piece.box[0].hi) gap = {cur, piece.box[0].hi};
        if (!gap) continue;  // fully covered: no isolated interior point
        for (const auto& t : gap_candidates(gap->first, gap->second, touches)) {
          RatVec t1(1);
          t1[0] = t;
          RatVec x = piece.at(t1);
          if (min_dist2(x).sign() != 0) {
            emit(x);
            break;
          }
        }
        continue;
      }

      // p == 2: pieces off the hyperplane intersect a patch in at most
      // 1-dimensional sets, which can never cover it; search a refining
      // parameter grid for a point clear of all of them. Each such piece
      // meets at most ~2*nsub grid points, so nsub = 64 suffices for any
      // set this engine handles.
      bool emitted = false;
      for (int nsub = 2; nsub <= 64 && !emitted; nsub *= 2) {
        for (int a = 0; a < nsub && !emitted; ++a) {
          for (int b = 0; b < nsub && !emitted; ++b) {
            RatVec t(2);
            t[0] = piece.box[0].lo +
                   piece.box[0].length() * Rat(2 * a + 1, 2LL * nsub);
            t[1] = piece.box[1].lo +
                   piece.box[1].length() * Rat(2 * b + 1, 2LL * nsub);
            RatVec x = piece.at(t);
            if (min_dist2(x).sign() != 0) {
              emit(x);
              emitted = true;
            }
          }
        }
      }
    }
  }
  return out;
}

TaggedPieceSet permuted_support(const TaggedPieceSet& S, const Permutation& sigma) {
  return canonicalize(coordinate_permute(S, sigma));
}

DyadicGridSet permuted_support(const DyadicGridSet& A, const Permutation& sigma) {
  return coordinate_permute(A, sigma);
}

namespace {

DimensionEstimate slope_fit(std::vector<std::pair<int, uint64_t>> counts) {
  DimensionEstimate est;
  est.level_counts = std::move(counts);
  int n = static_cast<int>(est.level_counts.size());
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = est.level_counts[static_cast<size_t>(i)].first;
    y[i] = std::log2(static_cast<double>(est.level_counts[static_cast<size_t>(i)].second));
  }
  double xm = x.mean(), ym = y.mean();
  Eigen::ArrayXd dx = x.array() - xm;
  est.slope = (dx * (y.array() - ym)).sum() / dx.square().sum();
  return est;
}

void validate_levels(const std::vector<int>& levels) {
  if (levels.size() < 3) throw InputError("box_counting_dimension: need at least 3 levels");
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw InputError("box_counting_dimension: levels must be strictly increasing");
}

}  // namespace

DimensionEstimate box_counting_dimension(const TaggedPieceSet& S, const std::vector<int>& levels) {
  validate_levels(levels);
  if (canonicalize(S).empty())
    throw InputError("box_counting_dimension: undefined for the empty set");
  std::vector<std::pair<int, uint64_t>> counts;
  for (int L : levels) counts.emplace_back(L, rasterize(S, L).cells.size());
  return slope_fit(std::move(counts));
}

DimensionEstimate box_counting_dimension(const CopulaSpec& C, const std::vector<int>& levels,
                                         uint64_t N, uint64_t seed, int min_count) {
  validate_levels(levels);
  SampleCloud cloud = sample_copula(C, N, seed);
  std::vector<std::pair<int, uint64_t>> counts;
  for (int L : levels) {
    auto est = support_estimate(cloud, L, min_count);
    if (est.grid.empty())
      throw InputError("box_counting_dimension: empty estimate at level " + std::to_string(L));
    counts.emplace_back(L, est.grid.cells.size());
  }
  return slope_fit(std::move(counts));
}

PiecewiseMap extract_function_from_support(const TaggedPieceSet& S) {
  if (S.k != 2) throw InputError("extract_function_from_support: k = 2 required");
  TaggedPieceSet canon = canonicalize(S);
  std::vector<const AffinePiece*> segs;
  for (const auto& piece : canon.pieces) {
    if (piece.p != 1 || piece.tag != Tag::Full)
      throw InputError("extract_function_from_support: set is not a union of Full segments");
    if (piece.dirs(0, 0).is_zero())
      throw InputError("extract_function_from_support: vertical segment present");
    segs.push_back(&piece);
  }
  if (segs.empty()) throw InputError("extract_function_from_support: empty set");
  // Canonical segments anchor at the lex-min endpoint, so x increases along
  // the direction; sort by x range and demand a tiling of [0,1].
  std::sort(segs.begin(), segs.end(), [](const AffinePiece* a, const AffinePiece* b) {
    return a->anchor[0] < b->anchor[0];
  });
  PiecewiseMap F;
  F.n = 1;
  F.m = 1;
  Rat cur(0);
  for (const auto* seg : segs) {
    Rat x0 = seg->anchor[0];
    Rat x1 = x0 + seg->dirs(0, 0);
    if (x0 < cur)
      throw InputError("extract_function_from_support: x-projections overlap on an interval");
    if (x0 > cur)
      throw InputError("extract_function_from_support: x-projections leave a gap at " + cur.str());
    cur = x1;
    MapPiece piece;
    piece.box = {Interval(x0, x1)};
    piece.tag = Tag::Full;
    piece.coef.resize(1, 1);
    piece.offset.resize(1);
    piece.coef(0, 0) = seg->dirs(1, 0) / seg->dirs(0, 0);
    piece.offset[0] = seg->anchor[1] - piece.coef(0, 0) * x0;
    F.pieces.push_back(std::move(piece));
  }
  if (!(cur == Rat(1)))
    throw InputError("extract_function_from_support: x-projections do not reach 1");
  return F;
}

}  // namespace essclose
