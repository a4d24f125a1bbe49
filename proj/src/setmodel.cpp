#include "essclose/setmodel.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "essclose/geometry.hpp"

namespace essclose {

namespace {

bool lex_less(const RatVec& a, const RatVec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

bool vec_eq(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

void check_unit_cube(const RatVec& x) {
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < Rat(0) || Rat(1) < x[i])
      throw InputError("AffinePiece: image leaves [0,1]^k");
}

}  // namespace

AffinePiece::AffinePiece(RatVec anchor_, RatMat dirs_, std::vector<Interval> box_, Tag tag_)
    : k(static_cast<int>(anchor_.size())),
      p(static_cast<int>(dirs_.cols())),
      anchor(std::move(anchor_)),
      dirs(std::move(dirs_)),
      box(std::move(box_)),
      tag(tag_) {
  if (k < 1 || k > kMaxDim) throw InputError("AffinePiece: ambient dimension must be 1..3");
  if (p < 0 || p > 2 || p > k) throw InputError("AffinePiece: intrinsic dimension must be 0..2 and <= k");
  if (p > 0 && dirs.rows() != k) throw InputError("AffinePiece: direction rows != k");
  if (static_cast<int>(box.size()) != p) throw InputError("AffinePiece: parameter box size != p");
  if (p > 0 && rat_rank(dirs) != p) throw InputError("AffinePiece: directions linearly dependent");
  for (const auto& c : corners()) check_unit_cube(c);
}

AffinePiece AffinePiece::point(RatVec x, Tag tag) {
  return AffinePiece(std::move(x), RatMat(), {}, tag);
}

AffinePiece AffinePiece::segment(const RatVec& a, const RatVec& b, Tag tag) {
  RatMat d(a.size(), 1);
  d.col(0) = b - a;
  return AffinePiece(a, std::move(d), {unit_interval()}, tag);
}

AffinePiece AffinePiece::patch(const RatVec& a, const RatVec& u, const RatVec& v, Tag tag) {
  RatMat d(a.size(), 2);
  d.col(0) = u;
  d.col(1) = v;
  return AffinePiece(a, std::move(d), {unit_interval(), unit_interval()}, tag);
}

AffinePiece AffinePiece::axis_box(const std::vector<Interval>& ranges, Tag tag) {
  int k = static_cast<int>(ranges.size());
  RatVec a(k);
  for (int i = 0; i < k; ++i) a[i] = ranges[static_cast<size_t>(i)].lo;
  if (k == 1) {
    RatVec b(1);
    b[0] = ranges[0].hi;
    return segment(a, b, tag);
  }
  if (k != 2) throw InputError("axis_box: p = 2 pieces need k = 2");
  RatVec u(2), v(2);
  u << ranges[0].length(), Rat(0);
  v << Rat(0), ranges[1].length();
  return patch(a, u, v, tag);
}

RatVec AffinePiece::at(const RatVec& t) const {
  RatVec x = anchor;
  for (int i = 0; i < p; ++i) x += dirs.col(i) * t[i];
  return x;
}

std::vector<RatVec> AffinePiece::corners() const {
  std::vector<RatVec> out;
  int n = 1 << p;
  for (int mask = 0; mask < n; ++mask) {
    RatVec t(p);
    for (int i = 0; i < p; ++i)
      t[i] = (mask >> i & 1) ? box[static_cast<size_t>(i)].hi : box[static_cast<size_t>(i)].lo;
    out.push_back(at(t));
  }
  return out;
}

TaggedPieceSet::TaggedPieceSet(int k_, std::vector<AffinePiece> pieces_)
    : k(k_), pieces(std::move(pieces_)) {
  for (const auto& pc : pieces)
    if (pc.k != k) throw InputError("TaggedPieceSet: mixed ambient dimensions");
}

DyadicGridSet::DyadicGridSet(int k_, int L_) : k(k_), L(L_) {
  if (k < 0 || k > kMaxDim) throw InputError("DyadicGridSet: k must be 0..3");
  if (L < 0) throw InputError("DyadicGridSet: negative level");
  if (k * L > 30) throw InputError("DyadicGridSet: index space exceeds 2^30 cells");
}

DyadicGridSet::DyadicGridSet(int k_, int L_, std::set<Cell> cells_) : DyadicGridSet(k_, L_) {
  cells = std::move(cells_);
  for (const auto& c : cells) check_cell(c);
}

void DyadicGridSet::check_cell(const Cell& c) const {
  int m = cells_per_axis();
  for (int j = 0; j < k; ++j)
    if (c[static_cast<size_t>(j)] < 0 || c[static_cast<size_t>(j)] >= m)
      throw InputError("DyadicGridSet: cell index out of range");
  for (int j = k; j < kMaxDim; ++j)
    if (c[static_cast<size_t>(j)] != 0) throw InputError("DyadicGridSet: trailing indices must be 0");
}

void DyadicGridSet::insert_checked(const Cell& c) {
  check_cell(c);
  cells.insert(c);
}

DyadicGridSet project_grid(const DyadicGridSet& A, const AxisSet& W) {
  if (W.k != A.k) throw InputError("project_grid: axis set ambient dimension mismatch");
  DyadicGridSet out(W.d(), W.d() == 0 ? 0 : A.L);
  if (W.d() == 0) {
    if (!A.empty()) out.cells.insert(Cell{0, 0, 0});
    return out;
  }
  out.L = A.L;
  for (const auto& c : A.cells) {
    Cell q{0, 0, 0};
    for (int j = 0; j < W.d(); ++j)
      q[static_cast<size_t>(j)] = c[static_cast<size_t>(W.axes[static_cast<size_t>(j)])];
    out.cells.insert(q);
  }
  return out;
}

Rat grid_measure(const DyadicGridSet& A) {
  return Rat(static_cast<long long>(A.cells.size())) * Rat::pow2(-A.k * A.L);
}

DyadicGridSet dilate(const DyadicGridSet& A, int r_cells) {
  if (r_cells < 0) throw InputError("dilate: negative radius");
  if (r_cells == 0 || A.k == 0) return A;
  DyadicGridSet out(A.k, A.L);
  int m = A.cells_per_axis();
  for (const auto& c : A.cells) {
    Cell lo{0, 0, 0}, hi{0, 0, 0};
    for (int j = 0; j < A.k; ++j) {
      lo[static_cast<size_t>(j)] = std::max(0, c[static_cast<size_t>(j)] - r_cells);
      hi[static_cast<size_t>(j)] = std::min(m - 1, c[static_cast<size_t>(j)] + r_cells);
    }
    Cell q = lo;
    while (true) {
      out.cells.insert(q);
      int j = 0;
      for (; j < A.k; ++j) {
        if (q[static_cast<size_t>(j)] < hi[static_cast<size_t>(j)]) {
          ++q[static_cast<size_t>(j)];
          break;
        }
        q[static_cast<size_t>(j)] = lo[static_cast<size_t>(j)];
      }
      if (j == A.k) break;
    }
  }
  return out;
}

namespace {

// Hierarchical descent: a level-l cell whose closed box misses the piece
// prunes all its descendants, so the work is proportional to the number of
// occupied cells rather than to 2^(kL).
void rasterize_descend(const AffinePiece& piece, int k, int L, int level, const Cell& c,
                       DyadicGridSet& out) {
  Rat side = Rat::pow2(-level);
  std::vector<Interval> box;
  box.reserve(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    Rat a = Rat(c[static_cast<size_t>(j)]) * side;
    box.emplace_back(a, a + side);
  }
  if (!piece_meets_box(piece, box)) return;
  if (level == L) {
    out.cells.insert(c);
    return;
  }
  for (int child = 0; child < (1 << k); ++child) {
    Cell q{0, 0, 0};
    for (int j = 0; j < k; ++j)
      q[static_cast<size_t>(j)] = 2 * c[static_cast<size_t>(j)] + (child >> j & 1);
    rasterize_descend(piece, k, L, level + 1, q, out);
  }
}

}  // namespace

DyadicGridSet rasterize(const TaggedPieceSet& S, int L) {
  DyadicGridSet out(S.k, L);
  for (const auto& piece : S.pieces)
    rasterize_descend(piece, S.k, L, 0, Cell{0, 0, 0}, out);
  return out;
}

DyadicGridSet rasterize(const SampleCloud& cloud, int L) {
  DyadicGridSet out(cloud.k, L);
  int m = out.cells_per_axis();
  for (const auto& pt : cloud.points) {
    Cell c{0, 0, 0};
    for (int j = 0; j < cloud.k; ++j) {
      // Lower-index cell on boundaries: cell j covers (j/m, (j+1)/m], cell 0
      // additionally covers 0.
      double scaled = pt[j] * m;
      auto idx = static_cast<long long>(std::ceil(scaled)) - 1;
      c[static_cast<size_t>(j)] = static_cast<int32_t>(std::clamp<long long>(idx, 0, m - 1));
    }
    out.cells.insert(c);
  }
  return out;
}

TaggedPieceSet coordinate_permute(const TaggedPieceSet& S, const Permutation& sigma) {
  if (sigma.k() != S.k) throw InputError("coordinate_permute: permutation size != k");
  TaggedPieceSet out(S.k);
  for (const auto& piece : S.pieces) {
    RatVec a(S.k);
    RatMat d(S.k, piece.p);
    for (int j = 0; j < S.k; ++j) {
      a[j] = piece.anchor[sigma.map[static_cast<size_t>(j)]];
      for (int i = 0; i < piece.p; ++i) d(j, i) = piece.dirs(sigma.map[static_cast<size_t>(j)], i);
    }
    out.pieces.emplace_back(std::move(a), std::move(d), piece.box, piece.tag);
  }
  return out;
}

DyadicGridSet coordinate_permute(const DyadicGridSet& A, const Permutation& sigma) {
  if (sigma.k() != A.k) throw InputError("coordinate_permute: permutation size != k");
  DyadicGridSet out(A.k, A.L);
  for (const auto& c : A.cells) {
    Cell q{0, 0, 0};
    for (int j = 0; j < A.k; ++j) q[static_cast<size_t>(j)] = c[static_cast<size_t>(sigma.map[static_cast<size_t>(j)])];
    out.cells.insert(q);
  }
  return out;
}

namespace {

// --- canonical form machinery ---

// Normal form of one piece: degenerate parameter ranges collapsed, p = 1
// pieces re-anchored to their lex-min endpoint over [0,1], p = 2 pieces
// re-anchored to the lex-min corner with lex-sorted edge vectors.
AffinePiece normalize_piece(const AffinePiece& piece) {
  if (piece.p == 0) return piece;
  if (piece.p == 1) {
    std::vector<RatVec> e = piece.corners();
    if (vec_eq(e[0], e[1])) return AffinePiece::point(e[0], piece.tag);
    if (lex_less(e[1], e[0])) std::swap(e[0], e[1]);
    return AffinePiece::segment(e[0], e[1], piece.tag);
  }
  // p == 2: corners order 00,10,01,11
  std::vector<RatVec> c = piece.corners();
  bool deg_u = vec_eq(c[0], c[1]);
  bool deg_v = vec_eq(c[0], c[2]);
  if (deg_u && deg_v) return AffinePiece::point(c[0], piece.tag);
  if (deg_u) return normalize_piece(AffinePiece::segment(c[0], c[2], piece.tag));
  if (deg_v) return normalize_piece(AffinePiece::segment(c[0], c[1], piece.tag));
  size_t mi = 0;
  for (size_t i = 1; i < 4; ++i)
    if (lex_less(c[i], c[mi])) mi = i;
  // Neighbors of each corner in the 2-bit Gray structure: flip one bit.
  size_t n1 = mi ^ 1u, n2 = mi ^ 2u;
  RatVec u = c[n1] - c[mi];
  RatVec v = c[n2] - c[mi];
  if (lex_less(v, u)) std::swap(u, v);
  return AffinePiece::patch(c[mi], u, v, piece.tag);
}

// Canonical description of the line through a normalized segment: primitive
// direction w with first nonzero coordinate 1, base point with that
// coordinate 0. A point x on the line has parameter x[j0].
struct LineKey {
  RatVec w;
  RatVec base;
  int j0;
};

LineKey line_key(const AffinePiece& seg) {
  RatVec dir = seg.dirs.col(0);
  int j0 = 0;
  while (dir[j0].is_zero()) ++j0;
  RatVec w = dir / dir[j0];
  RatVec base = seg.anchor - w * seg.anchor[j0];
  return LineKey{std::move(w), std::move(base), j0};
}

// Two normalized patches are merge-compatible when they share edge vectors
// and lie in the same affine plane; their anchors then differ by a rational
// combination a*u + b*v.
std::optional<std::pair<Rat, Rat>> patch_offset(const AffinePiece& from, const AffinePiece& to) {
  // Solve to.anchor - from.anchor = a*u + b*v exactly; overdetermined rows
  // must agree.
  RatVec rhs = to.anchor - from.anchor;
  const RatMat& D = from.dirs;
  // Find two rows with nonzero 2x2 minor.
  for (int r1 = 0; r1 < from.k; ++r1) {
    for (int r2 = r1 + 1; r2 < from.k; ++r2) {
      Rat det = D(r1, 0) * D(r2, 1) - D(r1, 1) * D(r2, 0);
      if (det.is_zero()) continue;
      Rat a = (rhs[r1] * D(r2, 1) - rhs[r2] * D(r1, 1)) / det;
      Rat b = (D(r1, 0) * rhs[r2] - D(r2, 0) * rhs[r1]) / det;
      for (int j = 0; j < from.k; ++j)
        if (!(D(j, 0) * a + D(j, 1) * b == rhs[j])) return std::nullopt;
      return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

bool same_dirs(const AffinePiece& x, const AffinePiece& y) {
  return vec_eq(x.dirs.col(0), y.dirs.col(0)) && vec_eq(x.dirs.col(1), y.dirs.col(1));
}

// Merge normalized same-tag collinear segments with overlapping or abutting
// parameter ranges.
std::vector<AffinePiece> merge_segments(std::vector<AffinePiece> segs) {
  using GroupKey = std::vector<std::pair<std::string, std::string>>;  // printable exact key
  std::map<std::pair<int, GroupKey>, std::vector<size_t>> groups;
  for (size_t i = 0; i < segs.size(); ++i) {
    LineKey lk = line_key(segs[i]);
    GroupKey gk;
    for (int j = 0; j < segs[i].k; ++j) gk.emplace_back(lk.w[j].str(), lk.base[j].str());
    groups[{segs[i].tag == Tag::Null ? 1 : 0, gk}].push_back(i);
  }
  std::vector<AffinePiece> out;
  for (auto& [key, idxs] : groups) {
    const AffinePiece& rep = segs[idxs.front()];
    LineKey lk = line_key(rep);
    std::vector<Interval> params;
    for (size_t i : idxs) {
      auto es = segs[i].corners();
      Rat t0 = es[0][lk.j0], t1 = es[1][lk.j0];
      params.emplace_back(min(t0, t1), max(t0, t1));
    }
    for (const auto& iv : merge_intervals(std::move(params))) {
      RatVec a = lk.base + lk.w * iv.lo;
      RatVec b = lk.base + lk.w * iv.hi;
      out.push_back(AffinePiece::segment(a, b, rep.tag));
    }
  }
  return out;
}

// Merge normalized same-tag coplanar patches sharing edge vectors whose
// union is again a parallelogram (rectangles in a common frame, equal in one
// parameter and overlapping or abutting in the other). Patches tiling a
// rectangle with mismatched frames stay separate; containment absorption
// below still removes redundancy.
std::vector<AffinePiece> merge_patches(std::vector<AffinePiece> patches) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < patches.size() && !changed; ++i) {
      for (size_t j = i + 1; j < patches.size() && !changed; ++j) {
        AffinePiece&P = patches[i], &Q = patches[j];
        if (P.tag != Q.tag || !same_dirs(P, Q)) continue;
        auto off = patch_offset(P, Q);
        if (!off) continue;
        auto [a, b] = *off;
        // Q occupies [a, a+1] x [b, b+1] in P's frame.
        auto try_merge = [&](const Rat& lo0, const Rat& hi0, const Rat& lo1, const Rat& hi1,
                             bool along_u) -> bool {
          // Merge only when the union of [0,1] and [lo,hi] along one axis is
          // an interval while the other axis matches exactly.
          if (!(lo1 == Rat(0) && hi1 == Rat(1))) return false;
          Rat ulo = min(Rat(0), lo0), uhi = max(Rat(1), hi0);
          if (max(Rat(0), lo0) > min(Rat(1), hi0)) return false;  // gap
          RatVec du = P.dirs.col(0), dv = P.dirs.col(1);
          RatVec base = P.anchor + (along_u ? du * ulo : dv * ulo);
          RatVec eu = along_u ? du * (uhi - ulo) : du;
          RatVec ev = along_u ? dv : dv * (uhi - ulo);
          AffinePiece merged = AffinePiece::patch(base, eu, ev, P.tag);
          patches[i] = normalize_piece(merged);
          patches.erase(patches.begin() + static_cast<std::ptrdiff_t>(j));
          return true;
        };
        if (try_merge(a, a + Rat(1), b, b + Rat(1), true) ||
            try_merge(b, b + Rat(1), a, a + Rat(1), false))
          changed = true;
      }
    }
  }
  return patches;
}

// Point-set containment of piece `inner` in piece `outer`, tag-aware: a Full
// piece contains any subset of its geometry; a Null piece (rational-coordinate
// points) contains only Null subsets of its geometry.
bool piece_absorbs(const AffinePiece& outer, const AffinePiece& inner) {
  if (outer.tag == Tag::Null && inner.tag == Tag::Full && inner.p >= 0) {
    // A dense null set contains no nondegenerate closed piece; a single
    // rational point is fine.
    if (inner.p >= 1) return false;
  }
  return piece_geometry_contains(outer, inner);
}

int piece_order_rank(const AffinePiece& piece) { return piece.p; }

}  // namespace

bool piece_less(const AffinePiece& a, const AffinePiece& b) {
  if (piece_order_rank(a) != piece_order_rank(b)) return piece_order_rank(a) < piece_order_rank(b);
  if (lex_less(a.anchor, b.anchor)) return true;
  if (lex_less(b.anchor, a.anchor)) return false;
  for (int i = 0; i < a.p; ++i) {
    if (lex_less(a.dirs.col(i), b.dirs.col(i))) return true;
    if (lex_less(b.dirs.col(i), a.dirs.col(i))) return false;
  }
  return a.tag == Tag::Full && b.tag == Tag::Null;
}

TaggedPieceSet canonicalize(const TaggedPieceSet& S) {
  std::vector<AffinePiece> points, segs, patches;
  for (const auto& piece : S.pieces) {
    AffinePiece n = normalize_piece(piece);
    (n.p == 0 ? points : n.p == 1 ? segs : patches).push_back(std::move(n));
  }
  segs = merge_segments(std::move(segs));
  patches = merge_patches(std::move(patches));

  // Null segments dense inside collinear Full segments contribute nothing
  // beyond the Full part; trim the covered parameter ranges away.
  {
    std::vector<AffinePiece> trimmed;
    for (const auto& ns : segs) {
      if (ns.tag != Tag::Null) {
        trimmed.push_back(ns);
        continue;
      }
      std::vector<Interval> covered;
      for (const auto& fs : segs) {
        if (fs.tag != Tag::Full) continue;
        if (auto iv = segment_cover_interval(ns, fs); iv && !iv->degenerate())
          covered.push_back(*iv);
      }
      covered = merge_intervals(std::move(covered));
      Rat cur(0);
      std::vector<Interval> keep;
      for (const auto& cv : covered) {
        if (cur < cv.lo) keep.emplace_back(cur, cv.lo);
        cur = max(cur, cv.hi);
        if (cur >= Rat(1)) break;
      }
      if (cur < Rat(1)) keep.emplace_back(cur, Rat(1));
      auto es = ns.corners();
      for (const auto& ivk : keep) {
        if (ivk.degenerate()) continue;
        RatVec a = es[0] + (es[1] - es[0]) * ivk.lo;
        RatVec b = es[0] + (es[1] - es[0]) * ivk.hi;
        trimmed.push_back(normalize_piece(AffinePiece::segment(a, b, Tag::Null)));
      }
    }
    segs = merge_segments(std::move(trimmed));
  }

  std::vector<AffinePiece> all;
  all.insert(all.end(), patches.begin(), patches.end());
  all.insert(all.end(), segs.begin(), segs.end());
  all.insert(all.end(), points.begin(), points.end());

  // Containment absorption to a fixpoint (merging already ran, so one pass
  // over ordered pairs suffices: kept pieces never shrink).
  std::vector<char> dead(all.size(), 0);
  for (size_t i = 0; i < all.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = 0; j < all.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (piece_absorbs(all[j], all[i])) {
        // Tie-break identical pieces deterministically.
        if (piece_absorbs(all[i], all[j]) && i < j) continue;
        dead[i] = 1;
        break;
      }
    }
  }
  TaggedPieceSet out(S.k);
  for (size_t i = 0; i < all.size(); ++i)
    if (!dead[i]) out.pieces.push_back(all[i]);
  std::sort(out.pieces.begin(), out.pieces.end(), piece_less);
  return out;
}

TaggedPieceSet set_union(const TaggedPieceSet& A, const TaggedPieceSet& B) {
  if (A.k != B.k) throw InputError("set_union: ambient dimension mismatch");
  TaggedPieceSet out(A.k);
  out.pieces = A.pieces;
  out.pieces.insert(out.pieces.end(), B.pieces.begin(), B.pieces.end());
  return out;
}

namespace {

// Is canonical piece `piece` covered by the canonical pieces of T?
// Single-piece containment first; segments fall back to exact coverage by
// parameter-interval union. Patches additionally accept a rectilinear cover
// by same-frame patches (the only multi-piece patch cover the canonical
// class produces).
bool piece_covered(const AffinePiece& piece, const std::vector<AffinePiece>& T) {
  for (const auto& t : T)
    if (piece_absorbs(t, piece)) return true;
  if (piece.p == 1) {
    std::vector<Interval> cov;
    for (const auto& t : T) {
      if (piece.tag == Tag::Full && t.tag == Tag::Null) continue;
      if (auto iv = segment_cover_interval(piece, t); iv && !iv->degenerate())
        cov.push_back(*iv);
    }
    cov = merge_intervals(std::move(cov));
    Rat cur(0);
    for (const auto& c : cov) {
      if (c.lo > cur) return false;
      cur = max(cur, c.hi);
      if (cur >= Rat(1)) return true;
    }
    return cur >= Rat(1);
  }
  if (piece.p == 2) {
    // Same-frame rectangles covering [0,1]^2: coordinate-compressed sweep.
    std::vector<std::array<Rat, 4>> rects;
    for (const auto& t : T) {
      if (t.p != 2 || !same_dirs(piece, t)) continue;
      if (piece.tag == Tag::Full && t.tag == Tag::Null) continue;
      auto off = patch_offset(piece, t);
      if (!off) continue;
      rects.push_back({off->first, off->first + Rat(1), off->second, off->second + Rat(1)});
    }
    if (rects.empty()) return false;
    std::vector<Rat> xs{Rat(0), Rat(1)}, ys{Rat(0), Rat(1)};
    for (const auto& r : rects) {
      for (int i = 0; i < 2; ++i)
        if (Rat(0) < r[static_cast<size_t>(i)] && r[static_cast<size_t>(i)] < Rat(1)) xs.push_back(r[static_cast<size_t>(i)]);
      for (int i = 2; i < 4; ++i)
        if (Rat(0) < r[static_cast<size_t>(i)] && r[static_cast<size_t>(i)] < Rat(1)) ys.push_back(r[static_cast<size_t>(i)]);
    }
    auto uniq = [](std::vector<Rat>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(xs);
    uniq(ys);
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      for (size_t j = 0; j + 1 < ys.size(); ++j) {
        Rat cx = (xs[i] + xs[i + 1]) / Rat(2), cy = (ys[j] + ys[j + 1]) / Rat(2);
        bool hit = false;
        for (const auto& r : rects)
          if (r[0] <= cx && cx <= r[1] && r[2] <= cy && cy <= r[3]) {
            hit = true;
            break;
          }
        if (!hit) return false;
      }
    }
    return true;
  }
  return false;  // points are handled by single-piece containment above
}

}  // namespace

bool set_subset(const TaggedPieceSet& A, const TaggedPieceSet& B) {
  if (A.k != B.k) throw InputError("set_subset: ambient dimension mismatch");
  TaggedPieceSet ca = canonicalize(A), cb = canonicalize(B);
  for (const auto& piece : ca.pieces)
    if (!piece_covered(piece, cb.pieces)) return false;
  return true;
}

bool set_equal(const TaggedPieceSet& A, const TaggedPieceSet& B) {
  if (A.k != B.k) return false;
  TaggedPieceSet ca = canonicalize(A), cb = canonicalize(B);
  if (ca.pieces.size() != cb.pieces.size()) return false;
  for (size_t i = 0; i < ca.pieces.size(); ++i) {
    const AffinePiece&x = ca.pieces[i], &y = cb.pieces[i];
    if (x.p != y.p || x.tag != y.tag) return false;
    if (lex_less(x.anchor, y.anchor) || lex_less(y.anchor, x.anchor)) return false;
    for (int c = 0; c < x.p; ++c)
      if (lex_less(x.dirs.col(c), y.dirs.col(c)) || lex_less(y.dirs.col(c), x.dirs.col(c)))
        return false;
    for (int c = 0; c < x.p; ++c)
      if (!(x.box[static_cast<size_t>(c)] == y.box[static_cast<size_t>(c)])) return false;
  }
  return true;
}

}  // namespace essclose
