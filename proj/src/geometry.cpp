#include "essclose/geometry.hpp"

#include <cmath>

namespace essclose {

namespace {

using Vec2 = Eigen::Matrix<Rat, 2, 1>;

bool vec_eq(const RatVec& a, const RatVec& b) {
  for (int i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

// Solves D s = rhs for D (k x 2) of rank 2; returns nullopt when the system
// is inconsistent (rhs outside the column span).
std::optional<Vec2> solve_span2(const RatMat& D, const RatVec& rhs) {
  int k = static_cast<int>(D.rows());
  for (int r1 = 0; r1 < k; ++r1) {
    for (int r2 = r1 + 1; r2 < k; ++r2) {
      Rat det = D(r1, 0) * D(r2, 1) - D(r1, 1) * D(r2, 0);
      if (det.is_zero()) continue;
      Vec2 s;
      s[0] = (rhs[r1] * D(r2, 1) - rhs[r2] * D(r1, 1)) / det;
      s[1] = (D(r1, 0) * rhs[r2] - D(r2, 0) * rhs[r1]) / det;
      for (int j = 0; j < k; ++j)
        if (!(D(j, 0) * s[0] + D(j, 1) * s[1] == rhs[j])) return std::nullopt;
      return s;
    }
  }
  return std::nullopt;
}

// Parameter of x on the line anchor + t*dir, assuming x lies on the line.
Rat line_param(const RatVec& anchor, const RatVec& dir, const RatVec& x) {
  int j = 0;
  while (dir[j].is_zero()) ++j;
  return (x[j] - anchor[j]) / dir[j];
}

bool on_line(const RatVec& anchor, const RatVec& dir, const RatVec& x) {
  RatVec w = x - anchor;
  int j = 0;
  while (j < dir.size() && dir[j].is_zero()) {
    if (!w[j].is_zero()) return false;
    ++j;
  }
  if (j == dir.size()) return vec_eq(x, anchor);
  Rat t = w[j] / dir[j];
  for (int i = 0; i < dir.size(); ++i)
    if (!(dir[i] * t == w[i])) return false;
  return true;
}

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s(0);
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat seg_dist2(const RatVec& x, const RatVec& e0, const RatVec& e1) {
  RatVec v = e1 - e0;
  Rat vv = dot(v, v);
  if (vv.is_zero()) {
    RatVec w = x - e0;
    return dot(w, w);
  }
  Rat t = dot(x - e0, v) / vv;
  t = max(Rat(0), min(Rat(1), t));
  RatVec w = x - e0 - v * t;
  return dot(w, w);
}

}  // namespace

int rat_rank(RatMat m) {
  int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!m(r, c).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(m(rank, j), m(pivot, j));
    for (int r = rank + 1; r < rows; ++r) {
      if (m(r, c).is_zero()) continue;
      Rat f = m(r, c) / m(rank, c);
      for (int j = c; j < cols; ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

bool point_in_piece(const RatVec& x, const AffinePiece& piece) {
  if (piece.p == 0) return vec_eq(x, piece.anchor);
  if (piece.p == 1) {
    if (!on_line(piece.anchor, piece.dirs.col(0), x)) return false;
    Rat t = line_param(piece.anchor, piece.dirs.col(0), x);
    return piece.box[0].contains(t);
  }
  auto s = solve_span2(piece.dirs, x - piece.anchor);
  return s && piece.box[0].contains((*s)[0]) && piece.box[1].contains((*s)[1]);
}

bool piece_geometry_contains(const AffinePiece& outer, const AffinePiece& inner) {
  for (const auto& c : inner.corners())
    if (!point_in_piece(c, outer)) return false;
  return true;
}

std::optional<Interval> segment_cover_interval(const AffinePiece& seg, const AffinePiece& other) {
  const RatVec v1 = seg.dirs.col(0);
  const Interval& tbox = seg.box[0];

  if (other.p == 0) {
    if (!on_line(seg.anchor, v1, other.anchor)) return std::nullopt;
    Rat t = line_param(seg.anchor, v1, other.anchor);
    if (!tbox.contains(t)) return std::nullopt;
    return Interval(t, t);
  }

  if (other.p == 1) {
    const RatVec v2 = other.dirs.col(0);
    RatMat pair(seg.k, 2);
    pair.col(0) = v1;
    pair.col(1) = v2;
    if (rat_rank(pair) == 1) {
      // Collinear directions; overlap is a parameter interval.
      if (!on_line(seg.anchor, v1, other.anchor)) return std::nullopt;
      auto ends = other.corners();
      Rat t0 = line_param(seg.anchor, v1, ends[0]);
      Rat t1 = line_param(seg.anchor, v1, ends[1]);
      return Interval(min(t0, t1), max(t0, t1)).intersect(tbox);
    }
    RatMat D(seg.k, 2);
    D.col(0) = v1;
    D.col(1) = -v2;
    auto sol = solve_span2(D, other.anchor - seg.anchor);
    if (!sol) return std::nullopt;
    if (!tbox.contains((*sol)[0]) || !other.box[0].contains((*sol)[1])) return std::nullopt;
    return Interval((*sol)[0], (*sol)[0]);
  }

  // other.p == 2
  const RatMat& D = other.dirs;
  RatMat span_dir(seg.k, 3), span_off(seg.k, 3);
  span_dir.col(0) = D.col(0);
  span_dir.col(1) = D.col(1);
  span_dir.col(2) = v1;
  span_off.col(0) = D.col(0);
  span_off.col(1) = D.col(1);
  span_off.col(2) = seg.anchor - other.anchor;
  bool dir_in_plane = rat_rank(span_dir) == 2;
  bool off_in_plane = rat_rank(span_off) == 2;
  if (dir_in_plane && off_in_plane) {
    auto s0 = solve_span2(D, seg.anchor - other.anchor);
    auto sd = solve_span2(D, v1);
    if (!s0 || !sd) return std::nullopt;
    Interval t = tbox;
    for (int i = 0; i < 2; ++i) {
      const Interval& bi = other.box[static_cast<size_t>(i)];
      if ((*sd)[i].is_zero()) {
        if (!bi.contains((*s0)[i])) return std::nullopt;
        continue;
      }
      Rat ta = (bi.lo - (*s0)[i]) / (*sd)[i];
      Rat tb = (bi.hi - (*s0)[i]) / (*sd)[i];
      auto clipped = t.intersect(Interval(min(ta, tb), max(ta, tb)));
      if (!clipped) return std::nullopt;
      t = *clipped;
    }
    return t;
  }
  if (dir_in_plane) return std::nullopt;  // parallel to the plane, off it
  // Transversal: at most one crossing. Solve t*v1 - s1*u - s2*v = a_o - a_s.
  RatMat M(seg.k, 3);
  M.col(0) = v1;
  M.col(1) = -D.col(0);
  M.col(2) = -D.col(1);
  if (seg.k != 3) return std::nullopt;  // k = 2 patches always contain the plane
  Rat det = M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
            M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
            M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
  if (det.is_zero()) return std::nullopt;
  RatVec rhs = other.anchor - seg.anchor;
  auto cramer = [&](int col) {
    RatMat Mc = M;
    Mc.col(col) = rhs;
    return (Mc(0, 0) * (Mc(1, 1) * Mc(2, 2) - Mc(1, 2) * Mc(2, 1)) -
            Mc(0, 1) * (Mc(1, 0) * Mc(2, 2) - Mc(1, 2) * Mc(2, 0)) +
            Mc(0, 2) * (Mc(1, 0) * Mc(2, 1) - Mc(1, 1) * Mc(2, 0))) /
           det;
  };
  Rat t = cramer(0), s1 = cramer(1), s2 = cramer(2);
  if (!tbox.contains(t) || !other.box[0].contains(s1) || !other.box[1].contains(s2))
    return std::nullopt;
  return Interval(t, t);
}

RatPolygon clip_halfplane(const RatPolygon& poly, const Rat& a, const Rat& b, const Rat& c) {
  if (poly.empty()) return {};
  RatPolygon out;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& cur = poly[i];
    const auto& nxt = poly[(i + 1) % n];
    Rat fc = a * cur[0] + b * cur[1] - c;
    Rat fn = a * nxt[0] + b * nxt[1] - c;
    if (fc <= Rat(0)) {
      if (out.empty() || !(out.back()[0] == cur[0] && out.back()[1] == cur[1])) out.push_back(cur);
    }
    if ((fc < Rat(0) && fn > Rat(0)) || (fc > Rat(0) && fn < Rat(0))) {
      Rat t = fc / (fc - fn);
      Eigen::Matrix<Rat, 2, 1> pt;
      pt[0] = cur[0] + (nxt[0] - cur[0]) * t;
      pt[1] = cur[1] + (nxt[1] - cur[1]) * t;
      if (out.empty() || !(out.back()[0] == pt[0] && out.back()[1] == pt[1])) out.push_back(pt);
    }
  }
  // drop closing duplicate
  if (out.size() > 1 && out.front()[0] == out.back()[0] && out.front()[1] == out.back()[1])
    out.pop_back();
  return out;
}

Rat polygon_area2(const RatPolygon& poly) {
  Rat s(0);
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return s;
}

bool piece_meets_box(const AffinePiece& piece, const std::vector<Interval>& box) {
  if (piece.p == 0) {
    for (int j = 0; j < piece.k; ++j)
      if (!box[static_cast<size_t>(j)].contains(piece.anchor[j])) return false;
    return true;
  }
  if (piece.p == 1) {
    Interval t = piece.box[0];
    const RatVec v = piece.dirs.col(0);
    for (int j = 0; j < piece.k; ++j) {
      const Interval& bj = box[static_cast<size_t>(j)];
      if (v[j].is_zero()) {
        if (!bj.contains(piece.anchor[j])) return false;
        continue;
      }
      Rat ta = (bj.lo - piece.anchor[j]) / v[j];
      Rat tb = (bj.hi - piece.anchor[j]) / v[j];
      auto clipped = t.intersect(Interval(min(ta, tb), max(ta, tb)));
      if (!clipped) return false;
      t = *clipped;
    }
    return true;
  }
  // p == 2: clip the parameter box by the 2k coordinate slabs.
  RatPolygon poly;
  auto push = [&](Rat x, Rat y) {
    Eigen::Matrix<Rat, 2, 1> q;
    q[0] = std::move(x);
    q[1] = std::move(y);
    poly.push_back(std::move(q));
  };
  push(piece.box[0].lo, piece.box[1].lo);
  push(piece.box[0].hi, piece.box[1].lo);
  push(piece.box[0].hi, piece.box[1].hi);
  push(piece.box[0].lo, piece.box[1].hi);
  for (int j = 0; j < piece.k && !poly.empty(); ++j) {
    const Interval& bj = box[static_cast<size_t>(j)];
    Rat u = piece.dirs(j, 0), v = piece.dirs(j, 1), a0 = piece.anchor[j];
    poly = clip_halfplane(poly, u, v, bj.hi - a0);
    poly = clip_halfplane(poly, -u, -v, a0 - bj.lo);
  }
  return !poly.empty();
}

Rat distance2_point_piece(const RatVec& x, const AffinePiece& piece) {
  if (piece.p == 0) {
    RatVec w = x - piece.anchor;
    return dot(w, w);
  }
  auto ends = piece.corners();
  if (piece.p == 1) return seg_dist2(x, ends[0], ends[1]);
  // p == 2: unconstrained minimizer via the Gram system, else edge minimum.
  const RatVec u = piece.dirs.col(0), v = piece.dirs.col(1);
  RatVec w = x - piece.anchor;
  Rat uu = dot(u, u), uv = dot(u, v), vv = dot(v, v);
  Rat det = uu * vv - uv * uv;  // nonzero: columns independent
  Rat wu = dot(w, u), wv = dot(w, v);
  Rat t1 = (wu * vv - wv * uv) / det;
  Rat t2 = (uu * wv - uv * wu) / det;
  if (piece.box[0].contains(t1) && piece.box[1].contains(t2)) {
    RatVec r = w - u * t1 - v * t2;
    return dot(r, r);
  }
  // corners order: 00, 10, 01, 11
  Rat best = seg_dist2(x, ends[0], ends[1]);
  best = min(best, seg_dist2(x, ends[0], ends[2]));
  best = min(best, seg_dist2(x, ends[1], ends[3]));
  best = min(best, seg_dist2(x, ends[2], ends[3]));
  return best;
}

Rat rational_sqrt_lower(const Rat& q) {
  if (q.sign() <= 0) throw std::domain_error("rational_sqrt_lower: q must be positive");
  double d = std::sqrt(q.to_double());
  // Coarse dyadic approximation keeps denominators small.
  Rat r(0);
  if (d > 1e-8) {
    int e = 0;
    double m = std::frexp(d, &e);
    auto n = static_cast<long long>(std::floor(m * (1 << 30)));
    if (n > 0 && e >= -25 && e <= 30) r = Rat(n) * Rat::pow2(e - 30);
  }
  if (r.sign() <= 0) r = min(q, Rat(1, 2));
  while (r * r > q) r = r / Rat(2);
  return r;
}

bool piece_projects_positively(const AffinePiece& piece, const AxisSet& W) {
  int d = W.d();
  if (d == 0) return true;
  if (piece.tag != Tag::Full || piece.p < d) return false;
  RatMat sub(d, piece.p);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < piece.p; ++c) sub(r, c) = piece.dirs(W.axes[static_cast<size_t>(r)], c);
  return rat_rank(std::move(sub)) == d;
}

namespace {

RatPolygon oriented(RatPolygon poly) {
  if (polygon_area2(poly) < Rat(0)) std::reverse(poly.begin(), poly.end());
  return poly;
}

RatPolygon polygon_intersect(const RatPolygon& a, const RatPolygon& b) {
  RatPolygon cur = a;
  size_t n = b.size();
  for (size_t i = 0; i < n && !cur.empty(); ++i) {
    const auto& p0 = b[i];
    const auto& p1 = b[(i + 1) % n];
    // CCW interior of edge p0->p1: cross(p1-p0, x-p0) >= 0, rewritten as
    // (y1-y0) x + (x0-x1) y <= x0 y1 - x1 y0.
    Rat A = p1[1] - p0[1];
    Rat B = p0[0] - p1[0];
    Rat C = p0[0] * p1[1] - p1[0] * p0[1];
    cur = clip_halfplane(cur, A, B, C);
  }
  return cur;
}

Rat inclusion_exclusion(const std::vector<RatPolygon>& polys, size_t start, const RatPolygon& cur,
                        int depth) {
  Rat sum(0);
  for (size_t i = start; i < polys.size(); ++i) {
    RatPolygon next = polygon_intersect(cur, polys[i]);
    if (next.size() < 3) continue;
    Rat area = abs(polygon_area2(next)) / Rat(2);
    if (area.is_zero()) continue;
    sum += (depth % 2 == 0 ? area : -area);
    sum += inclusion_exclusion(polys, i + 1, next, depth + 1);
  }
  return sum;
}

}  // namespace

Rat projection_measure(const TaggedPieceSet& S, const AxisSet& W) {
  if (W.k != S.k) throw InputError("projection_measure: axis set dimension mismatch");
  int d = W.d();
  TaggedPieceSet C = canonicalize(S);
  if (d == 0) return C.empty() ? Rat(0) : Rat(1);
  if (d == 1) {
    int axis = W.axes[0];
    std::vector<Interval> ivs;
    for (const auto& piece : C.pieces) {
      if (!piece_projects_positively(piece, W)) continue;
      Rat lo = piece.anchor[axis], hi = lo;
      for (const auto& c : piece.corners()) {
        lo = min(lo, c[axis]);
        hi = max(hi, c[axis]);
      }
      ivs.emplace_back(lo, hi);
    }
    Rat total(0);
    for (const auto& iv : merge_intervals(std::move(ivs))) total += iv.length();
    return total;
  }
  if (d == 2) {
    std::vector<RatPolygon> polys;
    for (const auto& piece : C.pieces) {
      if (!piece_projects_positively(piece, W)) continue;
      auto cs = piece.corners();  // 00, 10, 11, 01 -> reorder to boundary walk
      RatPolygon poly;
      for (size_t idx : {size_t{0}, size_t{1}, size_t{3}, size_t{2}}) {
        Eigen::Matrix<Rat, 2, 1> q;
        q[0] = cs[idx][W.axes[0]];
        q[1] = cs[idx][W.axes[1]];
        poly.push_back(std::move(q));
      }
      polys.push_back(oriented(std::move(poly)));
    }
    if (polys.size() > 20)
      throw InputError("projection_measure: too many overlapping pieces for exact union area");
    Rat sum(0);
    for (size_t i = 0; i < polys.size(); ++i) {
      Rat area = abs(polygon_area2(polys[i])) / Rat(2);
      sum += area;
      sum += inclusion_exclusion(polys, i + 1, polys[i], 1);
    }
    return sum;
  }
  // d == 3: intrinsic dimension is capped at 2, so every projection is null.
  return Rat(0);
}

}  // namespace essclose
