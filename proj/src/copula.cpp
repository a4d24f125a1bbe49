#include "essclose/copula.hpp"

#include <algorithm>
#include <sstream>

#include "essclose/geometry.hpp"
#include "essclose/rng.hpp"

namespace essclose {

namespace {

Rat box_volume(const std::vector<Interval>& box) {
  Rat v(1);
  for (const auto& iv : box) v *= iv.length();
  return v;
}

std::optional<std::vector<Interval>> box_intersect(const std::vector<Interval>& a,
                                                   const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (size_t i = 0; i < a.size(); ++i) {
    auto iv = a[i].intersect(b[i]);
    if (!iv) return std::nullopt;
    out.push_back(*iv);
  }
  return out;
}

}  // namespace

RatVec PiecewiseMap::value_full(const RatVec& x) const {
  for (const auto& piece : pieces) {
    if (piece.tag != Tag::Full) continue;
    bool inside = true;
    for (int j = 0; j < n; ++j) {
      const Interval& iv = piece.box[static_cast<size_t>(j)];
      bool upper_edge = x[j] == iv.hi && iv.hi == Rat(1);
      if (!(iv.lo <= x[j] && (x[j] < iv.hi || upper_edge))) {
        inside = false;
        break;
      }
    }
    if (inside) return piece.coef * x + piece.offset;
  }
  throw InputError("PiecewiseMap: point not covered by any Full piece");
}

bool PiecewiseMap::has_null_pieces() const {
  for (const auto& piece : pieces)
    if (piece.tag == Tag::Null) return true;
  return false;
}

void validate_piecewise_map(const PiecewiseMap& F) {
  if (F.n < 1 || F.n > 2) throw InputError("PiecewiseMap: domain dimension must be 1 or 2");
  if (F.m < 1) throw InputError("PiecewiseMap: codomain dimension must be >= 1");
  Rat covered(0);
  std::vector<const MapPiece*> full;
  for (const auto& piece : F.pieces) {
    if (static_cast<int>(piece.box.size()) != F.n)
      throw InputError("PiecewiseMap: piece box dimension mismatch");
    if (piece.coef.rows() != F.m || piece.coef.cols() != F.n || piece.offset.size() != F.m)
      throw InputError("PiecewiseMap: coefficient shape mismatch");
    for (const auto& iv : piece.box)
      if (iv.lo < Rat(0) || iv.hi > Rat(1))
        throw InputError("PiecewiseMap: domain piece leaves [0,1]^n");
    // Range check at box corners (affine => extremes at corners).
    for (int mask = 0; mask < (1 << F.n); ++mask) {
      RatVec corner(F.n);
      for (int j = 0; j < F.n; ++j)
        corner[j] = (mask >> j & 1) ? piece.box[static_cast<size_t>(j)].hi
                                    : piece.box[static_cast<size_t>(j)].lo;
      RatVec y = piece.coef * corner + piece.offset;
      for (int i = 0; i < F.m; ++i)
        if (y[i] < Rat(0) || y[i] > Rat(1))
          throw InputError("PiecewiseMap: image leaves [0,1]^m");
    }
    if (piece.tag == Tag::Full) {
      covered += box_volume(piece.box);
      full.push_back(&piece);
    }
  }
  if (!(covered == Rat(1)))
    throw InputError("PiecewiseMap: Full pieces must cover [0,1]^n up to a null set");
  for (size_t i = 0; i < full.size(); ++i)
    for (size_t j = i + 1; j < full.size(); ++j)
      if (auto inter = box_intersect(full[i]->box, full[j]->box);
          inter && box_volume(*inter) > Rat(0))
        throw InputError("PiecewiseMap: Full pieces overlap with positive volume");
}

// --- CopulaSpec ---

CopulaSpec CopulaSpec::product(int k) {
  if (k < 2) throw InputError("product copula: k >= 2 required");
  return CopulaSpec(ProductCopula{k});
}

CopulaSpec CopulaSpec::min_copula(int k) {
  if (k < 2) throw InputError("min copula: k >= 2 required");
  return CopulaSpec(MinCopula{k});
}

CopulaSpec CopulaSpec::w2() { return CopulaSpec(WLowerCopula{}); }

CopulaSpec CopulaSpec::shuffle(ShuffleOfMin s) {
  validate_shuffle(s);
  return CopulaSpec(std::move(s));
}

CopulaSpec CopulaSpec::bipartite(int n, PiecewiseMap map) {
  if (n != 1 && n != 2) throw InputError("bipartite copula: n must be 1 or 2");
  if (map.n != n) throw InputError("bipartite copula: map domain dimension != n");
  validate_piecewise_map(map);
  // Coordinate maps must push lambda_n to the uniform law; checked at L = 10
  // rather than trusted.
  for (int j = 0; j < map.m; ++j) {
    auto rep = validate_measure_preserving(coordinate_map(map, j), 10);
    if (!rep.preserving) {
      std::ostringstream os;
      os << "bipartite copula: coordinate map " << (j + 1)
         << " is not measure-preserving (bin " << rep.worst_bin << " deviates by "
         << rep.max_deviation << ")";
      throw InputError(os.str());
    }
  }
  return CopulaSpec(BipartiteCopula{n, std::move(map)});
}

CopulaSpec CopulaSpec::raw(int k, std::function<double(const std::vector<double>&)> cdf,
                           std::string name) {
  if (k < 2) throw InputError("raw copula: k >= 2 required");
  return CopulaSpec(RawCopula{k, std::move(cdf), std::move(name)});
}

int CopulaSpec::dim() const {
  if (auto* p = get_if<ProductCopula>()) return p->k;
  if (auto* p = get_if<MinCopula>()) return p->k;
  if (get_if<WLowerCopula>()) return 2;
  if (get_if<ShuffleOfMin>()) return 2;
  if (auto* p = get_if<BipartiteCopula>()) return p->n + p->map.m;
  return get_if<RawCopula>()->k;
}

bool CopulaSpec::exact() const { return get_if<RawCopula>() == nullptr; }

void validate_shuffle(const ShuffleOfMin& S) {
  if (S.pieces.empty()) throw InputError("shuffle: no pieces");
  std::vector<Interval> srcs, dsts;
  for (const auto& piece : S.pieces) {
    if (piece.orientation != 1 && piece.orientation != -1)
      throw InputError("shuffle: orientation must be +1 or -1");
    if (!(piece.src.length() == piece.dst.length()))
      throw InputError("shuffle: source and target lengths differ");
    if (piece.src.degenerate()) throw InputError("shuffle: degenerate piece");
    srcs.push_back(piece.src);
    dsts.push_back(piece.dst);
  }
  auto check_partition = [](std::vector<Interval> v, const char* what) {
    std::sort(v.begin(), v.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Rat cur(0);
    for (const auto& iv : v) {
      if (!(iv.lo == cur)) throw InputError(std::string("shuffle: ") + what +
                                            " do not partition [0,1]");
      cur = iv.hi;
    }
    if (!(cur == Rat(1)))
      throw InputError(std::string("shuffle: ") + what + " do not partition [0,1]");
  };
  check_partition(srcs, "sources");
  check_partition(dsts, "targets");
}

// --- CDF evaluation ---

namespace {

Rat bipartite_cdf(const BipartiteCopula& B, const RatVec& u) {
  const PiecewiseMap& F = B.map;
  int n = B.n, m = F.m;
  Rat total(0);
  for (const auto& piece : F.pieces) {
    if (piece.tag != Tag::Full) continue;  // Null pieces carry no mass
    if (n == 1) {
      Interval t(piece.box[0].lo, piece.box[0].hi);
      Rat lo = t.lo, hi = min(t.hi, u[0]);
      for (int i = 0; i < m && lo <= hi; ++i) {
        Rat a = piece.coef(i, 0), b = piece.offset[i], c = u[1 + i];
        if (a.is_zero()) {
          if (b > c) hi = lo - Rat(1);
          continue;
        }
        Rat bound = (c - b) / a;
        if (a > Rat(0))
          hi = min(hi, bound);
        else
          lo = max(lo, bound);
      }
      if (hi > lo) total += hi - lo;
      continue;
    }
    // n == 2: clip the domain rectangle by the slabs x_j <= u_j and the m
    // half-planes a.x <= u_{n+i} - b, then take the polygon area.
    Rat x0 = piece.box[0].lo, x1 = min(piece.box[0].hi, u[0]);
    Rat y0 = piece.box[1].lo, y1 = min(piece.box[1].hi, u[1]);
    if (x1 <= x0 || y1 <= y0) continue;
    RatPolygon poly;
    auto push = [&](const Rat& x, const Rat& y) {
      Eigen::Matrix<Rat, 2, 1> q;
      q[0] = x;
      q[1] = y;
      poly.push_back(q);
    };
    push(x0, y0);
    push(x1, y0);
    push(x1, y1);
    push(x0, y1);
    for (int i = 0; i < m && !poly.empty(); ++i)
      poly = clip_halfplane(poly, piece.coef(i, 0), piece.coef(i, 1), u[2 + i] - piece.offset[i]);
    if (poly.size() >= 3) total += abs(polygon_area2(poly)) / Rat(2);
  }
  return total;
}

}  // namespace

Rat copula_cdf_exact(const CopulaSpec& C, const RatVec& u) {
  if (u.size() != C.dim()) throw InputError("copula cdf: point dimension mismatch");
  for (int i = 0; i < u.size(); ++i)
    if (u[i] < Rat(0) || u[i] > Rat(1)) throw InputError("copula cdf: point outside [0,1]^k");
  if (auto* p = C.get_if<ProductCopula>()) {
    Rat v(1);
    for (int i = 0; i < p->k; ++i) v *= u[i];
    return v;
  }
  if (C.get_if<MinCopula>()) {
    Rat v = u[0];
    for (int i = 1; i < u.size(); ++i) v = min(v, u[i]);
    return v;
  }
  if (C.get_if<WLowerCopula>()) return max(u[0] + u[1] - Rat(1), Rat(0));
  if (auto* s = C.get_if<ShuffleOfMin>()) return shuffle_cdf(*s, u[0], u[1]);
  if (auto* b = C.get_if<BipartiteCopula>()) return bipartite_cdf(*b, u);
  throw InputError("copula cdf: raw copulas have no exact evaluator");
}

double copula_cdf(const CopulaSpec& C, const std::vector<double>& u) {
  if (auto* r = C.get_if<RawCopula>()) {
    if (static_cast<int>(u.size()) != r->k) throw InputError("copula cdf: point dimension mismatch");
    return r->cdf(u);
  }
  RatVec ru(static_cast<int>(u.size()));
  for (size_t i = 0; i < u.size(); ++i) ru[static_cast<int>(i)] = Rat::from_double(u[i]);
  return copula_cdf_exact(C, ru).to_double();
}

namespace {

void validate_box(const std::vector<Interval>& box, int k) {
  if (static_cast<int>(box.size()) != k) throw InputError("c_volume: box dimension mismatch");
  for (const auto& iv : box)
    if (iv.lo < Rat(0) || iv.hi > Rat(1)) throw InputError("c_volume: box outside [0,1]^k");
}

}  // namespace

Rat c_volume_exact(const CopulaSpec& C, const std::vector<Interval>& box) {
  int k = C.dim();
  validate_box(box, k);
  Rat sum(0);
  for (int mask = 0; mask < (1 << k); ++mask) {
    RatVec z(k);
    int lows = 0;
    for (int i = 0; i < k; ++i) {
      bool low = (mask >> i & 1) == 0;
      lows += low ? 1 : 0;
      z[i] = low ? box[static_cast<size_t>(i)].lo : box[static_cast<size_t>(i)].hi;
    }
    Rat c = copula_cdf_exact(C, z);
    sum += (lows % 2 == 0) ? c : -c;
  }
  return sum;
}

double c_volume(const CopulaSpec& C, const std::vector<Interval>& box) {
  if (C.exact()) return c_volume_exact(C, box).to_double();
  int k = C.dim();
  validate_box(box, k);
  double sum = 0;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<double> z(static_cast<size_t>(k));
    int lows = 0;
    for (int i = 0; i < k; ++i) {
      bool low = (mask >> i & 1) == 0;
      lows += low ? 1 : 0;
      z[static_cast<size_t>(i)] =
          (low ? box[static_cast<size_t>(i)].lo : box[static_cast<size_t>(i)].hi).to_double();
    }
    double c = copula_cdf(C, z);
    sum += (lows % 2 == 0) ? c : -c;
  }
  return sum;
}

Rat shuffle_cdf(const ShuffleOfMin& S, const Rat& u, const Rat& v) {
  // Mass of [0,u] x [0,v]: each leg contributes the length of
  // {x in src, x <= u, T(x) <= v}.
  Rat total(0);
  for (const auto& piece : S.pieces) {
    Rat lo = piece.src.lo;
    Rat hi = min(piece.src.hi, u);
    if (piece.orientation > 0) {
      // T(x) = dst.lo + (x - src.lo) <= v  <=>  x <= src.lo + (v - dst.lo)
      hi = min(hi, piece.src.lo + (v - piece.dst.lo));
    } else {
      // T(x) = dst.hi - (x - src.lo) <= v  <=>  x >= src.lo + (dst.hi - v)
      lo = max(lo, piece.src.lo + (piece.dst.hi - v));
    }
    if (hi > lo) total += hi - lo;
  }
  return total;
}

// --- axiom checking ---

namespace {

std::string point_str(const std::vector<double>& u) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
  os << ")";
  return os.str();
}

double eval_cdf(const CopulaSpec& C, const std::vector<double>& u) { return copula_cdf(C, u); }

// Random rationals on the 1/1024 grid keep the exact path cheap while giving
// dyadic doubles for the raw path.
double grid_u01(uint64_t seed, uint64_t ctr) {
  return static_cast<double>(counter_below(seed, ctr, 1025)) / 1024.0;
}

}  // namespace

AxiomReport check_copula_axioms(const CopulaSpec& C, int probes, uint64_t seed) {
  if (probes < 1) throw InputError("check_copula_axioms: probes >= 1 required");
  int k = C.dim();
  AxiomReport rep;
  rep.tolerance = C.exact() ? 1e-12 : 1e-9;

  // Probe points: lattice {0, 1/4, 1/2, 3/4, 1}^k plus seeded randoms.
  std::vector<std::vector<double>> pts;
  {
    std::vector<size_t> idx(static_cast<size_t>(k), 0);
    while (true) {
      std::vector<double> u(static_cast<size_t>(k));
      for (int i = 0; i < k; ++i) u[static_cast<size_t>(i)] = 0.25 * static_cast<double>(idx[static_cast<size_t>(i)]);
      pts.push_back(std::move(u));
      int i = 0;
      for (; i < k; ++i) {
        if (++idx[static_cast<size_t>(i)] <= 4) break;
        idx[static_cast<size_t>(i)] = 0;
      }
      if (i == k) break;
    }
    uint64_t ctr = 0;
    for (int s = 0; s < probes; ++s) {
      std::vector<double> u(static_cast<size_t>(k));
      for (int i = 0; i < k; ++i) u[static_cast<size_t>(i)] = grid_u01(seed, ctr++);
      pts.push_back(std::move(u));
    }
  }

  for (const auto& u : pts) {
    for (int i = 0; i < k; ++i) {
      std::vector<double> z = u;
      z[static_cast<size_t>(i)] = 0.0;
      double c = eval_cdf(C, z);
      if (std::abs(c) > rep.tolerance && rep.grounded_pass) {
        rep.grounded_pass = false;
        rep.grounded_witness = point_str(z) + " -> " + std::to_string(c);
      }
      std::vector<double> mz(static_cast<size_t>(k), 1.0);
      mz[static_cast<size_t>(i)] = u[static_cast<size_t>(i)];
      double dev = std::abs(eval_cdf(C, mz) - u[static_cast<size_t>(i)]);
      if (dev > rep.margin_max_dev) {
        rep.margin_max_dev = dev;
        rep.margin_witness = point_str(mz);
      }
    }
  }
  rep.margins_pass = rep.margin_max_dev <= rep.tolerance;

  // Boxes: corners from {0, 1/2, 1} per axis, then seeded randoms.
  std::vector<std::vector<Interval>> boxes;
  {
    const std::array<std::pair<Rat, Rat>, 3> det_pairs{
        {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1)}, {Rat(0), Rat(1)}}};
    std::vector<size_t> idx(static_cast<size_t>(k), 0);
    while (true) {
      std::vector<Interval> b;
      for (int i = 0; i < k; ++i)
        b.emplace_back(det_pairs[idx[static_cast<size_t>(i)]].first,
                       det_pairs[idx[static_cast<size_t>(i)]].second);
      boxes.push_back(std::move(b));
      int i = 0;
      for (; i < k; ++i) {
        if (++idx[static_cast<size_t>(i)] <= 2) break;
        idx[static_cast<size_t>(i)] = 0;
      }
      if (i == k) break;
    }
    uint64_t ctr = 1u << 20;
    for (int s = 0; s < probes; ++s) {
      std::vector<Interval> b;
      for (int i = 0; i < k; ++i) {
        Rat a(static_cast<long long>(counter_below(seed, ctr++, 1025)), 1024);
        Rat c(static_cast<long long>(counter_below(seed, ctr++, 1025)), 1024);
        b.emplace_back(min(a, c), max(a, c));
      }
      boxes.push_back(std::move(b));
    }
  }

  bool first = true;
  for (const auto& b : boxes) {
    double v = c_volume(C, b);
    if (first || v < rep.min_volume) {
      rep.min_volume = v;
      rep.min_volume_box = b;
      first = false;
    }
  }
  rep.k_increasing_pass = rep.min_volume >= -rep.tolerance;
  return rep;
}

// --- sampling ---

SampleCloud sample_copula(const CopulaSpec& C, uint64_t N, uint64_t seed) {
  if (N < 1) throw InputError("sample_copula: N >= 1 required");
  int k = C.dim();
  SampleCloud out;
  out.k = k;
  out.seed = seed;
  out.points.resize(N);

  auto set_point = [&](uint64_t i, auto&& fill) {
    DVec pt(k);
    fill(pt);
    out.points[i] = std::move(pt);
  };

  if (C.get_if<ProductCopula>()) {
    for (uint64_t i = 0; i < N; ++i)
      set_point(i, [&](DVec& pt) {
        for (int j = 0; j < k; ++j) pt[j] = counter_u01(seed, i * static_cast<uint64_t>(k) + static_cast<uint64_t>(j));
      });
    return out;
  }
  if (C.get_if<MinCopula>()) {
    for (uint64_t i = 0; i < N; ++i)
      set_point(i, [&](DVec& pt) {
        double u = counter_u01(seed, i);
        for (int j = 0; j < k; ++j) pt[j] = u;
      });
    return out;
  }
  if (C.get_if<WLowerCopula>()) {
    for (uint64_t i = 0; i < N; ++i)
      set_point(i, [&](DVec& pt) {
        double u = counter_u01(seed, i);
        pt[0] = u;
        pt[1] = 1.0 - u;
      });
    return out;
  }
  if (auto* s = C.get_if<ShuffleOfMin>()) {
    // Half-open source lookup: breakpoints are hit with probability zero and
    // deterministically resolve to the right-hand piece.
    std::vector<ShufflePiece> legs = s->pieces;
    std::sort(legs.begin(), legs.end(),
              [](const ShufflePiece& a, const ShufflePiece& b) { return a.src.lo < b.src.lo; });
    for (uint64_t i = 0; i < N; ++i)
      set_point(i, [&](DVec& pt) {
        double u = counter_u01(seed, i);
        const ShufflePiece* leg = &legs.back();
        for (const auto& cand : legs)
          if (u >= cand.src.lo.to_double() && u < cand.src.hi.to_double()) {
            leg = &cand;
            break;
          }
        double t;
        if (leg->orientation > 0)
          t = leg->dst.lo.to_double() + (u - leg->src.lo.to_double());
        else
          t = leg->dst.hi.to_double() - (u - leg->src.lo.to_double());
        pt[0] = u;
        pt[1] = t;
      });
    return out;
  }
  if (auto* b = C.get_if<BipartiteCopula>()) {
    int n = b->n, m = b->map.m;
    // Full pieces only: Null pieces carry measure zero and are never drawn.
    struct FlatPiece {
      std::array<double, 4> lo_hi_x{};  // x ranges
      std::array<double, 2> lo_y{};
      Eigen::MatrixXd coef;
      Eigen::VectorXd off;
    };
    std::vector<FlatPiece> flat;
    for (const auto& piece : b->map.pieces) {
      if (piece.tag != Tag::Full) continue;
      FlatPiece f;
      f.coef.resize(m, n);
      f.off.resize(m);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) f.coef(r, c) = piece.coef(r, c).to_double();
        f.off[r] = piece.offset[r].to_double();
      }
      for (int j = 0; j < n; ++j) {
        f.lo_hi_x[static_cast<size_t>(2 * j)] = piece.box[static_cast<size_t>(j)].lo.to_double();
        f.lo_hi_x[static_cast<size_t>(2 * j + 1)] = piece.box[static_cast<size_t>(j)].hi.to_double();
      }
      flat.push_back(std::move(f));
    }
    for (uint64_t i = 0; i < N; ++i)
      set_point(i, [&](DVec& pt) {
        Eigen::VectorXd x(n);
        for (int j = 0; j < n; ++j)
          x[j] = counter_u01(seed, i * static_cast<uint64_t>(n) + static_cast<uint64_t>(j));
        const FlatPiece* hit = nullptr;
        for (const auto& f : flat) {
          bool inside = true;
          for (int j = 0; j < n; ++j)
            if (!(x[j] >= f.lo_hi_x[static_cast<size_t>(2 * j)] && x[j] < f.lo_hi_x[static_cast<size_t>(2 * j + 1)])) {
              inside = false;
              break;
            }
          if (inside) {
            hit = &f;
            break;
          }
        }
        if (!hit) hit = &flat.back();  // measure-zero upper boundary
        auto y = (hit->coef * x + hit->off).eval();
        for (int j = 0; j < n; ++j) pt[j] = x[j];
        for (int j = 0; j < m; ++j) pt[n + j] = std::clamp(y[j], 0.0, 1.0);
      });
    return out;
  }
  throw InputError("sample_copula: raw copulas are unsupported (no generic sampler)");
}

// --- measure preservation ---

PiecewiseMap coordinate_map(const PiecewiseMap& F, int j) {
  if (j < 0 || j >= F.m) throw InputError("coordinate_map: index out of range");
  PiecewiseMap out;
  out.n = F.n;
  out.m = 1;
  for (const auto& piece : F.pieces) {
    MapPiece q;
    q.box = piece.box;
    q.tag = piece.tag;
    q.coef.resize(1, F.n);
    for (int c = 0; c < F.n; ++c) q.coef(0, c) = piece.coef(j, c);
    q.offset.resize(1);
    q.offset[0] = piece.offset[j];
    out.pieces.push_back(std::move(q));
  }
  return out;
}

MeasurePreservationReport validate_measure_preserving(const PiecewiseMap& T, int L) {
  if (T.m != 1) throw InputError("validate_measure_preserving: scalar maps only (m = 1)");
  if (L < 0 || L > 20) throw InputError("validate_measure_preserving: level out of range");
  for (const auto& piece : T.pieces) {
    if (piece.tag != Tag::Full) continue;
    bool constant = true;
    for (int c = 0; c < T.n; ++c)
      if (!piece.coef(0, c).is_zero()) constant = false;
    if (constant)
      throw InputError("validate_measure_preserving: constant pieces are not allowed");
  }

  MeasurePreservationReport rep;
  rep.preserving = true;
  rep.max_deviation = Rat(0);
  Rat bin = Rat::pow2(-L);
  for (long long j = 0; j < (1LL << L); ++j) {
    Rat c_lo = Rat(j) * bin, c_hi = Rat(j + 1) * bin;
    Rat mass(0);
    for (const auto& piece : T.pieces) {
      if (piece.tag != Tag::Full) continue;
      if (T.n == 1) {
        Rat a = piece.coef(0, 0), b = piece.offset[0];
        // preimage of [c_lo, c_hi] within the piece interval
        Rat t0 = (c_lo - b) / a, t1 = (c_hi - b) / a;
        Rat lo = max(piece.box[0].lo, min(t0, t1));
        Rat hi = min(piece.box[0].hi, max(t0, t1));
        if (hi > lo) mass += hi - lo;
      } else {
        // area of box cap {c_lo <= a.x + b <= c_hi}
        RatPolygon poly;
        auto push = [&](const Rat& x, const Rat& y) {
          Eigen::Matrix<Rat, 2, 1> q;
          q[0] = x;
          q[1] = y;
          poly.push_back(q);
        };
        push(piece.box[0].lo, piece.box[1].lo);
        push(piece.box[0].hi, piece.box[1].lo);
        push(piece.box[0].hi, piece.box[1].hi);
        push(piece.box[0].lo, piece.box[1].hi);
        Rat a0 = piece.coef(0, 0), a1 = piece.coef(0, 1), b = piece.offset[0];
        poly = clip_halfplane(poly, a0, a1, c_hi - b);
        poly = clip_halfplane(poly, -a0, -a1, b - c_lo);
        if (poly.size() >= 3) mass += abs(polygon_area2(poly)) / Rat(2);
      }
    }
    Rat dev = abs(mass - bin);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_bin = j;
    }
    if (!(mass == bin)) rep.preserving = false;
  }
  return rep;
}

MeasurePreservationReport validate_measure_preserving(const ShuffleOfMin& S, int L) {
  return validate_measure_preserving(shuffle_to_map(S), L);
}

PiecewiseMap essential_refinement(const PiecewiseMap& F) {
  PiecewiseMap out;
  out.n = F.n;
  out.m = F.m;
  for (const auto& piece : F.pieces)
    if (piece.tag == Tag::Full) out.pieces.push_back(piece);
  return out;
}

PiecewiseMap shuffle_to_map(const ShuffleOfMin& S) {
  PiecewiseMap out;
  out.n = 1;
  out.m = 1;
  std::vector<ShufflePiece> legs = S.pieces;
  std::sort(legs.begin(), legs.end(),
            [](const ShufflePiece& a, const ShufflePiece& b) { return a.src.lo < b.src.lo; });
  for (const auto& leg : legs) {
    MapPiece piece;
    piece.box = {leg.src};
    piece.tag = Tag::Full;
    piece.coef.resize(1, 1);
    piece.offset.resize(1);
    if (leg.orientation > 0) {
      piece.coef(0, 0) = Rat(1);
      piece.offset[0] = leg.dst.lo - leg.src.lo;
    } else {
      piece.coef(0, 0) = Rat(-1);
      piece.offset[0] = leg.dst.hi + leg.src.lo;
    }
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

ShuffleOfMin inverse_shuffle(const ShuffleOfMin& S) {
  ShuffleOfMin inv;
  for (const auto& piece : S.pieces)
    inv.pieces.push_back({piece.dst, piece.src, piece.orientation});
  std::sort(inv.pieces.begin(), inv.pieces.end(),
            [](const ShufflePiece& a, const ShufflePiece& b) { return a.src.lo < b.src.lo; });
  validate_shuffle(inv);
  return inv;
}

}  // namespace essclose
