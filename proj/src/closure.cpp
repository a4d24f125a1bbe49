#include "essclose/closure.hpp"

#include <sstream>

#include "essclose/geometry.hpp"
#include "essclose/parallel.hpp"

namespace essclose {

namespace {

// A relatively open part of a Full piece projects with positive d-measure
// onto W exactly when the projection restricted to the piece's affine hull
// has rank d; together with the union rule this reduces the closure to a
// per-piece rank test.
bool piece_survives(const AffinePiece& piece, int d, int k) {
  if (piece.tag != Tag::Full || piece.p < d) return false;
  for (const auto& W : axis_subsets(k, d))
    if (piece_projects_positively(piece, W)) return true;
  return false;
}

AffinePiece as_full(const AffinePiece& piece) {
  if (piece.tag == Tag::Full) return piece;
  AffinePiece q = piece;
  q.tag = Tag::Full;
  return q;
}

}  // namespace

TaggedPieceSet essential_closure_exact(const TaggedPieceSet& S, int d) {
  if (d < 0 || d > S.k) throw InputError("essential_closure_exact: d must satisfy 0 <= d <= k");
  TaggedPieceSet C = canonicalize(S);
  TaggedPieceSet out(S.k);
  for (const auto& piece : C.pieces) {
    if (d == 0) {
      // Topological closure: a Null piece is dense in its closed piece.
      out.pieces.push_back(as_full(piece));
    } else if (piece_survives(piece, d, S.k)) {
      out.pieces.push_back(piece);
    }
  }
  return canonicalize(out);
}

bool is_essentially_closed(const TaggedPieceSet& S, int d) {
  return set_equal(essential_closure_exact(S, d), S);
}

DyadicGridSet grid_interior(const DyadicGridSet& A) {
  DyadicGridSet out(A.k, A.L);
  for (const auto& c : A.cells) {
    DyadicGridSet one(A.k, A.L);
    one.cells.insert(c);
    bool interior = true;
    for (const auto& q : dilate(one, 1).cells)
      if (!A.contains(q)) {
        interior = false;
        break;
      }
    if (interior) out.cells.insert(c);
  }
  return out;
}

namespace {

int64_t cell_flat_index(const Cell& c, int k, int L) {
  int64_t idx = 0;
  for (int j = 0; j < k; ++j) idx = (idx << L) | c[static_cast<size_t>(j)];
  return idx;
}

// Occupancy with O(1) lookup; dense bitmap when the index space is small.
struct Occupancy {
  int k, L;
  std::vector<uint8_t> dense;
  const std::set<Cell>* sparse = nullptr;

  Occupancy(const DyadicGridSet& A) : k(A.k), L(A.L) {
    int64_t space = int64_t(1) << (k * L);
    if (space <= (int64_t(1) << 24)) {
      dense.assign(static_cast<size_t>(space), 0);
      for (const auto& c : A.cells) dense[static_cast<size_t>(cell_flat_index(c, k, L))] = 1;
    } else {
      sparse = &A.cells;
    }
  }

  bool test(const Cell& c) const {
    if (!dense.empty()) return dense[static_cast<size_t>(cell_flat_index(c, k, L))] != 0;
    return sparse->count(c) != 0;
  }
};

// Does cell c pass the window test at radius r?
bool cell_passes(const Cell& c, int r, const DyadicGridSet& A, const Occupancy& occ, int d,
                 const Rat& tau, const std::vector<AxisSet>& subsets) {
  int k = A.k, L = A.L, m = A.cells_per_axis();
  Cell lo{0, 0, 0}, hi{0, 0, 0};
  for (int j = 0; j < k; ++j) {
    lo[static_cast<size_t>(j)] = std::max(0, c[static_cast<size_t>(j)] - r);
    hi[static_cast<size_t>(j)] = std::min(m - 1, c[static_cast<size_t>(j)] + r);
  }
  std::vector<Cell> hits;
  Cell q = lo;
  while (true) {
    if (occ.test(q)) {
      if (d == 0) return true;
      hits.push_back(q);
    }
    int j = 0;
    for (; j < k; ++j) {
      if (q[static_cast<size_t>(j)] < hi[static_cast<size_t>(j)]) {
        ++q[static_cast<size_t>(j)];
        break;
      }
      q[static_cast<size_t>(j)] = lo[static_cast<size_t>(j)];
    }
    if (j == k) break;
  }
  if (d == 0 || hits.empty()) return false;
  // Distinct W-projections, as flat codes.
  std::vector<int64_t> codes;
  codes.reserve(hits.size());
  for (const auto& W : subsets) {
    codes.clear();
    for (const auto& h : hits) {
      int64_t code = 0;
      for (int j = 0; j < d; ++j) code = (code << L) | h[static_cast<size_t>(W.axes[static_cast<size_t>(j)])];
      codes.push_back(code);
    }
    std::sort(codes.begin(), codes.end());
    auto distinct = static_cast<long long>(
        std::unique(codes.begin(), codes.end()) - codes.begin());
    if (Rat(distinct) * Rat::pow2(-d * L) >= tau) return true;
  }
  return false;
}

}  // namespace

DyadicGridSet essential_closure_grid(const DyadicGridSet& A, const GridClosureParams& params) {
  if (params.d < 0 || params.d > A.k)
    throw InputError("essential_closure_grid: d must satisfy 0 <= d <= k");
  if (params.rho_schedule.empty()) throw InputError("essential_closure_grid: empty rho schedule");
  for (size_t i = 0; i < params.rho_schedule.size(); ++i) {
    const Rat& rho = params.rho_schedule[i];
    if (rho <= Rat(0) || rho > Rat(1))
      throw InputError("essential_closure_grid: rho must lie in (0,1]");
    if (i > 0 && !(rho < params.rho_schedule[i - 1]))
      throw InputError("essential_closure_grid: rho schedule must be decreasing");
  }
  if (params.tau <= Rat(0)) throw InputError("essential_closure_grid: tau must be positive");
  if (A.empty() || A.k == 0) return A;

  Occupancy occ(A);
  auto subsets = params.d > 0 ? axis_subsets(A.k, params.d) : std::vector<AxisSet>{};

  DyadicGridSet result(A.k, A.L);
  bool first = true;
  for (const Rat& rho : params.rho_schedule) {
    int r = static_cast<int>((rho * Rat::pow2(A.L)).ceil());
    std::vector<Cell> candidates;
    {
      DyadicGridSet cand = dilate(A, r);
      candidates.assign(cand.cells.begin(), cand.cells.end());
    }
    std::vector<uint8_t> keep(candidates.size(), 0);
    parallel_for(candidates.size(), [&](size_t i) {
      keep[i] = cell_passes(candidates[i], r, A, occ, params.d, params.tau, subsets) ? 1 : 0;
    });
    DyadicGridSet round(A.k, A.L);
    for (size_t i = 0; i < candidates.size(); ++i)
      if (keep[i]) round.cells.insert(candidates[i]);
    if (first) {
      result = std::move(round);
      first = false;
    } else {
      std::set<Cell> inter;
      for (const auto& c : result.cells)
        if (round.contains(c)) inter.insert(c);
      result.cells = std::move(inter);
    }
  }
  return result;
}

EmptyClosureReport empty_closure_criterion(const TaggedPieceSet& S, int d) {
  if (d < 0 || d > S.k) throw InputError("empty_closure_criterion: d out of range");
  EmptyClosureReport rep;
  rep.closure_empty = essential_closure_exact(S, d).empty();
  rep.all_projections_null = true;
  for (const auto& W : axis_subsets(S.k, d)) {
    ProjectionReport pr;
    pr.W = W;
    pr.measure = projection_measure(S, W);
    pr.positive = pr.measure > Rat(0);
    if (pr.positive) rep.all_projections_null = false;
    rep.per_subspace.push_back(std::move(pr));
  }
  rep.agree = (rep.closure_empty == rep.all_projections_null);
  return rep;
}

namespace {

std::string describe(const TaggedPieceSet& S) {
  std::ostringstream os;
  os << "k=" << S.k << " pieces=[";
  for (size_t i = 0; i < S.pieces.size(); ++i) {
    const auto& piece = S.pieces[i];
    if (i) os << "; ";
    os << "p" << piece.p << (piece.tag == Tag::Full ? " full " : " null ") << "(";
    for (int j = 0; j < piece.k; ++j) os << (j ? "," : "") << piece.anchor[j];
    os << ")";
    for (int c = 0; c < piece.p; ++c) {
      os << "+t" << c << "*(";
      for (int j = 0; j < piece.k; ++j) os << (j ? "," : "") << piece.dirs(j, c);
      os << ")[" << piece.box[static_cast<size_t>(c)].lo << "," << piece.box[static_cast<size_t>(c)].hi << "]";
    }
  }
  os << "]";
  return os.str();
}

bool is_axis_box(const AffinePiece& piece) {
  if (piece.p != piece.k) return false;
  // Each direction along a distinct coordinate axis.
  int used = 0;
  for (int c = 0; c < piece.p; ++c) {
    int nz = -1;
    for (int j = 0; j < piece.k; ++j) {
      if (piece.dirs(j, c).is_zero()) continue;
      if (nz >= 0) return false;
      nz = j;
    }
    if (nz < 0 || (used >> nz & 1)) return false;
    used |= 1 << nz;
  }
  return true;
}

}  // namespace

PropertyReport check_properties(const TaggedPieceSet& A, const TaggedPieceSet& B, int d, int e) {
  if (!(0 <= e && e < d && d <= A.k))
    throw InputError("check_properties: require 0 <= e < d <= k");
  if (A.k != B.k) throw InputError("check_properties: ambient dimension mismatch");
  if (!set_subset(A, B)) throw InputError("check_properties: A must be a subset of B");

  PropertyReport rep;
  TaggedPieceSet cd = essential_closure_exact(A, d);
  TaggedPieceSet ce = essential_closure_exact(A, e);
  TaggedPieceSet c0 = essential_closure_exact(A, 0);

  // 1: the closure is a closed set; in this representation that means no
  // Null pieces remain (a dense null piece is not closed).
  for (const auto& piece : cd.pieces) {
    if (piece.tag == Tag::Null) {
      rep.items[0] = {false, "null piece in closure of " + describe(A)};
      break;
    }
  }

  if (!set_subset(cd, ce))
    rep.items[1] = {false, "closure_" + std::to_string(d) + " not within closure_" +
                               std::to_string(e) + " of " + describe(A)};
  else if (!set_subset(ce, c0))
    rep.items[1] = {false, "closure_" + std::to_string(e) + " escapes the topological closure of " +
                               describe(A)};

  // 3: interior from full-dimensional axis-box Full pieces only; everything
  // else in this class has empty interior.
  TaggedPieceSet interior_closure(A.k);
  for (const auto& piece : canonicalize(A).pieces)
    if (piece.tag == Tag::Full && is_axis_box(piece)) interior_closure.pieces.push_back(piece);
  if (!interior_closure.empty() && !set_subset(interior_closure, cd))
    rep.items[2] = {false, "closure(int A) escapes closure_" + std::to_string(d) + " of " +
                               describe(A)};

  if (!set_subset(cd, essential_closure_exact(B, d)))
    rep.items[3] = {false, "monotonicity fails for A=" + describe(A) + " B=" + describe(B)};

  TaggedPieceSet u_closure = essential_closure_exact(set_union(A, B), d);
  TaggedPieceSet closure_u = set_union(cd, essential_closure_exact(B, d));
  if (!set_equal(u_closure, closure_u))
    rep.items[4] = {false, "union rule fails for A=" + describe(A) + " B=" + describe(B)};

  EmptyClosureReport ecr = empty_closure_criterion(A, d);
  if (!ecr.agree)
    rep.items[5] = {false, "emptiness routes disagree on " + describe(A)};

  if (!set_equal(essential_closure_exact(cd, d), cd))
    rep.items[6] = {false, "closure_" + std::to_string(d) + " not idempotent on " + describe(A)};

  return rep;
}

}  // namespace essclose
