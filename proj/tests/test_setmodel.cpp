#include <doctest.h>

#include "essclose/randomsets.hpp"
#include "essclose/rng.hpp"
#include "essclose/setmodel.hpp"
#include "helpers.hpp"

using namespace essclose;
using namespace essclose::testing;

namespace {

DyadicGridSet grid_of(int k, int L, std::initializer_list<Cell> cells) {
  DyadicGridSet A(k, L);
  for (const auto& c : cells) A.insert_checked(c);
  return A;
}

// Independent dilation oracle: scan the whole index space.
DyadicGridSet oracle_dilate(const DyadicGridSet& A, int r) {
  DyadicGridSet out(A.k, A.L);
  int m = A.cells_per_axis();
  std::vector<Cell> all;
  Cell q{0, 0, 0};
  while (true) {
    all.push_back(q);
    int j = 0;
    for (; j < A.k; ++j) {
      if (q[static_cast<size_t>(j)] < m - 1) {
        ++q[static_cast<size_t>(j)];
        break;
      }
      q[static_cast<size_t>(j)] = 0;
    }
    if (j == A.k) break;
  }
  for (const auto& c : all) {
    for (const auto& a : A.cells) {
      int cheb = 0;
      for (int j = 0; j < A.k; ++j)
        cheb = std::max(cheb, std::abs(c[static_cast<size_t>(j)] - a[static_cast<size_t>(j)]));
      if (cheb <= r) {
        out.cells.insert(c);
        break;
      }
    }
  }
  return out;
}

DyadicGridSet random_grid(uint64_t seed, int k, int L, int count) {
  DyadicGridSet A(k, L);
  CounterStream rng(seed);
  int m = A.cells_per_axis();
  for (int i = 0; i < count; ++i) {
    Cell c{0, 0, 0};
    for (int j = 0; j < k; ++j) c[static_cast<size_t>(j)] = static_cast<int32_t>(rng.below(static_cast<uint64_t>(m)));
    A.cells.insert(c);
  }
  return A;
}

}  // namespace

TEST_CASE("project_grid drops coordinates") {
  auto A = grid_of(2, 1, {{0, 0, 0}, {1, 1, 0}});
  auto P = project_grid(A, AxisSet(2, {0}));
  CHECK(P.k == 1);
  CHECK(P.cells == std::set<Cell>{{0, 0, 0}, {1, 0, 0}});
}

TEST_CASE("project_grid to the trivial subspace") {
  auto A = grid_of(2, 1, {{0, 0, 0}, {1, 1, 0}});
  auto P = project_grid(A, AxisSet(2, {}));
  CHECK(P.k == 0);
  CHECK(!P.empty());
  DyadicGridSet empty(2, 1);
  CHECK(project_grid(empty, AxisSet(2, {})).empty());
}

TEST_CASE("project_grid diagonal enumeration") {
  DyadicGridSet A(2, 3);
  for (int32_t i = 0; i < 8; ++i) A.insert_checked({i, i, 0});
  auto P = project_grid(A, AxisSet(2, {1}));
  // oracle: enumerate expected second coordinates
  std::set<Cell> expected;
  for (const auto& c : A.cells) expected.insert({c[1], 0, 0});
  CHECK(P.cells == expected);
  CHECK(P.cells.size() == 8);
  CHECK_THROWS_AS(project_grid(A, AxisSet(3, {2})), InputError);
}

TEST_CASE("grid_measure") {
  DyadicGridSet full(2, 2);
  for (int32_t i = 0; i < 4; ++i)
    for (int32_t j = 0; j < 4; ++j) full.insert_checked({i, j, 0});
  CHECK(grid_measure(full) == Rat(1));
  CHECK(grid_measure(grid_of(2, 3, {{1, 2, 0}})) == Rat(1, 64));
  DyadicGridSet diag(2, 3);
  for (int32_t i = 0; i < 8; ++i) diag.insert_checked({i, i, 0});
  CHECK(grid_measure(diag) == Rat(1, 8));  // 8 cells x 1/64
}

TEST_CASE("grid_measure monotone under inclusion") {
  auto B = random_grid(11, 2, 4, 40);
  DyadicGridSet A(2, 4);
  size_t i = 0;
  for (const auto& c : B.cells)
    if (i++ % 2 == 0) A.cells.insert(c);
  CHECK(grid_measure(A) <= grid_measure(B));
  CHECK(grid_measure(B) <= Rat(1));
}

TEST_CASE("dilate examples and composition") {
  auto A = grid_of(2, 3, {{3, 3, 0}});
  auto D = dilate(A, 1);
  CHECK(D.cells.size() == 9);
  CHECK(D.cells == oracle_dilate(A, 1).cells);
  CHECK(dilate(A, 0).cells == A.cells);

  auto corners = grid_of(2, 3, {{0, 0, 0}, {7, 7, 0}});
  auto DC = dilate(corners, 1);
  CHECK(DC.cells == oracle_dilate(corners, 1).cells);
  CHECK(DC.cells.size() == 8);  // two clipped 2x2 blocks

  for (uint64_t seed : {1u, 2u, 3u}) {
    auto R = random_grid(seed, 2, 4, 10);
    CHECK(dilate(R, 3).cells == dilate(dilate(R, 1), 2).cells);
    CHECK(dilate(R, 3).cells == oracle_dilate(R, 3).cells);
  }
  auto R3 = random_grid(7, 3, 3, 12);
  CHECK(dilate(R3, 2).cells == oracle_dilate(R3, 2).cells);
}

TEST_CASE("rasterize segment honors the closed-cell corner rule") {
  auto R = rasterize(diagonal2(), 1);
  // The corner cells touch the diagonal at the shared point (1/2, 1/2); the
  // corner rule makes them occupied.
  CHECK(R.cells == std::set<Cell>{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}});

  // Exact per-cell oracle at L = 2: cell (i,j) meets the diagonal iff
  // max(i,j)/4 <= (min(i,j)+1)/4.
  auto R2 = rasterize(diagonal2(), 2);
  std::set<Cell> expected;
  for (int32_t i = 0; i < 4; ++i)
    for (int32_t j = 0; j < 4; ++j)
      if (std::max(i, j) <= std::min(i, j) + 1) expected.insert({i, j, 0});
  CHECK(R2.cells == expected);
}

TEST_CASE("rasterize point piece touches all closed neighbors") {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::point(vec({frac(1, 2), frac(1, 2)})));
  auto R = rasterize(S, 1);
  CHECK(R.cells.size() == 4);
}

TEST_CASE("rasterize cloud boundary goes to the lower cell") {
  SampleCloud cloud;
  cloud.k = 2;
  DVec pt(2);
  pt << 0.1, 0.9;
  cloud.points.push_back(pt);
  auto R = rasterize(cloud, 1);
  CHECK(R.cells == std::set<Cell>{{0, 1, 0}});
  DVec edge(2);
  edge << 0.5, 0.5;
  cloud.points = {edge};
  CHECK(rasterize(cloud, 1).cells == std::set<Cell>{{0, 0, 0}});
}

TEST_CASE("rasterize refines across levels") {
  for (const auto& S : {fig1(), fig3(), m3_diagonal()}) {
    for (int L = 2; L <= 4; ++L) {
      auto coarse = rasterize(S, L);
      auto fine = rasterize(S, L + 1);
      // an occupied cell meets a closed piece, so one of its closed
      // subcells contains the meeting point
      for (const auto& c : coarse.cells) {
        bool has_child = false;
        for (const auto& f : fine.cells) {
          bool inside = true;
          for (int j = 0; j < S.k; ++j)
            if (f[static_cast<size_t>(j)] / 2 != c[static_cast<size_t>(j)]) inside = false;
          if (inside) {
            has_child = true;
            break;
          }
        }
        CHECK(has_child);
      }
      // and every fine cell lies under some coarse cell
      for (const auto& f : fine.cells) {
        Cell parent{0, 0, 0};
        for (int j = 0; j < S.k; ++j) parent[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] / 2;
        CHECK(coarse.contains(parent));
      }
    }
  }
}

TEST_CASE("coordinate permutation on pieces and grids") {
  Permutation swap({1, 0});
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({frac(1, 5), 1})));
  auto P = coordinate_permute(S, swap);
  TaggedPieceSet expected(2);
  expected.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, frac(1, 5)})));
  CHECK(set_equal(P, expected));

  CHECK(set_equal(coordinate_permute(S, Permutation::identity(2)), S));

  Permutation cyc({1, 2, 0});
  CHECK(set_equal(coordinate_permute(m3_diagonal(), cyc), m3_diagonal()));

  auto A = grid_of(2, 2, {{0, 3, 0}, {1, 2, 0}});
  auto PA = coordinate_permute(A, swap);
  CHECK(PA.cells == std::set<Cell>{{3, 0, 0}, {2, 1, 0}});
  CHECK(coordinate_permute(PA, swap.inverse()).cells == A.cells);
}

TEST_CASE("permutation round trip on random sets") {
  Permutation cyc({2, 0, 1});
  auto S = m3_diagonal();
  S.pieces.push_back(AffinePiece::point(vec({frac(1, 4), frac(1, 2), frac(3, 4)})));
  auto back = coordinate_permute(coordinate_permute(S, cyc), cyc.inverse());
  CHECK(set_equal(back, S));
}

TEST_CASE("canonicalize merges abutting collinear segments") {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({frac(1, 2), frac(1, 2)})));
  S.pieces.push_back(AffinePiece::segment(vec({frac(1, 2), frac(1, 2)}), vec({1, 1})));
  auto C = canonicalize(S);
  CHECK(C.pieces.size() == 1);
  CHECK(set_equal(C, diagonal2()));
}

TEST_CASE("canonicalize deduplicates and absorbs") {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1})));
  S.pieces.push_back(AffinePiece::segment(vec({1, 1}), vec({0, 0})));  // same set
  CHECK(canonicalize(S).pieces.size() == 1);

  TaggedPieceSet T(2);
  T.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1})));
  T.pieces.push_back(AffinePiece::point(vec({frac(1, 4), frac(1, 4)})));
  auto CT = canonicalize(T);
  CHECK(CT.pieces.size() == 1);
  CHECK(CT.pieces[0].p == 1);
}

TEST_CASE("canonicalize separates tags") {
  auto C = canonicalize(fig1());
  CHECK(C.pieces.size() == 2);
  // Null segment on the same geometry as a Full one is absorbed.
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1}), Tag::Null));
  CHECK(canonicalize(S).pieces.size() == 1);
  CHECK(canonicalize(S).pieces[0].tag == Tag::Full);
}

TEST_CASE("canonicalize trims null segments against full cover") {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({frac(1, 2), frac(1, 2)}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1}), Tag::Null));
  auto C = canonicalize(S);
  REQUIRE(C.pieces.size() == 2);
  CHECK(C.pieces[0].tag == Tag::Full);
  CHECK(C.pieces[1].tag == Tag::Null);
  // the Null remainder starts where the Full part ends
  CHECK(C.pieces[1].anchor[0] == frac(1, 2));
}

TEST_CASE("canonicalize merges aligned patches") {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::axis_box({Interval(Rat(0), frac(1, 2)), Interval(Rat(0), frac(1, 4))}));
  S.pieces.push_back(AffinePiece::axis_box({Interval(frac(1, 2), Rat(1)), Interval(Rat(0), frac(1, 4))}));
  auto C = canonicalize(S);
  CHECK(C.pieces.size() == 1);
  TaggedPieceSet expected(2);
  expected.pieces.push_back(AffinePiece::axis_box({unit_interval(), Interval(Rat(0), frac(1, 4))}));
  CHECK(set_equal(C, expected));
}

TEST_CASE("canonicalize demotes degenerate pieces") {
  RatMat d(2, 1);
  d.col(0) = vec({1, 1});
  AffinePiece degenerate(vec({0, 0}), d, {Interval(frac(1, 4), frac(1, 4))}, Tag::Full);
  TaggedPieceSet S(2);
  S.pieces.push_back(degenerate);
  auto C = canonicalize(S);
  REQUIRE(C.pieces.size() == 1);
  CHECK(C.pieces[0].p == 0);
  CHECK(C.pieces[0].anchor[0] == frac(1, 4));
}

TEST_CASE("canonical form is stable under reordering and reparameterization") {
  for (uint64_t seed = 200; seed < 230; ++seed) {
    int k = 1 + static_cast<int>(seed % 3);
    auto S = random_piece_set(seed, k, 6);
    auto C = canonicalize(S);
    CHECK(set_equal(canonicalize(C), C));  // idempotent
    TaggedPieceSet reversed(S.k);
    reversed.pieces.assign(S.pieces.rbegin(), S.pieces.rend());
    CHECK(set_equal(canonicalize(reversed), C));
  }
  // same segment described over a shifted parameter box
  RatMat d(2, 1);
  d.col(0) = vec({2, 2});
  AffinePiece shifted(vec({0, 0}), d, {Interval(frac(1, 8), frac(1, 2))}, Tag::Full);
  TaggedPieceSet A(2), B(2);
  A.pieces.push_back(shifted);
  B.pieces.push_back(AffinePiece::segment(vec({frac(1, 4), frac(1, 4)}), vec({1, 1})));
  CHECK(set_equal(A, B));
}

TEST_CASE("subset handles split covers") {
  // diagonal covered jointly by two overlapping halves
  TaggedPieceSet T(2);
  T.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({frac(5, 8), frac(5, 8)})));
  T.pieces.push_back(AffinePiece::segment(vec({frac(1, 2), frac(1, 2)}), vec({1, 1})));
  CHECK(set_subset(diagonal2(), T));
  TaggedPieceSet gap(2);
  gap.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({frac(1, 4), frac(1, 4)})));
  gap.pieces.push_back(AffinePiece::segment(vec({frac(1, 2), frac(1, 2)}), vec({1, 1})));
  CHECK(!set_subset(diagonal2(), gap));
}

TEST_CASE("project full axis set is identity") {
  for (uint64_t seed : {4u, 5u}) {
    auto A = random_grid(seed, 3, 2, 9);
    CHECK(project_grid(A, AxisSet::full(3)).cells == A.cells);
  }
}

TEST_CASE("grid construction guards") {
  CHECK_THROWS_AS(DyadicGridSet(3, 11), InputError);  // 2^33 cells
  DyadicGridSet A(2, 2);
  CHECK_THROWS_AS(A.insert_checked({4, 0, 0}), InputError);
  CHECK_THROWS_AS(AxisSet(2, {0, 0}), InputError);
  CHECK_THROWS_AS(AxisSet(2, {2}), InputError);
  CHECK_THROWS_AS(Permutation({0, 0}), InputError);
}
