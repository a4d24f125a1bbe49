#pragma once

#include <algorithm>
#include <initializer_list>

#include "essclose/copula.hpp"
#include "essclose/rng.hpp"
#include "essclose/setmodel.hpp"

namespace essclose::testing {

inline RatVec vec(std::initializer_list<Rat> xs) {
  RatVec v(static_cast<int>(xs.size()));
  int i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

inline Rat frac(long long n, long long d) { return Rat(n, d); }

// Figure fixtures: the two lines of the complete-dependence example, the
// three-piece non-support counterexample, the shuffle support, and the main
// diagonal of the cube.

inline TaggedPieceSet fig1() {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({0, 1}), vec({1, 0}), Tag::Null));
  return S;
}

inline TaggedPieceSet fig2() {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 1}), vec({frac(1, 2), frac(1, 2)}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({frac(1, 2), 0}), vec({frac(1, 2), frac(1, 2)}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({frac(1, 2), frac(1, 2)}), vec({1, frac(1, 2)}), Tag::Full));
  return S;
}

inline ShuffleOfMin fig3_shuffle() {
  ShuffleOfMin S;
  S.pieces.push_back({Interval(Rat(0), frac(1, 5)), Interval(frac(4, 5), Rat(1)), +1});
  S.pieces.push_back({Interval(frac(1, 5), frac(7, 10)), Interval(Rat(0), frac(1, 2)), -1});
  S.pieces.push_back({Interval(frac(7, 10), Rat(1)), Interval(frac(1, 2), frac(4, 5)), +1});
  return S;
}

inline TaggedPieceSet fig3() {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, frac(4, 5)}), vec({frac(1, 5), 1}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({frac(1, 5), frac(1, 2)}), vec({frac(7, 10), 0}), Tag::Full));
  S.pieces.push_back(AffinePiece::segment(vec({frac(7, 10), frac(1, 2)}), vec({1, frac(4, 5)}), Tag::Full));
  return S;
}

inline TaggedPieceSet m3_diagonal() {
  TaggedPieceSet S(3);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0, 0}), vec({1, 1, 1}), Tag::Full));
  return S;
}

inline TaggedPieceSet diagonal2() {
  TaggedPieceSet S(2);
  S.pieces.push_back(AffinePiece::segment(vec({0, 0}), vec({1, 1}), Tag::Full));
  return S;
}

// f(x) = x on irrationals, 1-x on rationals: identity as the Full piece plus
// a dense Null override.
inline PiecewiseMap ex25_map() {
  PiecewiseMap F;
  F.n = 1;
  F.m = 1;
  MapPiece full;
  full.box = {unit_interval()};
  full.tag = Tag::Full;
  full.coef.resize(1, 1);
  full.coef(0, 0) = Rat(1);
  full.offset = vec({0});
  MapPiece null;
  null.box = {unit_interval()};
  null.tag = Tag::Null;
  null.coef.resize(1, 1);
  null.coef(0, 0) = Rat(-1);
  null.offset = vec({1});
  F.pieces.push_back(std::move(full));
  F.pieces.push_back(std::move(null));
  return F;
}

// x1 doubled modulo 1, as a map on box pieces of the square: measure
// preserving, giving a 2-dimensional bipartite fixture in the cube.
inline PiecewiseMap doubling_map2() {
  PiecewiseMap F;
  F.n = 2;
  F.m = 1;
  MapPiece lo;
  lo.box = {Interval(Rat(0), frac(1, 2)), unit_interval()};
  lo.tag = Tag::Full;
  lo.coef.resize(1, 2);
  lo.coef(0, 0) = Rat(2);
  lo.coef(0, 1) = Rat(0);
  lo.offset = vec({0});
  MapPiece hi;
  hi.box = {Interval(frac(1, 2), Rat(1)), unit_interval()};
  hi.tag = Tag::Full;
  hi.coef.resize(1, 2);
  hi.coef(0, 0) = Rat(2);
  hi.coef(0, 1) = Rat(0);
  hi.offset = vec({-1});
  F.pieces.push_back(std::move(lo));
  F.pieces.push_back(std::move(hi));
  return F;
}

// Random interval exchange with flips over dyadic breakpoints.
inline ShuffleOfMin random_shuffle(uint64_t seed) {
  CounterStream rng(seed);
  int n = 2 + static_cast<int>(rng.below(3));
  std::vector<Rat> cuts{Rat(0), Rat(1)};
  while (static_cast<int>(cuts.size()) < n + 1) {
    Rat c(static_cast<long long>(1 + rng.below(31)), 32);
    bool fresh = true;
    for (const auto& x : cuts)
      if (x == c) fresh = false;
    if (fresh) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<size_t>(i)],
              perm[static_cast<size_t>(rng.below(static_cast<uint64_t>(i + 1)))]);
  std::vector<Rat> lengths;
  for (int i = 0; i < n; ++i)
    lengths.push_back(cuts[static_cast<size_t>(i) + 1] - cuts[static_cast<size_t>(i)]);
  std::vector<Rat> tstart(static_cast<size_t>(n));
  Rat acc(0);
  for (int slot = 0; slot < n; ++slot) {
    tstart[static_cast<size_t>(perm[static_cast<size_t>(slot)])] = acc;
    acc += lengths[static_cast<size_t>(perm[static_cast<size_t>(slot)])];
  }
  ShuffleOfMin S;
  for (int i = 0; i < n; ++i) {
    Interval src(cuts[static_cast<size_t>(i)], cuts[static_cast<size_t>(i) + 1]);
    Interval dst(tstart[static_cast<size_t>(i)],
                 tstart[static_cast<size_t>(i)] + lengths[static_cast<size_t>(i)]);
    S.pieces.push_back({src, dst, rng.below(2) == 0 ? 1 : -1});
  }
  return S;
}

inline PiecewiseMap identity_map1() {
  PiecewiseMap F;
  F.n = 1;
  F.m = 1;
  MapPiece piece;
  piece.box = {unit_interval()};
  piece.tag = Tag::Full;
  piece.coef.resize(1, 1);
  piece.coef(0, 0) = Rat(1);
  piece.offset = vec({0});
  F.pieces.push_back(std::move(piece));
  return F;
}

}  // namespace essclose::testing
