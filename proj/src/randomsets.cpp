#include "essclose/randomsets.hpp"

#include "essclose/geometry.hpp"
#include "essclose/rng.hpp"

namespace essclose {

TaggedPieceSet random_piece_set(uint64_t seed, int k, int max_pieces) {
  if (k < 1 || k > kMaxDim) throw InputError("random_piece_set: k must be 1..3");
  if (max_pieces < 1) throw InputError("random_piece_set: max_pieces >= 1 required");
  CounterStream rng(seed);
  TaggedPieceSet S(k);
  int count = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_pieces)));
  auto coord = [&]() { return Rat(static_cast<long long>(rng.below(25)), 24); };
  auto point = [&]() {
    RatVec x(k);
    for (int j = 0; j < k; ++j) x[j] = coord();
    return x;
  };
  int guard = 0;
  while (static_cast<int>(S.pieces.size()) < count && ++guard < 1000) {
    Tag tag = rng.below(3) == 0 ? Tag::Null : Tag::Full;
    uint64_t kind = rng.below(3);
    if (kind == 0) {
      S.pieces.push_back(AffinePiece::point(point(), tag));
    } else if (kind == 1 || k == 1) {
      RatVec a = point(), b = point();
      bool equal = true;
      for (int j = 0; j < k; ++j)
        if (!(a[j] == b[j])) equal = false;
      if (equal) continue;
      S.pieces.push_back(AffinePiece::segment(a, b, tag));
    } else if (k == 2) {
      Rat x0 = coord(), x1 = coord(), y0 = coord(), y1 = coord();
      if (x0 == x1 || y0 == y1) continue;
      S.pieces.push_back(AffinePiece::axis_box(
          {Interval(min(x0, x1), max(x0, x1)), Interval(min(y0, y1), max(y0, y1))}, tag));
    } else {
      RatVec a = point(), b = point(), c = point();
      RatVec u = b - a, v = c - a;
      RatMat d(k, 2);
      d.col(0) = u;
      d.col(1) = v;
      if (rat_rank(d) != 2) continue;
      RatVec far = a + u + v;
      bool ok = true;
      for (int j = 0; j < k; ++j)
        if (far[j] < Rat(0) || far[j] > Rat(1)) ok = false;
      if (!ok) continue;
      S.pieces.push_back(AffinePiece::patch(a, u, v, tag));
    }
  }
  return S;
}

}  // namespace essclose
