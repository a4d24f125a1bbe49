#include <doctest.h>

#include <cmath>

#include "essclose/copula.hpp"
#include "essclose/rng.hpp"
#include "helpers.hpp"

using namespace essclose;
using namespace essclose::testing;

namespace {

std::vector<Interval> box2(Rat x0, Rat x1, Rat y0, Rat y1) {
  return {Interval(std::move(x0), std::move(x1)), Interval(std::move(y0), std::move(y1))};
}

CopulaSpec raw_w3() {
  return CopulaSpec::raw(
      3,
      [](const std::vector<double>& u) { return std::max(u[0] + u[1] + u[2] - 2.0, 0.0); },
      "w3_lower");
}

CopulaSpec raw_w2() {
  return CopulaSpec::raw(
      2, [](const std::vector<double>& u) { return std::max(u[0] + u[1] - 1.0, 0.0); },
      "w2_lower");
}

// Monte-Carlo CDF oracle, independent of shuffle_cdf.
double mc_cdf(const CopulaSpec& C, double u, double v, uint64_t N, uint64_t seed) {
  auto cloud = sample_copula(C, N, seed);
  uint64_t hits = 0;
  for (const auto& pt : cloud.points)
    if (pt[0] <= u && pt[1] <= v) ++hits;
  return static_cast<double>(hits) / static_cast<double>(N);
}

}  // namespace

TEST_CASE("c_volume corner sums") {
  CHECK(c_volume_exact(CopulaSpec::product(2), box2(0, Rat(1, 2), 0, Rat(1, 2))) == Rat(1, 4));
  CHECK(c_volume_exact(CopulaSpec::min_copula(2), box2(0, Rat(1, 2), Rat(1, 2), 1)) == Rat(0));
  std::vector<Interval> cube{Interval(Rat(1, 2), Rat(1)), Interval(Rat(1, 2), Rat(1)),
                             Interval(Rat(1, 2), Rat(1))};
  CHECK(c_volume(raw_w3(), cube) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(
      c_volume_exact(CopulaSpec::product(2), box2(0, Rat(3, 2), 0, Rat(1, 2))), InputError);
}

TEST_CASE("total mass and nonnegativity over seeded boxes") {
  std::vector<CopulaSpec> variants;
  variants.push_back(CopulaSpec::product(2));
  variants.push_back(CopulaSpec::product(3));
  variants.push_back(CopulaSpec::min_copula(2));
  variants.push_back(CopulaSpec::min_copula(3));
  variants.push_back(CopulaSpec::w2());
  variants.push_back(CopulaSpec::shuffle(fig3_shuffle()));
  variants.push_back(CopulaSpec::bipartite(1, ex25_map()));
  variants.push_back(CopulaSpec::bipartite(2, doubling_map2()));
  for (const auto& C : variants) {
    int k = C.dim();
    std::vector<Interval> full(static_cast<size_t>(k), unit_interval());
    CHECK(c_volume_exact(C, full) == Rat(1));
    CounterStream rng(99);
    for (int i = 0; i < 1000; ++i) {
      std::vector<Interval> b;
      for (int j = 0; j < k; ++j) {
        Rat a(static_cast<long long>(rng.below(1025)), 1024);
        Rat c(static_cast<long long>(rng.below(1025)), 1024);
        b.emplace_back(min(a, c), max(a, c));
      }
      CHECK(c_volume_exact(C, b) >= Rat(0));
    }
  }
}

TEST_CASE("slab volumes reproduce the margins exactly") {
  std::vector<CopulaSpec> variants;
  variants.push_back(CopulaSpec::product(2));
  variants.push_back(CopulaSpec::min_copula(3));
  variants.push_back(CopulaSpec::shuffle(fig3_shuffle()));
  variants.push_back(CopulaSpec::bipartite(1, ex25_map()));
  variants.push_back(CopulaSpec::bipartite(2, doubling_map2()));
  for (const auto& C : variants) {
    int k = C.dim();
    CounterStream rng(3);
    for (int i = 0; i < 50; ++i) {
      int axis = static_cast<int>(rng.below(static_cast<uint64_t>(k)));
      Rat u(static_cast<long long>(rng.below(1025)), 1024);
      std::vector<Interval> slab(static_cast<size_t>(k), unit_interval());
      slab[static_cast<size_t>(axis)] = Interval(Rat(0), u);
      CHECK(c_volume_exact(C, slab) == u);
    }
  }
}

TEST_CASE("axiom checks pass for the constructible families") {
  CHECK(check_copula_axioms(CopulaSpec::min_copula(3), 200, 5).all_pass());
  CHECK(check_copula_axioms(CopulaSpec::product(2), 200, 5).all_pass());
  CHECK(check_copula_axioms(CopulaSpec::w2(), 200, 5).all_pass());
  CHECK(check_copula_axioms(CopulaSpec::shuffle(fig3_shuffle()), 200, 5).all_pass());
  CHECK(check_copula_axioms(raw_w2(), 200, 5).all_pass());
}

TEST_CASE("axiom check exposes the non-copula") {
  auto rep = check_copula_axioms(raw_w3(), 1000, 5);
  CHECK(!rep.k_increasing_pass);
  CHECK(rep.min_volume == doctest::Approx(-0.5).epsilon(1e-9));
  REQUIRE(rep.min_volume_box.size() == 3);
  // witness box sits at the upper corner
  for (const auto& iv : rep.min_volume_box) {
    CHECK(iv.lo.to_double() == doctest::Approx(0.5));
    CHECK(iv.hi.to_double() == doctest::Approx(1.0));
  }
}

TEST_CASE("shuffle cdf closed form") {
  auto S = fig3_shuffle();
  CHECK(shuffle_cdf(S, Rat(1), Rat(1)) == Rat(1));
  CHECK(shuffle_cdf(S, Rat(1, 5), Rat(1, 2)) == Rat(0));
  CHECK(shuffle_cdf(S, Rat(7, 10), Rat(1, 2)) == Rat(1, 2));
}

TEST_CASE("shuffle cdf against the Monte-Carlo oracle") {
  auto C = CopulaSpec::shuffle(fig3_shuffle());
  const auto* S = C.get_if<ShuffleOfMin>();
  const uint64_t N = 1000000;
  CounterStream rng(17);
  for (int probe = 0; probe < 20; ++probe) {
    double u = static_cast<double>(rng.below(101)) / 100.0;
    double v = static_cast<double>(rng.below(101)) / 100.0;
    double exact = shuffle_cdf(*S, Rat::from_double(u), Rat::from_double(v)).to_double();
    double mc = mc_cdf(C, u, v, N, 31 + static_cast<uint64_t>(probe));
    double p = exact;
    double bound = 4.0 * std::sqrt(std::max(p * (1 - p), 1e-9) / static_cast<double>(N));
    CHECK(std::abs(exact - mc) <= std::max(bound, 3e-3));
  }
}

TEST_CASE("samplers hit their supports exactly") {
  auto min2 = sample_copula(CopulaSpec::min_copula(2), 2000, 42);
  for (const auto& pt : min2.points) CHECK(pt[0] == pt[1]);

  auto w2 = sample_copula(CopulaSpec::w2(), 2000, 42);
  for (const auto& pt : w2.points) CHECK(pt[0] + pt[1] == doctest::Approx(1.0).epsilon(1e-15));

  auto S = fig3_shuffle();
  auto shuffle_cloud = sample_copula(CopulaSpec::shuffle(S), 2000, 42);
  auto map = shuffle_to_map(S);
  for (const auto& pt : shuffle_cloud.points) {
    RatVec x(1);
    x[0] = Rat::from_double(pt[0]);
    double expect = map.value_full(x)[0].to_double();
    CHECK(pt[1] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("product sampler mean within the CLT bound") {
  const uint64_t N = 100000;
  auto cloud = sample_copula(CopulaSpec::product(2), N, 7);
  double sx = 0, sy = 0;
  for (const auto& pt : cloud.points) {
    sx += pt[0];
    sy += pt[1];
  }
  double bound = 3.0 * std::sqrt(1.0 / 12.0) / std::sqrt(static_cast<double>(N));
  CHECK(std::abs(sx / N - 0.5) <= bound);
  CHECK(std::abs(sy / N - 0.5) <= bound);
}

TEST_CASE("sampling is deterministic and chunk-independent") {
  auto a = sample_copula(CopulaSpec::product(3), 500, 11);
  auto b = sample_copula(CopulaSpec::product(3), 500, 11);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i)
    for (int j = 0; j < 3; ++j) CHECK(a.points[i][j] == b.points[i][j]);
  // counter-based: draw i is a pure function of (seed, i)
  CHECK(a.points[499][0] == counter_u01(11, 499 * 3));
}

TEST_CASE("raw copulas have no sampler") {
  CHECK_THROWS_AS(sample_copula(raw_w2(), 10, 1), InputError);
}

TEST_CASE("measure preservation validator") {
  CHECK(validate_measure_preserving(identity_map1(), 6).preserving);
  CHECK(validate_measure_preserving(fig3_shuffle(), 6).preserving);
  CHECK(validate_measure_preserving(coordinate_map(doubling_map2(), 0), 8).preserving);

  PiecewiseMap half;  // x/2: not surjective in measure
  half.n = 1;
  half.m = 1;
  MapPiece piece;
  piece.box = {unit_interval()};
  piece.tag = Tag::Full;
  piece.coef.resize(1, 1);
  piece.coef(0, 0) = Rat(1, 2);
  piece.offset = vec({0});
  half.pieces.push_back(std::move(piece));
  auto rep = validate_measure_preserving(half, 1);
  CHECK(!rep.preserving);
  // bin (1/2, 1] receives nothing, bin [0, 1/2] twice its share
  CHECK(rep.max_deviation == Rat(1, 2));
  CHECK(rep.worst_bin >= 0);
}

TEST_CASE("constant pieces are rejected") {
  PiecewiseMap constant;
  constant.n = 1;
  constant.m = 1;
  MapPiece piece;
  piece.box = {unit_interval()};
  piece.tag = Tag::Full;
  piece.coef.resize(1, 1);
  piece.coef(0, 0) = Rat(0);
  piece.offset = vec({frac(1, 2)});
  constant.pieces.push_back(std::move(piece));
  CHECK_THROWS_AS(validate_measure_preserving(constant, 4), InputError);
}

TEST_CASE("essential refinement drops null pieces") {
  auto F = ex25_map();
  auto R = essential_refinement(F);
  CHECK(R.pieces.size() == 1);
  CHECK(!R.has_null_pieces());
  CHECK(R.pieces[0].coef(0, 0) == Rat(1));
  // idempotent
  auto RR = essential_refinement(R);
  CHECK(RR.pieces.size() == 1);
  // all-Full maps pass through unchanged
  auto I = essential_refinement(identity_map1());
  CHECK(I.pieces.size() == 1);
}

TEST_CASE("shuffle validation") {
  ShuffleOfMin gap;
  gap.pieces.push_back({Interval(Rat(0), Rat(1, 2)), Interval(Rat(0), Rat(1, 2)), 1});
  CHECK_THROWS_AS(CopulaSpec::shuffle(gap), InputError);

  ShuffleOfMin mismatch;
  mismatch.pieces.push_back({Interval(Rat(0), Rat(1, 2)), Interval(Rat(0), Rat(1)), 1});
  mismatch.pieces.push_back({Interval(Rat(1, 2), Rat(1)), Interval(Rat(0), Rat(1, 2)), 1});
  CHECK_THROWS_AS(CopulaSpec::shuffle(mismatch), InputError);
}

TEST_CASE("every valid shuffle map is measure preserving") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto S = random_shuffle(seed * 131);
    CHECK_NOTHROW(validate_shuffle(S));
    CHECK(validate_measure_preserving(S, 6).preserving);
  }
}

TEST_CASE("random shuffles satisfy the copula axioms exactly") {
  for (uint64_t seed = 40; seed <= 45; ++seed) {
    auto C = CopulaSpec::shuffle(random_shuffle(seed));
    auto rep = check_copula_axioms(C, 100, seed);
    INFO("seed ", seed);
    CHECK(rep.all_pass());
    std::vector<Interval> full{unit_interval(), unit_interval()};
    CHECK(c_volume_exact(C, full) == Rat(1));
  }
}

TEST_CASE("bipartite construction validates measure preservation") {
  PiecewiseMap bad;  // x/2 is into [0,1] but not measure-preserving
  bad.n = 1;
  bad.m = 1;
  MapPiece piece;
  piece.box = {unit_interval()};
  piece.tag = Tag::Full;
  piece.coef.resize(1, 1);
  piece.coef(0, 0) = Rat(1, 2);
  piece.offset = vec({0});
  bad.pieces.push_back(std::move(piece));
  CHECK_THROWS_AS(CopulaSpec::bipartite(1, bad), InputError);
  CHECK_NOTHROW(CopulaSpec::bipartite(1, ex25_map()));
  CHECK_NOTHROW(CopulaSpec::bipartite(2, doubling_map2()));
}

TEST_CASE("inverse shuffle round trip") {
  auto S = fig3_shuffle();
  auto inv = inverse_shuffle(S);
  auto back = inverse_shuffle(inv);
  REQUIRE(back.pieces.size() == S.pieces.size());
  auto T = shuffle_to_map(S);
  auto Tinv = shuffle_to_map(inv);
  // T(Tinv(y)) = y on piece interiors
  for (int i = 1; i < 40; ++i) {
    RatVec y(1);
    y[0] = Rat(i, 40);
    RatVec x = Tinv.value_full(y);
    CHECK(T.value_full(x)[0] == y[0]);
  }
}

TEST_CASE("bipartite cdf matches sampling") {
  auto C = CopulaSpec::bipartite(2, doubling_map2());
  const uint64_t N = 200000;
  auto cloud = sample_copula(C, N, 23);
  for (auto [u1, u2, u3] : {std::array<double, 3>{0.5, 0.5, 0.5},
                            std::array<double, 3>{0.75, 0.25, 0.5},
                            std::array<double, 3>{1.0, 1.0, 0.25}}) {
    uint64_t hits = 0;
    for (const auto& pt : cloud.points)
      if (pt[0] <= u1 && pt[1] <= u2 && pt[2] <= u3) ++hits;
    RatVec u(3);
    u[0] = Rat::from_double(u1);
    u[1] = Rat::from_double(u2);
    u[2] = Rat::from_double(u3);
    double exact = copula_cdf_exact(C, u).to_double();
    double mc = static_cast<double>(hits) / static_cast<double>(N);
    CHECK(std::abs(exact - mc) <= 4.0 * std::sqrt(0.25 / static_cast<double>(N)));
  }
}
