#include <doctest.h>

#include "essclose/rational.hpp"

using essclose::Rat;

TEST_CASE("rational arithmetic and normalization") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-3, -6) == Rat(1, 2));
  CHECK(Rat(3, -6) == Rat(-1, 2));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 3) - Rat(1, 2) == Rat(-1, 6));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(2, 3) / Rat(4, 9) == Rat(3, 2));
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(-1, 3));
  CHECK(abs(Rat(-5, 7)) == Rat(5, 7));
}

TEST_CASE("floor, ceil, pow2") {
  CHECK(Rat(7, 2).floor() == 3);
  CHECK(Rat(-7, 2).floor() == -4);
  CHECK(Rat(7, 2).ceil() == 4);
  CHECK(Rat(-7, 2).ceil() == -3);
  CHECK(Rat(3).floor() == 3);
  CHECK(Rat::pow2(6) == Rat(64));
  CHECK(Rat::pow2(-6) == Rat(1, 64));
}

TEST_CASE("parse and print round trip") {
  for (const char* s : {"0", "1", "-1", "3/4", "-17/32", "1024"}) {
    Rat r = Rat::parse(s);
    CHECK(Rat::parse(r.str()) == r);
    CHECK(r.str() == s);
  }
  CHECK(Rat::parse("2/4").str() == "1/2");
  CHECK_THROWS(Rat::parse("a"));
  CHECK_THROWS(Rat::parse("1/0"));
  CHECK_THROWS(Rat::parse(""));
}

TEST_CASE("exact doubles") {
  CHECK(Rat::from_double(0.5) == Rat(1, 2));
  CHECK(Rat::from_double(0.375) == Rat(3, 8));
  CHECK(Rat::from_double(-2.0) == Rat(-2));
  // 0.1 is not 1/10 in binary64; the conversion is exact for the double.
  CHECK(Rat::from_double(0.1) != Rat(1, 10));
  CHECK(Rat::from_double(0.1).to_double() == 0.1);
}

TEST_CASE("division by zero and overflow guard") {
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
  Rat big = Rat::pow2(61);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("seeded random field identities") {
  // (a+b)*c == a*c + b*c over a deterministic grid of small rationals.
  for (long long i = -6; i <= 6; ++i) {
    for (long long j = 1; j <= 5; ++j) {
      Rat a(i, j), b(j, 7), c(i + j, 11);
      CHECK((a + b) * c == a * c + b * c);
      if (!c.is_zero()) CHECK((a / c) * c == a);
      CHECK(a + (-a) == Rat(0));
    }
  }
}
