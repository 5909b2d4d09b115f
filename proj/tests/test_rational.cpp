#include <doctest.h>

#include "pomc/error.hpp"
#include "pomc/rational.hpp"

using pomc::Error;
using pomc::ErrorCode;
using pomc::Rational;

TEST_SUITE_BEGIN("core");

TEST_CASE("rationals canonicalize on construction") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(6, 3).is_integer());
  CHECK(Rational(3, 2).denominator() == 2);
}

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) - Rational(1, 2) == Rational(0));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(1, 2).pow(10) == Rational(1, 1024));
  CHECK(Rational(-2, 3).abs() == Rational(2, 3));
  CHECK(Rational(3, 7).reciprocal() == Rational(7, 3));
  // No drift over many accumulation steps.
  Rational acc;
  for (int i = 0; i < 100; ++i) acc += Rational(1, 100);
  CHECK(acc == Rational(1));
}

TEST_CASE("rational ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(7, 3) >= Rational(7, 3));
  CHECK(Rational(1, 3).sign() == 1);
  CHECK(Rational(-1, 3).sign() == -1);
  CHECK(Rational(0).sign() == 0);
}

TEST_CASE("rational text round trip") {
  CHECK(Rational::from_string("3/9") == Rational(1, 3));
  CHECK(Rational::from_string("-2/4").str() == "-1/2");
  CHECK(Rational::from_string("5").str() == "5");
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK_THROWS_AS(Rational::from_string(""), Error);
  CHECK_THROWS_AS(Rational::from_string("1/"), Error);
  CHECK_THROWS_AS(Rational::from_string("a/b"), Error);
  CHECK_THROWS_AS(Rational::from_string("1/2/3"), Error);
  CHECK_THROWS_AS(Rational::from_string("1.5"), Error);
  CHECK_THROWS_AS(Rational::from_string("1/0"), Error);
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  CHECK_THROWS_AS(Rational(0).reciprocal(), Error);
  try {
    Rational(1, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("uint64 conversion covers the full range") {
  CHECK(pomc::rational_from_ulong(0) == Rational(0));
  CHECK(pomc::rational_from_ulong(1) == Rational(1));
  // 2^64 - 1
  CHECK(pomc::rational_from_ulong(18446744073709551615ULL) ==
        Rational(2).pow(64) - Rational(1));
}

TEST_SUITE_END();
