#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <stdexcept>

#include "bipolarity/rational.hpp"

using bipolarity::Rational;

TEST_CASE("rational normalization and accessors") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-6, 4) == Rational(-3, 2));
  CHECK(Rational(6, -4) == Rational(-3, 2));  // sign lives in numerator
  CHECK(Rational(6, -4).den() == 2);
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK(Rational(5).is_integer());
  CHECK_FALSE(Rational(5, 3).is_integer());
  CHECK(Rational().is_zero());
  CHECK(Rational(-1, 3).sign() == -1);
  CHECK(Rational(0).sign() == 0);
  CHECK(Rational(7, 2).sign() == 1);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  Rational a(1, 4);
  a += Rational(1, 4);
  CHECK(a == Rational(1, 2));
  a -= Rational(1, 3);
  CHECK(a == Rational(1, 6));
  a *= Rational(12);
  CHECK(a == Rational(2));
}

TEST_CASE("rational ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(7, 3) > Rational(2));
  CHECK(Rational(1, 2) <= Rational(1, 2));
  CHECK(Rational(1, 2) >= Rational(1, 2));
  CHECK(Rational(1, 2) != Rational(1, 3));
}

TEST_CASE("rational division and zero-denominator guards") {
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational mod_one lands in [0,1)") {
  CHECK(Rational(7, 3).mod_one() == Rational(1, 3));
  CHECK(Rational(-1, 3).mod_one() == Rational(2, 3));
  CHECK(Rational(-7, 3).mod_one() == Rational(2, 3));
  CHECK(Rational(4, 2).mod_one() == Rational(0));
  CHECK(Rational(0).mod_one() == Rational(0));
}

TEST_CASE("rational printing") {
  std::ostringstream os;
  os << Rational(-3, 7) << " " << Rational(4);
  CHECK(os.str() == "-3/7 4");
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK(Rational(-2).str() == "-2");
}

TEST_CASE("rational overflow is detected, not wrapped") {
  const long long big = 4611686018427387904LL;  // 2^62
  CHECK_THROWS_AS(Rational(big) * Rational(big), std::overflow_error);
  CHECK_THROWS_AS(Rational(big) + Rational(big), std::overflow_error);
  // products with room still work
  CHECK(Rational(1LL << 30) * Rational(1LL << 30) == Rational(1LL << 60));
}
