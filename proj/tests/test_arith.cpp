#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ecs/arith.hpp"

using namespace ecs;

TEST_CASE("gcd") {
  CHECK(gcd<u64>(12, 18) == 6);
  CHECK(gcd<u64>(7, 1) == 1);
  CHECK(gcd<u64>(0, 5) == 5);
  CHECK(gcd<u64>(5, 0) == 5);
  CHECK_THROWS_AS(gcd<u64>(0, 0), DomainError);
  CHECK(gcd<BigInt>(BigInt(12), BigInt(18)) == 6);
}

TEST_CASE("lcm_checked") {
  CHECK(lcm_checked<u64>(4, 6) == 12);
  CHECK(lcm_checked<u64>(8, 8) == 8);
  CHECK_THROWS_AS(lcm_checked<u64>(u64{1} << 63, 3), OverflowError);
  // the default 128-bit backing holds that one but not 2^127 * 3
  CHECK(lcm_checked<u128>(u128{1} << 63, 3) == (u128{3} << 63));
  CHECK_THROWS_AS(lcm_checked<u128>(u128{1} << 127, 3), OverflowError);
  CHECK_THROWS_AS(lcm_checked<u64>(0, 3), DomainError);
}

TEST_CASE("gcd and lcm properties") {
  std::mt19937_64 rng(20151112);
  std::uniform_int_distribution<u64> dist(1, 1'000'000);
  for (int i = 0; i < 2000; ++i) {
    const u64 a = dist(rng), b = dist(rng);
    const u64 g = gcd<u64>(a, b);
    CHECK(a % g == 0);
    CHECK(b % g == 0);
    CHECK(u128(lcm_checked<u64>(a, b)) * g == u128(a) * b);
  }
}

TEST_CASE("fraction stays reduced") {
  const Fraction f(u128{6}, u128{8});
  CHECK(f.num() == 3);
  CHECK(f.den() == 4);
  CHECK(Fraction(u128{0}, u128{7}).den() == 1);
  CHECK_THROWS_AS(Fraction(u128{1}, u128{0}), DomainError);
  const auto sum = Fraction::unit(3) + Fraction::unit(6);
  CHECK(sum == Fraction(u128{1}, u128{2}));
  CHECK(Fraction::unit(3) < Fraction::unit(2));
  CHECK(Fraction(u128{2}, u128{4}).to_string() == "1/2");
  CHECK(Fraction(u128{4}, u128{2}).to_string() == "2");
  CHECK(BigFraction::unit(BigInt(1)).to_string() == "1");
}

TEST_CASE("fraction overflow is an error, not wraparound") {
  const u128 big = u128{1} << 100;
  const Fraction a = Fraction::unit(big - 1);
  const Fraction b = Fraction::unit(big + 1);
  CHECK_THROWS_AS(a + b, OverflowError);
}

TEST_CASE("frac_sub_unit") {
  CHECK(frac_sub_unit(Fraction(u128{1}), 3) == Fraction(u128{2}, u128{3}));
  CHECK(frac_sub_unit(Fraction(u128{2}, u128{3}), 6) == Fraction(u128{1}, u128{2}));
  CHECK_THROWS_AS(frac_sub_unit(Fraction(u128{1}, u128{6}), 5), UnderflowError);
  CHECK(frac_sub_unit(Fraction(u128{1}, u128{6}), 6).is_zero());
  CHECK_FALSE(try_sub_unit(Fraction(u128{1}, u128{6}), 5).has_value());
}

TEST_CASE("frac_sub_unit is exact and reduced") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<u64> den(1, 5000), mod(1, 5000);
  for (int i = 0; i < 3000; ++i) {
    const u64 d = den(rng);
    const Fraction f(std::uniform_int_distribution<u64>(0, d)(rng), d);
    const u64 m = mod(rng);
    const auto g = try_sub_unit(f, m);
    if (!g) {
      CHECK(f < Fraction::unit(m));
      continue;
    }
    CHECK(gcd<u128>(g->num() == 0 ? g->den() : g->num(), g->den()) == 1);
    CHECK(*g + Fraction::unit(m) == f);
  }
}

TEST_CASE("big fractions do not overflow") {
  BigFraction s;
  for (u64 p : {u64{18446744073709551557ULL}, u64{18446744073709551533ULL},
                u64{18446744073709551521ULL}})
    s += BigFraction::unit(BigInt(p));
  CHECK(s.den() > BigInt(std::numeric_limits<u64>::max()));
  CHECK(!s.is_one());
}

TEST_CASE("smallest_prime_factor") {
  CHECK(smallest_prime_factor(9) == 3);
  CHECK(smallest_prime_factor(10) == 2);
  CHECK(smallest_prime_factor(17) == 17);
  CHECK(smallest_prime_factor(2) == 2);
  CHECK(smallest_prime_factor(999'983ULL * 999'979ULL) == 999'979);
  CHECK_THROWS_AS(smallest_prime_factor(1), DomainError);
  CHECK_THROWS_AS(smallest_prime_factor(0), DomainError);
}

TEST_CASE("to_string of 128-bit values") {
  CHECK(to_string(u128{0}) == "0");
  CHECK(to_string(u128{1} << 64) == "18446744073709551616");
}
