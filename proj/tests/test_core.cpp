#include <doctest.h>

#include <complex>
#include <random>

#include "cdalg/structure.hpp"
#include "oracles.hpp"

using namespace cdalg;

namespace {

CDNumber e(int r, int i) { return CDNumber::unit(AlgebraLevel(r), i); }

}  // namespace

TEST_CASE("level bounds") {
  CHECK_THROWS_AS(AlgebraLevel(0), Error);
  CHECK_THROWS_AS(AlgebraLevel(9), Error);
  try {
    AlgebraLevel bad(9);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::invalid_level);
    CHECK(is_usage_error(err.kind()));
  }
  CHECK(AlgebraLevel(8).dim() == 256);
  CHECK_THROWS_AS(mul(e(2, 1), e(3, 1)), Error);
}

TEST_CASE("quaternion units") {
  CHECK(mul(e(2, 1), e(2, 2)) == e(2, 3));
  CHECK(mul(e(2, 2), e(2, 1)) == -e(2, 3));
  CHECK(mul(e(2, 1), e(2, 1)) == -CDNumber::one(AlgebraLevel(2)));
}

TEST_CASE("octonion units are not associative") {
  const CDNumber left = mul(mul(e(3, 1), e(3, 2)), e(3, 4));
  const CDNumber right = mul(e(3, 1), mul(e(3, 2), e(3, 4)));
  CHECK(left == e(3, 7));
  CHECK(right == -e(3, 7));
}

TEST_CASE("products agree with independent oracles") {
  std::mt19937_64 rng(1);
  SUBCASE("complex numbers") {
    const AlgebraLevel level(1);
    for (int t = 0; t < 50; ++t) {
      const CDNumber a = oracle::random_number(rng, level), b = oracle::random_number(rng, level);
      const std::complex<double> p = std::complex<double>(a[0], a[1]) * std::complex<double>(b[0], b[1]);
      const CDNumber ab = mul(a, b);
      CHECK(ab[0] == doctest::Approx(p.real()).epsilon(1e-14));
      CHECK(ab[1] == doctest::Approx(p.imag()).epsilon(1e-14));
    }
  }
  SUBCASE("Hamilton quaternions") {
    const AlgebraLevel level(2);
    for (int t = 0; t < 50; ++t) {
      const CDNumber a = oracle::random_number(rng, level), b = oracle::random_number(rng, level);
      const oracle::Quat p = oracle::hamilton({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
      CHECK(oracle::distance(mul(a, b), oracle::Vec(p.begin(), p.end())) < 1e-13);
    }
  }
  SUBCASE("recursive doubling up to r = 6") {
    for (int r = 3; r <= 6; ++r) {
      const AlgebraLevel level(r);
      for (int t = 0; t < 10; ++t) {
        const CDNumber a = oracle::random_number(rng, level), b = oracle::random_number(rng, level);
        const oracle::Vec p = oracle::doubling_product(oracle::to_vec(a), oracle::to_vec(b));
        CHECK(oracle::distance(mul(a, b), p) < 1e-12);
      }
    }
  }
}

TEST_CASE("identity element") {
  std::mt19937_64 rng(2);
  for (int r = 1; r <= 5; ++r) {
    const CDNumber z = oracle::random_number(rng, AlgebraLevel(r));
    CHECK(mul(CDNumber::one(z.level()), z) == z);
    CHECK(mul(z, CDNumber::one(z.level())) == z);
  }
}

TEST_CASE("conjugation") {
  const AlgebraLevel level(2);
  CDNumber z(level);
  z[0] = 1;
  z[1] = 2;
  z[2] = 3;
  CDNumber expect(level);
  expect[0] = 1;
  expect[1] = -2;
  expect[2] = -3;
  CHECK(conj(z) == expect);
  CHECK(conj(CDNumber::real(level, 5)) == CDNumber::real(level, 5));

  std::mt19937_64 rng(3);
  for (int r = 2; r <= 5; ++r) {
    const AlgebraLevel lv(r);
    const CDNumber a = oracle::random_number(rng, lv), b = oracle::random_number(rng, lv);
    CHECK(conj(conj(a)) == a);
    CHECK(norm(conj(mul(a, b)) - mul(conj(b), conj(a))) < 1e-12);
    CHECK(norm(conj_via_generators(a) - conj(a)) < 1e-13);
  }
  const CDNumber one_plus_i = CDNumber::one(level) + e(2, 1);
  CHECK(norm(conj_via_generators(one_plus_i) - (CDNumber::one(level) - e(2, 1))) < 1e-15);
  CHECK_THROWS_AS(conj_via_generators(e(1, 1)), Error);
}

TEST_CASE("norm") {
  const AlgebraLevel level(2);
  CHECK(norm(CDNumber::one(level) + e(2, 1) + e(2, 2) + e(2, 3)) == doctest::Approx(2.0));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const CDNumber a = oracle::random_number(rng, AlgebraLevel(3));
    const CDNumber b = oracle::random_number(rng, AlgebraLevel(3));
    CHECK(norm(mul(a, b)) == doctest::Approx(norm(a) * norm(b)).epsilon(1e-13));
    const CDNumber aa = mul(a, conj(a));
    CHECK(norm(aa.imag()) < 1e-14 * squared_norm(a));
    CHECK(aa[0] == doctest::Approx(squared_norm(a)).epsilon(1e-14));
  }
}

TEST_CASE("inverse") {
  CHECK(inverse(e(2, 1)) == -e(2, 1));
  CHECK(inverse(CDNumber::real(AlgebraLevel(2), 2.0)) == CDNumber::real(AlgebraLevel(2), 0.5));
  std::mt19937_64 rng(5);
  CDNumber z = oracle::random_number(rng, AlgebraLevel(4));
  z = z / norm(z);
  CHECK(norm(mul(z, inverse(z)) - CDNumber::one(z.level())) < 1e-14);
  CHECK_THROWS_AS(inverse(CDNumber(AlgebraLevel(3))), Error);
}

TEST_CASE("powers") {
  std::mt19937_64 rng(6);
  for (int r = 2; r <= 5; ++r) {
    const CDNumber m = oracle::random_unit_imaginary(rng, AlgebraLevel(r));
    CHECK(norm(mul(m, m) + CDNumber::one(m.level())) < 1e-14);
  }
  const CDNumber z = oracle::random_number(rng, AlgebraLevel(4));
  CHECK(pow_int(z, 0) == CDNumber::one(z.level()));
  CHECK(norm(mul(pow_int(z, 3), pow_int(z, 2)) - pow_int(z, 5)) < 1e-12 * std::pow(norm(z), 5));
  CHECK(norm(mul(pow_int(z, -2), pow_int(z, 3)) - z) < 1e-13);
}

TEST_CASE("split and embed") {
  const AlgebraLevel level(2);
  const CDNumber z = CDNumber::real(level, 3) + e(2, 1) * 4.0;
  const auto [v, m] = split(z);
  CHECK(v == 3.0);
  CHECK(m == e(2, 1) * 4.0);
  CHECK(CDNumber::real(level, v) + m == z);
  CHECK(embed(e(2, 1), AlgebraLevel(3)) == e(3, 1));
  CHECK(embed(CDNumber::one(AlgebraLevel(1)), AlgebraLevel(5)) == CDNumber::one(AlgebraLevel(5)));
  CHECK_THROWS_AS(embed(e(3, 1), AlgebraLevel(2)), Error);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const CDNumber a = oracle::random_number(rng, level), b = oracle::random_number(rng, level);
    const AlgebraLevel big(4);
    CHECK(norm(mul(embed(a, big), embed(b, big)) - embed(mul(a, b), big)) < 1e-14);
  }
}

TEST_CASE("zero divisors") {
  CHECK_FALSE(find_zero_divisor(AlgebraLevel(2), 1'000'000));
  CHECK_FALSE(find_zero_divisor(AlgebraLevel(3), 1'000'000));
  const auto pair = find_zero_divisor(AlgebraLevel(4), 1'000'000);
  REQUIRE(pair);
  CHECK(norm(mul(pair->a, pair->b)) == 0.0);
  CHECK(norm(pair->a) > 0.0);
  CHECK(norm(pair->b) > 0.0);
}

TEST_CASE("alternativity") {
  std::mt19937_64 rng(8);
  const CDNumber x = oracle::random_number(rng, AlgebraLevel(3));
  const CDNumber y = oracle::random_number(rng, AlgebraLevel(3));
  CHECK(alternativity_residual(x, y) < 1e-12);
  CHECK_FALSE(find_alternativity_violation(AlgebraLevel(3), 100'000));
  const auto w = find_alternativity_violation(AlgebraLevel(4), 1'000'000);
  REQUIRE(w);
  CHECK(alternativity_residual(w->x, w->y) == doctest::Approx(w->residual));
}

TEST_CASE("sign fault hook corrupts the table") {
  debug::set_basis_sign_fault(true);
  const CDNumber faulty = mul(e(2, 1), e(2, 2));
  debug::set_basis_sign_fault(false);
  CHECK(faulty == -e(2, 3));
  CHECK(mul(e(2, 1), e(2, 2)) == e(2, 3));
}
