#include <doctest.h>

#include <numbers>
#include <random>

#include "cdalg/integrate.hpp"
#include "oracles.hpp"

using namespace cdalg;
using std::numbers::pi;

namespace {

const AlgebraLevel O(3);

CDNumber e(int i) { return CDNumber::unit(O, i); }

Path unit_circle(const CDNumber& m, double turns = 1.0) {
  return Path::circle(CDNumber(O), 1.0, m, turns);
}

}  // namespace

TEST_CASE("paths") {
  const Path c = Path::circle(e(1), 2.0, e(2) * 3.0, 1.0);
  CHECK(norm(c.direction() - e(2)) < 1e-15);
  CHECK(c.is_closed());
  CHECK(norm(c.at(0.25) - (e(1) + e(2) * 2.0)) < 1e-15);
  CHECK(norm(c.reversed().at(0.25) - (e(1) - e(2) * 2.0)) < 1e-15);
  CHECK_THROWS_AS(Path::circle(CDNumber(O), 1.0, CDNumber::one(O)), Error);
  CHECK_THROWS_AS(Path::circle(CDNumber(O), -1.0, e(1)), Error);
  const Path p = Path::polyline({CDNumber(O), e(1), e(1) + e(2)});
  CHECK_FALSE(p.is_closed());
  CHECK(norm(p.at(0.5) - e(1)) < 1e-15);
}

TEST_CASE("total variation") {
  CHECK(total_variation(unit_circle(e(1)), make_partition(unit_circle(e(1)), 4096)) ==
        doctest::Approx(2 * pi).epsilon(1e-6));
  const Path seg = Path::polyline({e(3), e(3) + e(5) * 2.0 + CDNumber::real(O, 1.0)});
  for (int n : {1, 7, 64}) {
    CHECK(total_variation(seg, make_partition(seg, n)) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  }
  const Path still = Path::polyline({e(2), e(2)});
  CHECK(total_variation(still, make_partition(still, 16)) == 0.0);
}

TEST_CASE("integral sums") {
  std::mt19937_64 rng(1);
  const Path seg = Path::polyline({oracle::random_number(rng, O), oracle::random_number(rng, O)});
  const CDNumber expect = seg.end() - seg.start();
  CHECK(norm(integral_sum(parse("1", O), seg, make_partition(seg, 8)) - expect) < 1e-14);
  // Right-endpoint sums carry a first-order bias: halving it takes twice the knots.
  const Path c = unit_circle(e(1));
  const double err1 = norm(integral_sum(parse("z^-1", O), c, make_partition(c, 2048)) - e(1) * (2 * pi));
  const double err2 = norm(integral_sum(parse("z^-1", O), c, make_partition(c, 4096)) - e(1) * (2 * pi));
  CHECK(err1 < 2e-2);
  CHECK(err1 / err2 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("loop integrals of z^-1") {
  std::mt19937_64 rng(2);
  const Phrase f = parse("z^-1", O);
  for (int n = 1; n <= 3; ++n) {
    const CDNumber m = oracle::random_unit_imaginary(rng, O);
    for (double rho : {0.5, 2.0}) {
      const auto q = line_integral(f, Path::circle(CDNumber(O), rho, m, n), 1e-6);
      CHECK(q.converged);
      CHECK(norm(q.value - m * (2 * pi * n)) < 1e-6);
    }
  }
  const auto q = line_integral(f, unit_circle(e(1), -1.0));
  CHECK(norm(q.value + e(1) * (2 * pi)) < 1e-6);
}

TEST_CASE("vanishing and path independence") {
  std::mt19937_64 rng(3);
  const Phrase f = parse("e1*z^2*e6 + (e2*z)*(e3*z^3) + e5", O);
  const CDNumber a = oracle::random_number(rng, O), b = oracle::random_number(rng, O);
  const Path square = Path::polyline({a, a + e(1), a + e(1) + e(4), a + e(4), a});
  CHECK(norm(line_integral(parse("z^2", O), square).value) < 1e-6);
  CHECK(norm(line_integral(f, square, 1e-8).value) < 1e-6);
  const CDNumber mid = oracle::random_number(rng, O);
  const auto direct = line_integral(f, Path::polyline({a, b}), 1e-8);
  const auto bent = line_integral(f, Path::polyline({a, mid, b}), 1e-8);
  const auto curved = line_integral(
      f, Path::parametric(O, [&](double t) { return a + (b - a) * t + e(7) * std::sin(pi * t); }),
      1e-8);
  CHECK(norm(direct.value - bent.value) < 2e-6);
  CHECK(norm(direct.value - curved.value) < 2e-6);
}

TEST_CASE("non-convergence is reported") {
  const auto q = line_integral(parse("z^-1", O), unit_circle(e(1)), 1e-14, 128);
  CHECK_FALSE(q.converged);
  CHECK(q.knots == 128);
}

TEST_CASE("logarithmic integral") {
  CHECK(norm(log_integral(CDNumber(O), unit_circle(e(2))).value - e(2) * (2 * pi)) < 1e-9);
  CHECK(norm(log_integral(CDNumber(O), unit_circle(e(2), 3.0)).value - e(2) * (6 * pi)) < 1e-9);
  CHECK(norm(log_integral(CDNumber(O), unit_circle(e(2), -1.0)).value + e(2) * (2 * pi)) < 1e-9);
  CHECK(norm(log_integral(CDNumber::real(O, 3.0), unit_circle(e(2))).value) < 1e-9);
}

TEST_CASE("Stieltjes integral") {
  std::mt19937_64 rng(4);
  const Phrase f = parse("e1*z^2*e2 + 3", O);
  const Path seg = Path::polyline({oracle::random_number(rng, O), oracle::random_number(rng, O)});
  CHECK(norm(stieltjes_integral(f, parse("z", O), seg, 1e-9).value -
             line_integral(f, seg, 1e-9).value) < 1e-12);
  CHECK(norm(stieltjes_integral(parse("1", O), parse("e3*z^2", O), unit_circle(e(1))).value) < 1e-12);
}
