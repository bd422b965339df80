#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "cdalg/contour.hpp"
#include "oracles.hpp"

using namespace cdalg;
using std::numbers::pi;

namespace {

const AlgebraLevel O(3);

CDNumber e(int i) { return CDNumber::unit(O, i); }
CDNumber real(double x) { return CDNumber::real(O, x); }

Path circle(const CDNumber& c, double rho, const CDNumber& m, double turns = 1.0) {
  return Path::circle(c, rho, m, turns);
}

Phrase pole(const CDNumber& p, int n) { return Phrase{O, Expr::power(Variable::z, p, n)}; }

}  // namespace

TEST_CASE("winding index per plane") {
  const IndexVector twice = winding_index(CDNumber(O), circle(CDNumber(O), 1, e(1), 2));
  REQUIRE(twice.per_plane.size() == 7);
  CHECK(twice.per_plane[0] == 2);
  for (int s = 2; s <= 7; ++s) {
    if (twice.per_plane[s - 1]) CHECK(*twice.per_plane[s - 1] == 0);
  }
  const IndexVector outside = winding_index(real(5), circle(CDNumber(O), 1, e(1)));
  for (const auto& entry : outside.per_plane) {
    if (entry) CHECK(*entry == 0);
  }
  CHECK(winding_index(CDNumber(O), circle(CDNumber(O), 1, e(1), -1)).per_plane[0] == -1);
}

TEST_CASE("A_r index") {
  CHECK(norm(ar_index(CDNumber(O), circle(CDNumber(O), 1, e(3))).value - e(3)) < 1e-6);
  CHECK(norm(ar_index(CDNumber(O), circle(CDNumber(O), 1, e(3), 3)).value - e(3) * 3.0) < 1e-6);
  CHECK(norm(ar_index(real(4), circle(CDNumber(O), 1, e(3))).value) < 1e-6);
}

TEST_CASE("residues") {
  std::mt19937_64 rng(1);
  const CDNumber p = oracle::random_number(rng, O, 0.5);
  const CDNumber m = oracle::random_unit_imaginary(rng, O);
  const Phrase sandwich{O, Expr::product(Expr::product(Expr::constant(e(2)), Expr::power(Variable::z, p, -1)),
                                         Expr::constant(e(3)))};
  CHECK(norm(residue(sandwich, p, m, 0.5, 1e-9).value - mul(mul(e(2), m), e(3))) < 1e-8);
  CHECK(norm(residue(parse("e1*z^3*e5 + 2", O), p, m, 0.5).value) < 1e-6);
  CHECK(norm(residue(pole(p, -2), p, m, 0.5).value) < 1e-6);
}

TEST_CASE("Cauchy integral formula in the plane of the circle") {
  std::mt19937_64 rng(2);
  const CDNumber m = e(1);
  const CDNumber z0 = real(0.3) + e(1) * 0.2;
  const ContourValue v = cauchy_eval(parse("z^2", O), z0, circle(CDNumber(O), 1, m), 1e-9);
  const CDNumber fz = mul(z0, z0);
  CHECK(norm(v.value - mul(fz, m)) < 1e-5);
  REQUIRE(v.recovered);
  CHECK(norm(*v.recovered - fz) < 1e-5);

  const ContourValue one = cauchy_eval(parse("1", O), real(0.1), circle(CDNumber(O), 1, e(5)));
  CHECK(norm(one.value - e(5)) < 1e-6);
  CHECK(norm(*one.recovered - CDNumber::one(O)) < 1e-6);
  CHECK(norm(cauchy_eval(parse("e4*z", O), CDNumber(O), circle(CDNumber(O), 1, e(2))).value) < 1e-6);

  // Left coefficients with a random plane and an in-plane point.
  const CDNumber m2 = oracle::random_unit_imaginary(rng, O);
  const Phrase f{O, Expr::sum({Expr::product(Expr::constant(oracle::random_number(rng, O)), pole(CDNumber(O), 3).root),
                               Expr::constant(oracle::random_number(rng, O))})};
  const CDNumber z = oracle::in_plane(O, {0.2, -0.3}, m2);
  const ContourValue w = cauchy_eval(f, z, circle(CDNumber(O), 1.0, m2), 1e-9);
  CHECK(norm(w.value - mul(evaluate(f, z), m2)) < 1e-6);
}

TEST_CASE("Cauchy formula rejects points outside the circle") {
  CHECK_THROWS_AS(cauchy_eval(parse("z", O), real(2), circle(CDNumber(O), 1, e(1))), Error);
  CHECK_THROWS_AS(cauchy_eval(parse("z", O), real(0.1), Path::polyline({real(0), real(1)})), Error);
}

TEST_CASE("derivative formula") {
  const CDNumber m = e(2);
  const Path psi = circle(CDNumber(O), 1, m);
  CHECK(norm(cauchy_derivative(parse("z^2", O), real(0.4), 1, psi, 1e-9).value - m * 0.8) < 1e-6);
  CHECK(norm(cauchy_derivative(parse("z^2", O), real(0.4), 3, psi, 1e-9).value) < 1e-6);
  CHECK(norm(cauchy_derivative(parse("z^3", O), CDNumber(O), 2, psi, 1e-9).value) < 1e-6);
  const std::complex<double> w(0.1, 0.3);
  const CDNumber z = oracle::in_plane(O, w, m);
  const CDNumber expect = mul(oracle::in_plane(O, 6.0 * w, m), m);
  CHECK(norm(cauchy_derivative(parse("z^3", O), z, 2, psi, 1e-9).value - expect) < 1e-6);
}

TEST_CASE("Taylor coefficients") {
  const CDNumber m = e(3);
  const auto t = taylor_coeffs(parse("z^2", O), CDNumber(O), 4, circle(CDNumber(O), 1, m), 1e-9);
  REQUIRE(t.coeffs.size() == 4);
  const double expect[] = {0, 0, 1, 0};
  for (int k = 0; k < 4; ++k) {
    REQUIRE(t.coeffs[k].recovered);
    CHECK(norm(*t.coeffs[k].recovered - real(expect[k])) < 1e-6);
  }
  const auto one = taylor_coeffs(parse("1", O), CDNumber(O), 3, circle(CDNumber(O), 1, m));
  CHECK(norm(*one.coeffs[0].recovered - real(1)) < 1e-6);
  CHECK(norm(*one.coeffs[1].recovered) < 1e-6);

  const CDNumber a = real(0.5) + m * 0.25;
  const Phrase shifted{O, Expr::sum({pole(a, 3).root, Expr::constant(real(2))})};
  const auto s = taylor_coeffs(shifted, a, 5, circle(a, 1, m), 1e-9);
  const double shifted_expect[] = {2, 0, 0, 1, 0};
  for (int k = 0; k < 5; ++k) CHECK(norm(*s.coeffs[k].recovered - real(shifted_expect[k])) < 1e-6);
  CHECK_THROWS_AS(taylor_coeffs(parse("z", O), real(3), 2, circle(CDNumber(O), 1, m)), Error);
}

TEST_CASE("Laurent coefficients") {
  const CDNumber m = e(6);
  const CDNumber a = real(-0.2) + m * 0.4;
  const Phrase f{O, Expr::sum({pole(a, -1).root, pole(a, 2).root})};
  const auto rep = laurent_coeffs(f, a, -3, 3, 0.5, 1.5, m, 1e-9);
  REQUIRE(rep.coeffs.size() == 7);
  for (int k = -3; k <= 3; ++k) {
    const double expect = (k == -1 || k == 2) ? 1.0 : 0.0;
    CAPTURE(k);
    CHECK(norm(*rep.coeffs[k + 3].recovered - real(expect)) < 1e-6);
  }
  const auto poly = laurent_coeffs(parse("e1*z^3 + 2", O), CDNumber(O), -3, 0, 0.5, 1.0, m);
  for (int i = 0; i < 3; ++i) CHECK(norm(poly.coeffs[i].value) < 1e-6);

  // The residue coefficient of e5 (z - a)^-1 is the residue functional.
  const Phrase g{O, Expr::product(Expr::constant(e(5)), pole(a, -1).root)};
  const auto r = laurent_coeffs(g, a, -1, 0, 0.5, 1.5, m, 1e-9);
  CHECK(norm(r.coeffs[0].value - residue(g, a, m, 1.0, 1e-9).value) < 1e-8);
  CHECK(norm(r.coeffs[0].value - mul(e(5), m)) < 1e-8);

  const Phrase inside{O, Expr::sum({pole(a, -1).root, pole(a + real(1.0), -1).root})};
  CHECK_THROWS_AS(laurent_coeffs(inside, a, -1, 1, 0.5, 1.5, m), Error);
}

TEST_CASE("residue theorem") {
  const CDNumber m = e(4);
  const CDNumber p = real(0.2) + m * 0.1;
  ContourReport one = residue_theorem_check(pole(p, -1), {p}, circle(p, 1, m), 1e-9);
  CHECK(norm(one.lhs - m * (2 * pi)) < 1e-6);
  CHECK(one.diff < 1e-6);

  const CDNumber q = real(-0.3) + m * -0.2;
  const Phrase two{O, Expr::sum({pole(p, -1).root, pole(q, -1).root})};
  ContourReport both = residue_theorem_check(two, {p, q}, circle(CDNumber(O), 1, m), 1e-9);
  CHECK(norm(both.lhs - m * (4 * pi)) < 1e-6);
  CHECK(both.diff < 1e-6);

  const CDNumber far = real(3.0);
  const Phrase mixed{O, Expr::sum({pole(p, -1).root, pole(far, -1).root})};
  ContourReport out = residue_theorem_check(mixed, {p, far}, circle(CDNumber(O), 1, m), 1e-9);
  CHECK(norm(out.rhs - m * (2 * pi)) < 1e-6);
  CHECK(out.diff < 1e-6);
}

TEST_CASE("sum of residues") {
  const CDNumber m = e(1);
  const Phrase dipole{O, Expr::sum({pole(real(1), -1).root, Expr::negate(pole(real(-1), -1).root)})};
  const ContourReport d = sum_residues_check(dipole, {real(1), real(-1)}, m, 1e-9);
  CHECK(norm(d.lhs) < 1e-8);
  CHECK(d.diff < 1e-6);
  const ContourReport sq = sum_residues_check(pole(CDNumber(O), -2), {CDNumber(O)}, m, 1e-9);
  CHECK(norm(sq.lhs) < 1e-8);
  const ContourReport single = sum_residues_check(pole(real(1), -1), {real(1)}, m, 1e-9);
  CHECK(norm(single.lhs - m) < 1e-8);
  CHECK(single.diff < 1e-6);
}

TEST_CASE("argument principle") {
  const CDNumber m = e(2);
  const Path gamma = circle(CDNumber(O), 1, m);
  const ContourReport cube = argument_principle(parse("z^3", O), gamma, {{CDNumber(O), 3}}, 1e-8);
  CHECK(norm(cube.lhs - m * 3.0) < 1e-6);
  CHECK(norm(cube.rhs - m * 3.0) < 1e-6);
  const CDNumber c = real(0.3) + m * 0.2;
  const Phrase shift{O, Expr::sum({pole(CDNumber(O), 1).root, Expr::constant(-c)})};
  CHECK(norm(argument_principle(shift, gamma, {{c, 1}}, 1e-8).lhs - m) < 1e-6);
  const Phrase away{O, Expr::sum({pole(CDNumber(O), 1).root, Expr::constant(real(-3))})};
  CHECK(norm(argument_principle(away, gamma, {}, 1e-8).lhs) < 1e-6);
}

TEST_CASE("root finding") {
  const AlgebraLevel H(2);
  const RootResult unit = find_root(parse("z^2 + 1", H), CDNumber::unit(H, 1, 0.9));
  CHECK(norm(unit.root) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(unit.root.real_part()) < 1e-9);
  const RootResult one = find_root(parse("z^2 - 2*z + 1", H), CDNumber(H));
  CHECK(norm(one.root - CDNumber::one(H)) < 1e-4);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const CDNumber c = oracle::random_number(rng, O);
    const Phrase p{O, Expr::sum({pole(CDNumber(O), 3).root, Expr::constant(-c)})};
    const RootResult r = find_root(p, CDNumber(O), 200, 1e-10, t);
    CHECK(norm(evaluate(p, r.root)) <= 1e-8);
    CHECK(norm(r.root) == doctest::Approx(std::cbrt(norm(c))).epsilon(1e-8));
  }
  CHECK_THROWS_AS(find_root(parse("zc + 1", O), CDNumber(O)), Error);
}
