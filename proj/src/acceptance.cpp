#include "cdalg/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "cdalg/basis_table.hpp"
#include "cdalg/cli.hpp"
#include "cdalg/contour.hpp"
#include "cdalg/diffcheck.hpp"
#include "cdalg/structure.hpp"
#include "cdalg/transcendental.hpp"

namespace cdalg {

namespace {

using Clock = std::chrono::steady_clock;
using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double gauss() { return gauss_(eng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  CDNumber number(AlgebraLevel level, double scale = 1.0) {
    CDNumber c(level);
    for (int s = 0; s < c.dim(); ++s) c[s] = scale * gauss();
    return c;
  }
  /// Random direction with norm uniform in [lo, hi].
  CDNumber with_norm(AlgebraLevel level, double lo, double hi) {
    CDNumber c = number(level);
    return c * (uniform(lo, hi) / norm(c));
  }
  CDNumber unit_imaginary(AlgebraLevel level) {
    CDNumber c = number(level).imag();
    return c / norm(c);
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// x + y M.
CDNumber plane_point(AlgebraLevel level, Complex w, const CDNumber& m) {
  return CDNumber::real(level, w.real()) + m * w.imag();
}

Expr zpow(AlgebraLevel, int k, const CDNumber& center) {
  return Expr::power(Variable::z, center, k);
}
Expr zpow(AlgebraLevel level, int k) { return zpow(level, k, CDNumber(level)); }

/// Random polynomial phrase mixing sandwich words and products of words.
Phrase random_polynomial(Rng& rng, AlgebraLevel level) {
  std::vector<Expr> terms{Expr::constant(rng.number(level))};
  for (int i = 0; i < 3; ++i) {
    const auto c = [&] { return Expr::constant(rng.number(level, 0.5)); };
    switch (rng.integer(0, 3)) {
      case 0:
        terms.push_back(Expr::product(Expr::product(c(), zpow(level, rng.integer(1, 4))), c()));
        break;
      case 1:
        terms.push_back(Expr::product(c(), Expr::product(zpow(level, rng.integer(1, 4)), c())));
        break;
      case 2:
        terms.push_back(Expr::product(Expr::product(c(), zpow(level, 1)),
                                      Expr::product(c(), zpow(level, 2))));
        break;
      default:
        terms.push_back(Expr::product(Expr::product(Expr::product(c(), zpow(level, 2)), c()),
                                      zpow(level, 1)));
        break;
    }
  }
  return Phrase{level, Expr::sum(std::move(terms))};
}

/// sum_k (a_k z^k), k = 0..degree.
Phrase left_coefficient_polynomial(Rng& rng, AlgebraLevel level, int degree) {
  std::vector<Expr> terms{Expr::constant(rng.number(level, 0.7))};
  for (int k = 1; k <= degree; ++k) {
    terms.push_back(Expr::product(Expr::constant(rng.number(level, 0.7)), zpow(level, k)));
  }
  return Phrase{level, Expr::sum(std::move(terms))};
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
  void note(const std::string& s) { detail << s << "; "; }
};

using CriterionFn = std::function<void(Verdict&, Rng&, const AcceptanceOptions&)>;

// --- 1 ---------------------------------------------------------------------
void algebraic_identities(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int pairs = opt.reduced ? 100 : 1000;
  double worst = 0.0;
  for (int r = 1; r <= 6; ++r) {
    const AlgebraLevel level(r);
    for (int i = 0; i < pairs; ++i) {
      const CDNumber a = rng.with_norm(level, 0.5, 2.0);
      const CDNumber b = rng.with_norm(level, 0.5, 2.0);
      const double ab = norm(a) * norm(b);
      worst = std::max(worst, norm(conj(mul(a, b)) - mul(conj(b), conj(a))) / ab);
      worst = std::max(worst, norm((a + conj(a)).imag()) / norm(a));
      worst = std::max(worst,
                       norm(mul(a, conj(a)) - CDNumber::real(level, squared_norm(a))) /
                           squared_norm(a));
      if (r >= 2) worst = std::max(worst, norm(conj_via_generators(a) - conj(a)) / norm(a));
      auto power_check = [&](int m, int n) {
        const double scale = std::pow(norm(a), m + n);
        worst = std::max(worst,
                         norm(mul(pow_int(a, m), pow_int(a, n)) - pow_int(a, m + n)) / scale);
      };
      if (i < 3) {
        for (int m = -3; m <= 8; ++m) {
          for (int n = -3; n <= 8; ++n) power_check(m, n);
        }
      } else {
        power_check(rng.integer(-3, 8), rng.integer(-3, 8));
      }
    }
  }
  v.note("max relative error " + sci(worst));
  v.require(worst <= 1e-10, "max relative error <= 1e-10");
}

// --- 2 ---------------------------------------------------------------------
void division_dichotomy(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int pairs = opt.reduced ? 100 : 1000;
  double worst = 0.0;
  for (int r = 1; r <= 3; ++r) {
    const AlgebraLevel level(r);
    for (int i = 0; i < pairs; ++i) {
      const CDNumber a = rng.with_norm(level, 0.5, 2.0);
      const CDNumber b = rng.with_norm(level, 0.5, 2.0);
      worst = std::max(worst, std::abs(norm(mul(a, b)) - norm(a) * norm(b)) / (norm(a) * norm(b)));
    }
    v.require(!find_zero_divisor(level, 1'000'000), "no zero divisor for r <= 3");
  }
  v.note("r<=3 norm defect " + sci(worst));
  v.require(worst <= 1e-12, "|ab| = |a||b| to 1e-12 for r <= 3");
  const auto t0 = Clock::now();
  const auto pair = find_zero_divisor(AlgebraLevel(4), 1'000'000);
  const double elapsed = seconds_since(t0);
  v.require(pair.has_value(), "zero divisor found for r = 4");
  if (pair) {
    const double ab = norm(mul(pair->a, pair->b));
    const double nn = norm(pair->a) * norm(pair->b);
    v.note("r=4 |ab| " + sci(ab) + ", |a||b| " + sci(nn) + ", " + sci(elapsed) + " s");
    v.require(ab <= 1e-15, "|ab| = 0");
    v.require(std::abs(nn - 2.0) <= 1e-12, "|a||b| = 2");
  }
  v.require(elapsed < 1.0, "search under 1 s");
}

// --- 3 ---------------------------------------------------------------------
void alternativity_dichotomy(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int pairs = opt.reduced ? 100 : 1000;
  const AlgebraLevel level(3);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const CDNumber x = rng.with_norm(level, 0.5, 2.0);
    const CDNumber y = rng.with_norm(level, 0.5, 2.0);
    const double scale = norm(x) * norm(y) * std::max(norm(x), norm(y));
    worst = std::max(worst, alternativity_residual(x, y) / scale);
  }
  v.note("r=3 relative residual " + sci(worst));
  v.require(worst <= 1e-12, "alternative laws to 1e-12 for r = 3");
  const auto w = find_alternativity_violation(AlgebraLevel(4), 1'000'000, 0.1);
  v.require(w.has_value() && w->residual > 0.1, "violating pair for r = 4");
  if (w) v.note("r=4 residual " + sci(w->residual));
}

// --- 4 ---------------------------------------------------------------------
CDNumber series_oracle(const CDNumber& z, int terms) {
  CDNumber sum = CDNumber::one(z.level());
  CDNumber term = sum;
  for (int k = 1; k < terms; ++k) {
    term = mul(term, z) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

void exp_suite(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int samples = opt.reduced ? 50 : 300;
  double series = 0.0, modulus = 0.0, period = 0.0, inverse = 0.0;
  for (int r : {1, 2, 3, 4}) {
    const AlgebraLevel level(r);
    for (int i = 0; i < samples; ++i) {
      const CDNumber z = rng.with_norm(level, 0.0, 3.0);
      const CDNumber e = exp(z);
      series = std::max(series, norm(e - series_oracle(z, 40)) / std::max(1.0, norm(e)));
      modulus = std::max(modulus, std::abs(norm(e) - std::exp(z.real_part())) /
                                      std::exp(z.real_part()));
      if (r >= 2) {
        const CDNumber w = rng.with_norm(level, 0.2, 3.0).imag();
        for (int n = 1; n <= 3; ++n) {
          const CDNumber shifted = w * (1.0 + kTwoPi * n / norm(w));
          period = std::max(period, norm(exp(shifted) - exp(w)));
        }
      }
      CDNumber off = rng.with_norm(level, 0.1, 3.0);
      if (r >= 1 && norm(off.imag()) < 0.1 * norm(off)) off[1] += 0.5;
      inverse = std::max(inverse, norm(exp(ln_principal(off)) - off) / norm(off));
    }
  }
  v.note("series " + sci(series) + ", modulus " + sci(modulus) + ", period " + sci(period) +
         ", exp(ln) " + sci(inverse));
  v.require(series <= 1e-10, "exp vs 40-term series to 1e-10");
  v.require(modulus <= 1e-12, "|exp z| = e^{Re z} to 1e-12");
  v.require(period <= 1e-10, "periodicity to 1e-10");
  v.require(inverse <= 1e-12, "exp(ln z) = z to 1e-12");
}

// --- 5 ---------------------------------------------------------------------
void logarithmic_loop(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const auto t0 = Clock::now();
  const int directions = opt.reduced ? 2 : 8;
  double worst = 0.0, spread = 0.0;
  for (int r : {2, 3, 4}) {
    const AlgebraLevel level(r);
    const Phrase f{level, zpow(level, -1)};
    for (int d = 0; d < directions; ++d) {
      const CDNumber m = rng.unit_imaginary(level);
      for (int n = 1; n <= 3; ++n) {
        std::vector<CDNumber> values;
        for (double rho : {0.5, 2.0}) {
          const auto q = line_integral(f, Path::circle(CDNumber(level), rho, m, n), 1e-8);
          worst = std::max(worst, norm(q.value - m * (kTwoPi * n)));
          values.push_back(q.value);
        }
        spread = std::max(spread, norm(values[0] - values[1]));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  v.note("max |I - 2 pi n M| " + sci(worst) + ", rho spread " + sci(spread) + ", " +
         sci(elapsed) + " s");
  v.require(worst <= 1e-5, "loop integral = 2 pi n M to 1e-5");
  v.require(spread <= 2e-5, "radius independence to 2e-5");
  v.require(elapsed < 30.0, "runtime < 30 s");
}

// --- 6 ---------------------------------------------------------------------
void cauchy_vanishing(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int count = opt.reduced ? 5 : 20;
  const AlgebraLevel level(3);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const Phrase f = random_polynomial(rng, level);
    const CDNumber c = rng.number(level, 0.5);
    const Path circle = Path::circle(c, rng.uniform(0.5, 1.5), rng.unit_imaginary(level), 1.0);
    CDNumber u = rng.number(level);
    u = u / norm(u);
    CDNumber w = rng.number(level);
    w = w - u * dot(u, w);
    w = w / norm(w);
    const double side = rng.uniform(0.5, 1.5);
    const Path square = Path::polyline({c, c + u * side, c + (u + w) * side, c + w * side, c});
    worst = std::max(worst, norm(line_integral(f, circle, 1e-9).value));
    worst = std::max(worst, norm(line_integral(f, square, 1e-9).value));
  }
  v.note("max |loop integral| " + sci(worst));
  v.require(worst <= 1e-6, "closed-loop integrals vanish to 1e-6");
}

// --- 7 ---------------------------------------------------------------------
void cauchy_formula(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int count = opt.reduced ? 3 : 10;
  const AlgebraLevel level(3);
  double formula = 0.0, recovery = 0.0;
  for (int i = 0; i < count; ++i) {
    const Phrase f = left_coefficient_polynomial(rng, level, rng.integer(1, 4));
    const CDNumber m = rng.unit_imaginary(level);
    const CDNumber c = plane_point(level, {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}, m);
    const Path psi = Path::circle(c, 1.0, m, 1.0);
    const CDNumber z =
        c + plane_point(level, std::polar(rng.uniform(0.0, 0.6), rng.uniform(0.0, kTwoPi)), m);
    const ContourValue cv = cauchy_eval(f, z, psi, 1e-9);
    const CDNumber fz = evaluate(f, z);
    const double scale = 1.0 + norm(fz);
    formula = std::max(formula, norm(cv.value - mul(fz, m)) / scale);
    recovery = cv.recovered ? std::max(recovery, norm(*cv.recovered - fz) / scale)
                            : std::numeric_limits<double>::infinity();
  }
  v.note("formula " + sci(formula) + ", M* recovery " + sci(recovery));
  v.require(formula <= 1e-5, "(2 pi)^-1 loop integral = f(z)M");
  v.require(recovery <= 1e-5, "M* recovery reproduces f(z)");
}

// --- 8 ---------------------------------------------------------------------
void derivative_formula(Verdict& v, Rng& rng, const AcceptanceOptions&) {
  const AlgebraLevel level(3);
  double worst = 0.0;
  for (int n : {2, 3}) {
    const Phrase f{level, zpow(level, n)};
    for (int k : {1, 2}) {
      for (int trial = 0; trial < 2; ++trial) {
        const CDNumber m = rng.unit_imaginary(level);
        const Path psi = Path::circle(CDNumber(level), 1.0, m, 1.0);
        const Complex w = std::polar(rng.uniform(0.0, 0.5), rng.uniform(0.0, kTwoPi));
        // k-th derivative of w^n in the complex plane R + R M.
        double falling = 1.0;
        for (int j = 0; j < k; ++j) falling *= n - j;
        const Complex oracle = falling * std::pow(w, n - k);
        const ContourValue cv = cauchy_derivative(f, plane_point(level, w, m), k, psi, 1e-9);
        worst = std::max(worst, norm(cv.value - mul(plane_point(level, oracle, m), m)));
      }
    }
  }
  v.note("max error " + sci(worst));
  v.require(worst <= 1e-4, "k!(2 pi)^-1 loop integral = f^(k)(z)M to 1e-4");
}

// --- 9 ---------------------------------------------------------------------
void residue_calculus(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const AlgebraLevel level(3);
  const int count = opt.reduced ? 3 : 10;
  double sandwich = 0.0;
  for (int i = 0; i < count; ++i) {
    const CDNumber b = rng.number(level), c = rng.number(level), p = rng.number(level, 0.5);
    const CDNumber m = rng.unit_imaginary(level);
    const Phrase f{level, Expr::product(Expr::product(Expr::constant(b), zpow(level, -1, p)),
                                        Expr::constant(c))};
    const auto res = residue(f, p, m, rng.uniform(0.2, 1.0), 1e-9);
    sandwich = std::max(sandwich, norm(res.value - mul(mul(b, m), c)));
  }
  v.note("sandwich residue " + sci(sandwich));
  v.require(sandwich <= 1e-5, "res {b (z-p)^-1 c} M = {b M c} to 1e-5");

  // Two poles, both inside or one outside; circle and square contours.
  double theorem = 0.0;
  const int configs = opt.reduced ? 2 : 4;
  for (int i = 0; i < configs; ++i) {
    const CDNumber m = rng.unit_imaginary(level);
    const CDNumber p1 = plane_point(level, std::polar(rng.uniform(0.1, 0.6), rng.uniform(0.0, kTwoPi)), m);
    const double outer = (i % 2 == 0) ? rng.uniform(0.1, 0.6) : rng.uniform(2.0, 3.0);
    const CDNumber p2 = plane_point(level, std::polar(outer, rng.uniform(0.0, kTwoPi)), m);
    const Phrase f{level,
                   Expr::sum({Expr::product(Expr::constant(rng.number(level)), zpow(level, -1, p1)),
                              Expr::product(Expr::product(Expr::constant(rng.number(level)),
                                                          zpow(level, -1, p2)),
                                            Expr::constant(rng.number(level))),
                              zpow(level, -2, p1)})};
    const Path psi = i < 2 ? Path::circle(CDNumber(level), 1.2, m, 1.0)
                           : Path::polyline({plane_point(level, {-1.2, -1.2}, m),
                                             plane_point(level, {1.2, -1.2}, m),
                                             plane_point(level, {1.2, 1.2}, m),
                                             plane_point(level, {-1.2, 1.2}, m),
                                             plane_point(level, {-1.2, -1.2}, m)});
    const ContourReport rep = residue_theorem_check(f, {p1, p2}, psi, 1e-8);
    theorem = std::max(theorem, rep.diff);
  }
  v.note("residue theorem diff " + sci(theorem));
  v.require(theorem <= 1e-4, "residue theorem LHS = RHS to 1e-4");

  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const CDNumber m = rng.unit_imaginary(level);
    const CDNumber p1 = plane_point(level, {rng.uniform(-2, 2), rng.uniform(-2, 2)}, m);
    const CDNumber p2 = plane_point(level, {rng.uniform(-2, 2), rng.uniform(-2, 2)}, m);
    const Phrase f{level,
                   Expr::sum({Expr::product(Expr::product(Expr::constant(rng.number(level)),
                                                          zpow(level, -1, p1)),
                                            Expr::constant(rng.number(level))),
                              Expr::product(Expr::constant(rng.number(level)), zpow(level, -1, p2)),
                              zpow(level, -3, p2)})};
    total = std::max(total, sum_residues_check(f, {p1, p2}, m, 1e-9).diff);
  }
  v.note("total residue " + sci(total));
  v.require(total <= 1e-3, "finite residues + residue at infinity = 0 to 1e-3");
}

// --- 10 --------------------------------------------------------------------
void argument_principle_check(Verdict& v, Rng& rng, const AcceptanceOptions&) {
  double worst = 0.0;
  for (int r : {2, 3}) {
    const AlgebraLevel level(r);
    for (int n = 1; n <= 3; ++n) {
      const CDNumber m = rng.unit_imaginary(level);
      const Phrase f{level, zpow(level, n)};
      const ContourReport rep = argument_principle(f, Path::circle(CDNumber(level), 1.0, m, 1.0),
                                                   {{CDNumber(level), n}}, 1e-7);
      worst = std::max({worst, norm(rep.lhs - m * static_cast<double>(n)), rep.diff});
    }
  }
  v.note("max error " + sci(worst));
  v.require(worst <= 1e-4, "index of 0 under z^n o gamma = n M = divisor sum");
}

// --- 11 --------------------------------------------------------------------
double binomial(int n, int k) {
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
  return b;
}

void coefficient_extraction(Verdict& v, Rng& rng, const AcceptanceOptions&) {
  double taylor = 0.0, laurent = 0.0;
  for (int r : {2, 3, 4}) {
    const AlgebraLevel level(r);
    const CDNumber m = rng.unit_imaginary(level);

    // Taylor about a point a of the plane: d_j = sum_k c_k C(k, j) a^{k-j}.
    std::vector<double> c(6);
    std::vector<Expr> terms;
    for (int k = 0; k <= 5; ++k) {
      c[k] = rng.gauss();
      terms.push_back(Expr::product(Expr::constant(CDNumber::real(level, c[k])), zpow(level, k)));
    }
    const Complex a(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
    const CDNumber a_num = plane_point(level, a, m);
    const auto tc = taylor_coeffs(Phrase{level, Expr::sum(terms)}, a_num, 7,
                                  Path::circle(a_num, 1.0, m, 1.0), 1e-9);
    for (int j = 0; j <= 6; ++j) {
      Complex d = 0.0;
      for (int k = j; k <= 5; ++k) d += c[k] * binomial(k, j) * std::pow(a, k - j);
      const auto& got = tc.coeffs[j].recovered;
      taylor = got ? std::max(taylor, norm(*got - plane_point(level, d, m)) / (1.0 + std::abs(d)))
                   : std::numeric_limits<double>::infinity();
    }

    // Laurent about a of sum_{k=-3..5} c_k (z - a)^k on 0.5 <= |z - a| <= 1.5;
    // coefficients outside -3..5 vanish.
    std::vector<double> lc(9);
    std::vector<Expr> lterms;
    for (int k = -3; k <= 5; ++k) {
      lc[k + 3] = rng.gauss();
      lterms.push_back(
          Expr::product(Expr::constant(CDNumber::real(level, lc[k + 3])), zpow(level, k, a_num)));
    }
    const auto rep = laurent_coeffs(Phrase{level, Expr::sum(lterms)}, a_num, -4, 6, 0.5, 1.5, m,
                                    1e-9);
    for (int k = -4; k <= 6; ++k) {
      const double expect = (k >= -3 && k <= 5) ? lc[k + 3] : 0.0;
      const auto& got = rep.coeffs[k + 4].recovered;
      laurent = got ? std::max(laurent, norm(*got - CDNumber::real(level, expect)) /
                                            (1.0 + std::abs(expect)))
                    : std::numeric_limits<double>::infinity();
    }
  }
  v.note("taylor " + sci(taylor) + ", laurent " + sci(laurent));
  v.require(taylor <= 1e-5, "Taylor coefficients match the direct expansion");
  v.require(laurent <= 1e-5, "Laurent coefficients match the direct expansion");
}

// --- 12 --------------------------------------------------------------------
void root_existence(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int count = opt.reduced ? 5 : 20;
  double worst = 0.0;
  int restarts = 0;
  for (int r : {2, 3}) {
    const AlgebraLevel level(r);
    for (int i = 0; i < count; ++i) {
      const Phrase p{level, Expr::sum({zpow(level, 3),
                                       Expr::product(Expr::constant(rng.number(level)), zpow(level, 2)),
                                       Expr::product(Expr::constant(rng.number(level)), zpow(level, 1)),
                                       Expr::constant(rng.number(level))})};
      try {
        const RootResult root = find_root(p, CDNumber(level), 200, 1e-10, opt.seed + i);
        worst = std::max(worst, norm(evaluate(p, root.root)));
        restarts = std::max(restarts, root.restarts);
      } catch (const Error& e) {
        worst = std::numeric_limits<double>::infinity();
        v.note(std::string("r=") + std::to_string(r) + " cubic " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  v.note("max |P(z*)| " + sci(worst) + ", max restarts " + std::to_string(restarts));
  v.require(worst <= 1e-8, "|P(z*)| <= 1e-8 for every cubic");
}

// --- 13 --------------------------------------------------------------------
void differentiability_checks(Verdict& v, Rng& rng, const AcceptanceOptions& opt) {
  const int count = opt.reduced ? 6 : 20;
  double cr_worst = 0.0, harmonic_worst = 0.0, zbar_pure = 0.0;
  std::vector<Phrase> pure;
  for (int i = 0; i < count; ++i) {
    const AlgebraLevel level(i % 2 == 0 ? 2 : 3);
    const Phrase f = right_superlinear_polynomial(level, rng.integer(1, 4), opt.seed + 100 + i);
    const CDNumber z = rng.number(level, 0.5);
    const auto sample = RealFieldSample::from_phrase(f);
    cr_worst = std::max(cr_worst, cr_check(sample, z).max_residual);
    harmonic_worst = std::max(harmonic_worst, harmonic_check(sample, z, 1e-3).max_residual);
    pure.push_back(f);
    pure.push_back(random_polynomial(rng, level));
  }
  v.note("cr " + sci(cr_worst) + ", harmonic " + sci(harmonic_worst));
  v.require(cr_worst <= kDefaultCheckThreshold, "cr_check passes on right-superlinear polynomials");
  v.require(harmonic_worst <= 10 * kDefaultCheckThreshold, "harmonic_check passes on them");

  for (int r : {2, 3}) {
    const AlgebraLevel level(r);
    const auto rep = cr_check(RealFieldSample::from_phrase(parse("zc", level)), rng.number(level));
    v.require(!rep.pass && std::abs(rep.max_residual - 2.0) < 1e-6, "cr_check fails on zc");
  }

  for (const Phrase& f : pure) {
    const auto rep = zbar_check(RealFieldSample::from_phrase(f), rng.number(f.level, 0.5));
    zbar_pure = std::max(zbar_pure, rep.max_residual);
  }
  v.require(zbar_pure <= kDefaultCheckThreshold, "zbar_check passes on pure-z phrases");
  double zbar_mixed = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const AlgebraLevel level(i % 2 == 0 ? 2 : 3);
    const Phrase base = random_polynomial(rng, level);
    const Expr zc = Expr::power(Variable::zc, CDNumber(level), rng.integer(1, 2));
    const Expr factor = i % 3 == 0 ? Expr::product(Expr::constant(rng.number(level)), zc)
                      : i % 3 == 1 ? Expr::product(zpow(level, 1), zc)
                                   : Expr::product(zc, Expr::constant(rng.number(level)));
    const Phrase f{level, Expr::sum({base.root, factor})};
    zbar_mixed = std::min(zbar_mixed,
                          zbar_check(RealFieldSample::from_phrase(f), rng.number(level, 0.5)).max_residual);
  }
  v.note("zbar pure " + sci(zbar_pure) + ", min zbar with zc " + sci(zbar_mixed));
  v.require(zbar_mixed > kDefaultCheckThreshold, "zbar_check fails on every phrase with zc");

  // Truncation order: residual error against the exact differential.
  const AlgebraLevel level(3);
  const Phrase f = parse("e2*z^3 + z^2", level);
  const CDNumber z = rng.number(level, 0.5);
  const CDNumber d1 = derivative_apply(f, z, CDNumber::one(level));
  std::vector<double> exact;
  for (int q = 1; q < level.dim(); ++q) {
    const CDNumber e = CDNumber::unit(level, q);
    exact.push_back(norm(d1 - mul(derivative_apply(f, z, e), conj(e))));
  }
  auto error_at = [&](double h) {
    RealFieldSample s = RealFieldSample::from_phrase(f, h);
    const CRReport rep = cr_check(s, z, 1.0);
    double err = 0.0;
    for (std::size_t q = 0; q < exact.size(); ++q) {
      err = std::max(err, std::abs(rep.residuals[q].second - exact[q]));
    }
    return err;
  };
  const double ratio = error_at(2e-2) / error_at(1e-2);
  v.note("step-halving error ratio " + sci(ratio));
  v.require(ratio > 3.0 && ratio < 5.0, "residual error scales as step^2");
}

// --- 14 --------------------------------------------------------------------
void cli_determinism(Verdict& v, Rng&, const AcceptanceOptions& opt) {
  const Json circle = {{"kind", "circle"},
                       {"center", {0, 0, 0, 0, 0, 0, 0, 0}},
                       {"radius", 1},
                       {"direction", {0, 1, 0, 0, 0, 0, 0, 0}},
                       {"turns", 1}};
  const std::vector<Json> jobs = {
      {{"command", "integrate"}, {"level", 3}, {"expression", "z^-1"}, {"path", circle}, {"tol", 1e-6}},
      {{"command", "eval"}, {"level", 2}, {"expression", "e1*e2"}},
      {{"command", "zerodiv"}, {"level", 3}},
      {{"command", "roots"}, {"level", 3}, {"expression", "z^3 + e1*z + e2"}, {"seed", 7}},
      {{"command", "crcheck"}, {"level", 2}, {"expression", "zc"}, {"point", "0.3 + 0.2*e1"}},
      {{"command", "eval"}, {"level", 9}, {"expression", "z"}},
  };
  std::vector<RunOutcome> first;
  for (const auto& job : jobs) {
    const RunOutcome a = run_job(job);
    const RunOutcome b = run_job(job);
    v.require(dump_report(a.report) == dump_report(b.report),
              "byte-identical report for " + job["command"].get<std::string>());
    first.push_back(a);
  }
  const Json& integral = first[0].report["result"]["value"];
  v.require(first[0].exit_code == 0 && std::abs(integral[1].get<double>() - kTwoPi) < 1e-5,
            "integrate z^-1 gives 2 pi e1");
  v.require(first[1].exit_code == 0 && first[1].report["result"]["value"] == Json({0, 0, 0, 1}),
            "eval e1*e2 = e3 at r = 2");
  v.require(first[2].exit_code == 0 && first[2].report["result"]["found"] == false,
            "zerodiv finds nothing at r = 3");
  v.require(first[3].exit_code == 0, "roots job succeeds");
  v.require(first[4].exit_code == 0 && first[4].report["result"]["pass"] == false,
            "crcheck job reports the zc failure");
  v.require(first[5].exit_code == 1 && first[5].report.contains("error"),
            "level cap exceeded is a usage error");

  if (opt.nested_selftest) {
    AcceptanceOptions reduced = opt;
    reduced.reduced = true;
    reduced.nested_selftest = false;
    const auto t0 = Clock::now();
    const auto results = run_acceptance(reduced);
    const double elapsed = seconds_since(t0);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    v.note("selftest " + sci(elapsed) + " s");
    v.require(all, "selftest all PASS");
    v.require(elapsed < 60.0, "selftest under 60 s");
  }
}

struct Criterion {
  int id;
  const char* name;
  CriterionFn fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "algebraic identities", algebraic_identities},
      {2, "division-structure dichotomy", division_dichotomy},
      {3, "alternativity dichotomy", alternativity_dichotomy},
      {4, "exp suite", exp_suite},
      {5, "logarithmic loop integral", logarithmic_loop},
      {6, "Cauchy vanishing", cauchy_vanishing},
      {7, "Cauchy integral formula", cauchy_formula},
      {8, "derivative formula", derivative_formula},
      {9, "residue calculus", residue_calculus},
      {10, "argument principle", argument_principle_check},
      {11, "coefficient extraction", coefficient_extraction},
      {12, "root existence", root_existence},
      {13, "CR and harmonicity checks", differentiability_checks},
      {14, "CLI determinism and selftest", cli_determinism},
  };
  return list;
}

class SignFaultGuard {
 public:
  explicit SignFaultGuard(bool enable) : previous_(debug::basis_sign_fault()) {
    debug::set_basis_sign_fault(enable);
  }
  ~SignFaultGuard() { debug::set_basis_sign_fault(previous_); }
  SignFaultGuard(const SignFaultGuard&) = delete;
  SignFaultGuard& operator=(const SignFaultGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  SignFaultGuard guard(options.inject_sign_fault);
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    Rng rng(options.seed * 1000003u + static_cast<std::uint64_t>(c.id));
    Verdict verdict;
    const auto t0 = Clock::now();
    try {
      c.fn(verdict, rng, options);
    } catch (const std::exception& e) {
      verdict.pass = false;
      verdict.detail << "threw: " << e.what();
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.pass = verdict.pass;
    r.detail = verdict.detail.str();
    r.seconds = seconds_since(t0);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_results(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2d  %s  %-30s %7.2f s  ", r.id,
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    os << head << r.detail << "\n";
  }
  return os.str();
}

}  // namespace cdalg
