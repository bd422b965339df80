#include "cdalg/diffcheck.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace cdalg {

namespace {

std::string basis_key(int s) { return "e" + std::to_string(s); }

double step_for(const RealFieldSample& F, const CDNumber& z, double scale) {
  if (F.step < 0.0 || !std::isfinite(F.step)) {
    throw Error(ErrorKind::domain, "finite-difference step must be positive");
  }
  return F.step > 0.0 ? F.step : scale * (1.0 + norm(z));
}

template <typename Fn>
CDNumber guarded(Fn&& fn) {
  try {
    CDNumber v = fn();
    if (!v.coeffs().allFinite()) {
      throw Error(ErrorKind::domain, "non-finite value inside the stencil");
    }
    return v;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::domain) throw;
    throw Error(ErrorKind::domain, std::string("evaluation failed inside the stencil: ") + e.what());
  }
}

void require_field(const RealFieldSample& F, const CDNumber& z) {
  if (!F.F) throw Error(ErrorKind::domain, "field sample has no evaluator");
  if (!(z.level() == F.level)) {
    throw Error(ErrorKind::level_mismatch, "point and field live in different algebras");
  }
}

CDNumber central(const RealFieldSample& F, const CDNumber& z, int s, double h) {
  const CDNumber e = CDNumber::unit(F.level, s, h);
  const CDNumber plus = guarded([&] { return F.F(z + e); });
  const CDNumber minus = guarded([&] { return F.F(z - e); });
  return (plus - minus) / (2.0 * h);
}

void finish(CRReport& r, double threshold) {
  if (!(threshold >= 0.0)) throw Error(ErrorKind::domain, "threshold must be nonnegative");
  r.threshold = threshold;
  for (const auto& [key, value] : r.residuals) r.max_residual = std::max(r.max_residual, value);
  r.pass = r.max_residual <= threshold;
}

}  // namespace

RealFieldSample RealFieldSample::from_phrase(const Phrase& f, double step) {
  RealFieldSample out;
  out.level = f.level;
  out.F = [f](const CDNumber& z) { return evaluate(f, z); };
  out.F2 = [f](const CDNumber& z1, const CDNumber& z2) { return evaluate2(f, z1, z2); };
  out.step = step;
  return out;
}

CRReport cr_check(const RealFieldSample& F, const CDNumber& z, double threshold) {
  require_field(F, z);
  const double h = step_for(F, z, 1e-5);
  const CDNumber d1 = central(F, z, 0, h);
  CRReport r;
  for (int q = 1; q < z.dim(); ++q) {
    const CDNumber dq = central(F, z, q, h);
    const CDNumber rhs = mul(dq, conj(CDNumber::unit(F.level, q)));
    r.residuals.emplace_back(basis_key(q), norm(d1 - rhs));
  }
  finish(r, threshold);
  return r;
}

CRReport harmonic_check(const RealFieldSample& F, const CDNumber& z, double threshold) {
  require_field(F, z);
  const double h = step_for(F, z, 1e-3);
  const int n = z.dim();
  const CDNumber f0 = guarded([&] { return F.F(z); });
  std::vector<CDNumber> second;
  second.reserve(n);
  for (int s = 0; s < n; ++s) {
    const CDNumber e = CDNumber::unit(F.level, s, h);
    const CDNumber plus = guarded([&] { return F.F(z + e); });
    const CDNumber minus = guarded([&] { return F.F(z - e); });
    second.push_back((plus - f0 * 2.0 + minus) / (h * h));
  }
  CRReport r;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const CDNumber lap = second[p] + second[q];
      r.residuals.emplace_back(basis_key(p) + "," + basis_key(q),
                               lap.coeffs().cwiseAbs().maxCoeff());
    }
  }
  finish(r, threshold);
  return r;
}

CRReport zbar_check(const RealFieldSample& F, const CDNumber& z, double threshold) {
  require_field(F, z);
  if (!F.F2) {
    throw Error(ErrorKind::domain, "zbar_check needs the (z, z~) form of the function");
  }
  const double h = step_for(F, z, 1e-5);
  const CDNumber zt = conj(z);
  const AlgebraLevel level = F.level;
  CRReport r;
  for (int j = 0; 2 * j + 1 < z.dim(); ++j) {
    const CDNumber s = CDNumber::unit(level, 2 * j);
    const CDNumber p = CDNumber::unit(level, 2 * j + 1);
    double worst = 0.0;
    for (const CDNumber& dir : {s, mul(s, mul(conj(s), p))}) {
      const CDNumber k = conj(dir) * h;
      const CDNumber plus = guarded([&] { return F.F2(z, zt + k); });
      const CDNumber minus = guarded([&] { return F.F2(z, zt - k); });
      worst = std::max(worst, norm(plus - minus) / (2.0 * h));
    }
    r.residuals.emplace_back("pair" + std::to_string(j), worst);
  }
  finish(r, threshold);
  return r;
}

Phrase right_superlinear_polynomial(AlgebraLevel level, int degree, std::uint64_t seed) {
  if (degree < 1 || degree > 8) throw Error(ErrorKind::domain, "degree must be in 1..8");
  const int n = level.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_number = [&] {
    CDNumber c(level);
    for (int s = 0; s < n; ++s) c[s] = gauss(rng);
    return c;
  };

  // Unknown x(k, i, j) multiplies the word (e_i z^k) e_j.
  const int unknowns = degree * n * n;
  auto column = [&](int k, int i, int j) { return ((k - 1) * n + i) * n + j; };
  const int samples = (2 * unknowns + n - 1) / n + 4;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(unknowns, unknowns);
  for (int t = 0; t < samples; ++t) {
    const CDNumber z = random_number() * 0.5;
    const CDNumber h = random_number();
    const CDNumber lambda = random_number();
    const CDNumber h_lambda = mul(h, lambda);
    Eigen::MatrixXd block(n, unknowns);
    for (int k = 1; k <= degree; ++k) {
      const Phrase word{level, Expr::power(Variable::z, CDNumber(level), k)};
      const CDNumber d1 = derivative_apply(word, z, h_lambda);
      const CDNumber d2 = derivative_apply(word, z, h);
      for (int i = 0; i < n; ++i) {
        const CDNumber ei = CDNumber::unit(level, i);
        const CDNumber a1 = mul(ei, d1);
        const CDNumber a2 = mul(ei, d2);
        for (int j = 0; j < n; ++j) {
          const CDNumber ej = CDNumber::unit(level, j);
          block.col(column(k, i, j)) = (mul(a1, ej) - mul(mul(a2, ej), lambda)).coeffs();
        }
      }
    }
    gram.noalias() += block.transpose() * block;
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(values.maxCoeff(), 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(unknowns);
  for (int c = 0; c < unknowns; ++c) {
    if (values[c] <= cutoff) x += gauss(rng) * eig.eigenvectors().col(c);
  }
  if (x.size() > 0 && x.cwiseAbs().maxCoeff() > 0.0) x /= x.cwiseAbs().maxCoeff();

  std::vector<Expr> terms{Expr::constant(random_number())};
  for (int k = 1; k <= degree; ++k) {
    for (int i = 0; i < n; ++i) {
      CDNumber right(level);
      for (int j = 0; j < n; ++j) {
        const double v = x[column(k, i, j)];
        if (std::abs(v) > 1e-12) right[j] = v;
      }
      if (norm(right) == 0.0) continue;
      terms.push_back(Expr::product(
          Expr::product(Expr::constant(CDNumber::unit(level, i)),
                        Expr::power(Variable::z, CDNumber(level), k)),
          Expr::constant(right)));
    }
  }
  return Phrase{level, simplify(Expr::sum(std::move(terms)), level)};
}

}  // namespace cdalg
