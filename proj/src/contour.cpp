#include "cdalg/contour.hpp"

#include <Eigen/QR>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "cdalg/transcendental.hpp"

namespace cdalg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPlaneTol = 1e-9;
constexpr double kProjectionTol = 1e-9;
constexpr int kMaxCoefficients = 256;

void visit_nodes(const Expr& e, const std::function<void(const Node&)>& fn) {
  fn(e.node());
  if (const auto* s = std::get_if<node::Sum>(&e.node().v)) {
    for (const auto& t : s->terms) visit_nodes(t, fn);
  } else if (const auto* n = std::get_if<node::Negate>(&e.node().v)) {
    visit_nodes(n->arg, fn);
  } else if (const auto* p = std::get_if<node::Product>(&e.node().v)) {
    visit_nodes(p->left, fn);
    visit_nodes(p->right, fn);
  } else if (const auto* g = std::get_if<node::GeneralPower>(&e.node().v)) {
    visit_nodes(g->base, fn);
  }
}

// w in span{1, M} (M unit pure imaginary).
bool in_plane(const CDNumber& w, const CDNumber& m) {
  const CDNumber perp = w.imag() - m * dot(w, m);
  return norm(perp) <= kPlaneTol * std::max(1.0, norm(w));
}

void require_circle(const Path& psi) {
  if (psi.kind() != PathKind::circle || !psi.is_whole()) {
    throw Error(ErrorKind::domain, "contour must be a whole circle");
  }
  const double n = psi.turns();
  if (n == 0.0 || n != std::round(n)) {
    throw Error(ErrorKind::domain, "contour circle must have a nonzero integer number of turns");
  }
}

bool leaf_centers_in_plane(const Expr& e, const CDNumber& m) {
  bool ok = true;
  visit_nodes(e, [&](const Node& n) {
    if (const auto* p = std::get_if<node::Power>(&n.v)) ok = ok && in_plane(p->center, m);
    if (const auto* l = std::get_if<node::Log>(&n.v)) ok = ok && in_plane(l->center, m);
  });
  return ok;
}

// Value mode: alternative algebras (M* recovery), or every ingredient in
// the commutative plane R + R M.
CoefficientMode mode_for(const Phrase& f, const Path& psi, const CDNumber& point) {
  if (f.level.r() <= 3) return CoefficientMode::value;
  const CDNumber& m = psi.direction();
  if (has_real_constants(f.root) && leaf_centers_in_plane(f.root, m) &&
      in_plane(psi.center(), m) && in_plane(point, m)) {
    return CoefficientMode::value;
  }
  return CoefficientMode::functional;
}

Phrase kernel(const Phrase& f, const CDNumber& center, int power) {
  return Phrase{f.level, Expr::product(f.root, Expr::power(Variable::z, center, power))};
}

ContourValue kernel_value(const Phrase& f, const CDNumber& center, int power, const Path& psi,
                          double tol, double scale, CoefficientMode mode, int* knots = nullptr) {
  const QuadratureResult q = line_integral(kernel(f, center, power), psi, tol);
  if (knots) *knots = q.knots;
  ContourValue out;
  out.value = q.value * (scale / kTwoPi);
  out.est_error = q.est_error * scale / kTwoPi;
  out.converged = q.converged;
  out.mode = mode;
  if (mode == CoefficientMode::value) {
    out.recovered = mul(out.value, conj(psi.direction())) / psi.turns();
  }
  return out;
}

double min_distance(const Path& gamma, const CDNumber& p, int samples = 4096) {
  double d = std::numeric_limits<double>::infinity();
  const Partition part = make_partition(gamma, samples);
  for (double t : part.knots) d = std::min(d, norm(gamma.at(t) - p));
  return d;
}

CDNumber unit_direction(const CDNumber& m) {
  const double len = norm(m);
  if (!(len > 0.0) || std::abs(m.real_part()) > 1e-12 * len) {
    throw Error(ErrorKind::domain, "direction must be a nonzero pure imaginary");
  }
  return m.imag() / len;
}

std::string describe_circle(const CDNumber& center, double radius) {
  std::ostringstream os;
  os << "circle(center=" << format_constant(center) << ", radius=" << radius << ")";
  return os.str();
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// knots == 0 checks the geometry only.
void check_inside(const CDNumber& z, const Path& psi, int knots) {
  const CDNumber offset = z - psi.center();
  if (!in_plane(offset, psi.direction())) {
    throw Error(ErrorKind::domain,
                "point is not in the plane of the contour; the loop does not wind around it");
  }
  const double gap = psi.radius() - norm(offset);
  if (!(gap > 0.0)) throw Error(ErrorKind::domain, "point is not strictly inside the contour");
  if (knots == 0) return;
  const double spacing = kTwoPi * psi.radius() * std::abs(psi.turns()) / knots;
  if (gap < 10.0 * spacing) {
    throw Error(ErrorKind::accuracy, "point lies within 10 knot spacings of the contour");
  }
}

}  // namespace

bool has_real_constants(const Expr& e) {
  bool ok = true;
  visit_nodes(e, [&](const Node& n) {
    if (const auto* c = std::get_if<node::Constant>(&n.v)) ok = ok && c->value.is_real();
  });
  return ok;
}

IndexVector winding_index(const CDNumber& a, const Path& gamma) {
  a.check_same_level(gamma.start());
  const int dim = a.dim();
  IndexVector out;
  for (int n = 4096;; n *= 2) {
    const Partition part = make_partition(gamma, n);
    std::vector<CDNumber> pts;
    pts.reserve(part.knots.size());
    for (double t : part.knots) pts.push_back(gamma.at(t) - a);
    out.per_plane.assign(dim - 1, std::nullopt);
    double worst_step = 0.0;
    for (int s = 1; s < dim; ++s) {
      bool defined = true;
      double total = 0.0;
      for (std::size_t k = 0; k < pts.size() && defined; ++k) {
        const double x = pts[k][0];
        const double y = pts[k][s];
        if (std::hypot(x, y) <= kProjectionTol) defined = false;
        if (k == 0 || !defined) continue;
        const double px = pts[k - 1][0];
        const double py = pts[k - 1][s];
        const double step = std::atan2(px * y - py * x, px * x + py * y);
        worst_step = std::max(worst_step, std::abs(step));
        total += step;
      }
      if (defined) out.per_plane[s - 1] = static_cast<int>(std::lround(total / kTwoPi));
    }
    if (worst_step < std::numbers::pi / 4 || n >= kDefaultMaxKnots) return out;
  }
}

QuadratureResult ar_index(const CDNumber& a, const Path& gamma, double tol) {
  QuadratureResult q = log_integral(a, gamma, tol * kTwoPi);
  q.value /= kTwoPi;
  q.est_error /= kTwoPi;
  return q;
}

QuadratureResult residue(const Phrase& f, const CDNumber& p, const CDNumber& direction,
                         double rho, double tol) {
  const double scale = norm(direction);
  const Path circle = Path::circle(p, rho, unit_direction(direction), 1.0);
  QuadratureResult q = line_integral(f, circle, tol * kTwoPi / std::max(scale, 1e-300));
  q.value *= scale / kTwoPi;
  q.est_error *= scale / kTwoPi;
  return q;
}

ContourValue cauchy_eval(const Phrase& f, const CDNumber& z, const Path& psi, double tol) {
  return cauchy_derivative(f, z, 0, psi, tol);
}

ContourValue cauchy_derivative(const Phrase& f, const CDNumber& z, int k, const Path& psi,
                               double tol) {
  require_circle(psi);
  if (k < 0) throw Error(ErrorKind::domain, "derivative order must be nonnegative");
  check_inside(z, psi, 0);
  int knots = 0;
  ContourValue out =
      kernel_value(f, z, -k - 1, psi, tol, factorial(k), mode_for(f, psi, z), &knots);
  check_inside(z, psi, knots);
  return out;
}

CoefficientReport taylor_coeffs(const Phrase& f, const CDNumber& a, int count, const Path& psi,
                                double tol) {
  require_circle(psi);
  if (count < 1 || count > kMaxCoefficients) {
    throw Error(ErrorKind::domain, "coefficient count must be in 1.." + std::to_string(kMaxCoefficients));
  }
  if (norm(psi.center() - a) > 1e-12 * (1.0 + norm(a))) {
    throw Error(ErrorKind::domain, "Taylor contour must be centered at the expansion point");
  }
  CoefficientReport out;
  out.mode = mode_for(f, psi, a);
  for (int k = 0; k < count; ++k) {
    out.coeffs.push_back(kernel_value(f, a, -k - 1, psi, tol, 1.0, out.mode));
    out.est_error = std::max(out.est_error, out.coeffs.back().est_error);
    out.converged = out.converged && out.coeffs.back().converged;
  }
  return out;
}

CoefficientReport laurent_coeffs(const Phrase& f, const CDNumber& a, int k_min, int k_max,
                                 double rho_inner, double rho_outer,
                                 const CDNumber& direction, double tol) {
  if (!(k_min <= 0 && 0 <= k_max) || k_max - k_min + 1 > kMaxCoefficients) {
    throw Error(ErrorKind::domain, "need k_min <= 0 <= k_max with at most " +
                                       std::to_string(kMaxCoefficients) + " coefficients");
  }
  if (!(rho_inner > 0.0 && rho_inner <= rho_outer && std::isfinite(rho_outer))) {
    throw Error(ErrorKind::domain, "annulus radii must satisfy 0 < rho_inner <= rho_outer");
  }
  for (const CDNumber& c : singular_centers(f.root)) {
    const double d = norm(c - a);
    if (d >= rho_inner && d <= rho_outer) {
      throw Error(ErrorKind::domain, "singularity at distance " + std::to_string(d) +
                                         " lies in the annulus");
    }
  }
  const Path psi = Path::circle(a, 0.5 * (rho_inner + rho_outer), direction, 1.0);
  CoefficientReport out;
  out.k_min = k_min;
  out.mode = mode_for(f, psi, a);
  for (int k = k_min; k <= k_max; ++k) {
    ContourValue c = kernel_value(f, a, -k - 1, psi, tol, 1.0, out.mode);
    if (!c.converged) {
      throw Error(ErrorKind::non_convergence,
                  "coefficient quadrature diverges (annulus violation?) at k=" + std::to_string(k));
    }
    out.est_error = std::max(out.est_error, c.est_error);
    out.coeffs.push_back(std::move(c));
  }
  return out;
}

ContourReport residue_theorem_check(const Phrase& f, const std::vector<CDNumber>& poles,
                                    const Path& psi, double tol) {
  if (!psi.is_closed(1e-9)) throw Error(ErrorKind::domain, "residue theorem needs a closed path");
  ContourReport out;
  const QuadratureResult lhs = line_integral(f, psi, tol);
  out.lhs = lhs.value;
  out.est_error = lhs.est_error;
  out.converged = lhs.converged;
  out.paths_used.push_back(psi.label());
  out.rhs = CDNumber(f.level);
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const CDNumber& p = poles[j];
    const double d_path = min_distance(psi, p);
    if (!(d_path > 1e-9 * (1.0 + norm(p)))) {
      throw Error(ErrorKind::domain, "pole " + std::to_string(j) + " lies on the contour");
    }
    const QuadratureResult index = ar_index(p, psi, tol);
    const double turns = std::round(norm(index.value));
    if (turns < 0.5) continue;
    double rho = d_path;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      if (i != j && !(poles[i] == p)) rho = std::min(rho, norm(poles[i] - p));
    }
    rho *= 0.5;
    const QuadratureResult res = residue(f, p, index.value, rho, tol);
    out.rhs += res.value * (kTwoPi * turns / norm(index.value));
    out.est_error += kTwoPi * turns * res.est_error;
    out.converged = out.converged && res.converged && index.converged;
    out.paths_used.push_back(describe_circle(p, rho));
  }
  out.diff = norm(out.lhs - out.rhs);
  return out;
}

ContourReport sum_residues_check(const Phrase& f, const std::vector<CDNumber>& poles,
                                 const CDNumber& direction, double tol) {
  const CDNumber m = unit_direction(direction);
  const double scale = norm(direction);
  ContourReport out;
  out.lhs = CDNumber(f.level);
  for (std::size_t j = 0; j < poles.size(); ++j) {
    double rho = 0.5;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      if (i != j && !(poles[i] == poles[j])) rho = std::min(rho, 0.5 * norm(poles[i] - poles[j]));
    }
    const QuadratureResult res = residue(f, poles[j], direction, rho, tol);
    out.lhs += res.value;
    out.est_error += res.est_error;
    out.converged = out.converged && res.converged;
    out.paths_used.push_back(describe_circle(poles[j], rho));
  }
  const Path outer = Path::circle(CDNumber(f.level), kInfinityRadius, m, 1.0).reversed();
  const QuadratureResult inf = line_integral(f, outer, tol);
  out.rhs = -inf.value * (scale / kTwoPi);
  out.est_error += inf.est_error * scale / kTwoPi;
  out.converged = out.converged && inf.converged;
  out.paths_used.push_back("reversed " + describe_circle(CDNumber(f.level), kInfinityRadius));
  out.diff = norm(out.lhs - out.rhs);
  return out;
}

ContourReport argument_principle(const Phrase& f, const Path& gamma,
                                 const std::vector<DivisorEntry>& zeros, double tol) {
  const Path image = Path::parametric(
      f.level, [f, gamma](double t) { return evaluate(f, gamma.at(t)); }, "f o gamma");
  ContourReport out;
  const QuadratureResult lhs = ar_index(CDNumber(f.level), image, tol);
  out.lhs = lhs.value;
  out.est_error = lhs.est_error;
  out.converged = lhs.converged;
  out.paths_used = {gamma.label(), image.label()};
  out.rhs = CDNumber(f.level);
  for (const auto& z : zeros) {
    const QuadratureResult idx = ar_index(z.point, gamma, tol);
    out.rhs += idx.value * static_cast<double>(z.order);
    out.est_error += std::abs(z.order) * idx.est_error;
    out.converged = out.converged && idx.converged;
  }
  out.diff = norm(out.lhs - out.rhs);
  return out;
}

RootResult find_root(const Phrase& p, const CDNumber& seed, int max_iter, double tol,
                     std::uint64_t rng_seed) {
  if (max_iter < 1) throw Error(ErrorKind::domain, "max_iter must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "tolerance must be positive");
  if (contains_conjugate(p.root) || contains_log(p.root)) {
    throw Error(ErrorKind::unsupported_shape, "root finding needs a phrase in z without zc or logarithms");
  }
  const AlgebraLevel level = p.level;
  const int dim = level.dim();

  double radius = 1.0;
  visit_nodes(p.root, [&](const Node& n) {
    if (const auto* c = std::get_if<node::Constant>(&n.v)) radius += norm(c->value);
    if (const auto* q = std::get_if<node::Power>(&n.v)) radius += norm(q->center);
  });

  auto residual_of = [&](const CDNumber& z) -> std::optional<CDNumber> {
    try {
      CDNumber v = evaluate(p, z);
      if (!v.coeffs().allFinite()) return std::nullopt;
      return v;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::pole || e.kind() == ErrorKind::singular) return std::nullopt;
      throw;
    }
  };

  RootResult best{seed, std::numeric_limits<double>::infinity(), 0, 0};
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  int total_iterations = 0;

  for (int attempt = 0; attempt <= kRootRestarts; ++attempt) {
    CDNumber z = seed;
    if (attempt > 0) {
      CDNumber dir(level);
      for (int s = 0; s < dim; ++s) dir[s] = gauss(rng);
      const double r = radius * std::pow(uniform(rng), 1.0 / dim);
      z = dir * (r / std::max(norm(dir), 1e-300));
    }
    auto fz = residual_of(z);
    if (!fz) continue;
    double phi = squared_norm(*fz);
    for (int it = 0; it < max_iter; ++it) {
      if (std::sqrt(phi) < best.residual) best = {z, std::sqrt(phi), total_iterations, attempt};
      if (std::sqrt(phi) <= tol) break;
      ++total_iterations;
      Eigen::MatrixXd jac(dim, dim);
      try {
        for (int s = 0; s < dim; ++s) {
          jac.col(s) = derivative_apply(p, z, CDNumber::unit(level, s)).coeffs();
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::pole) throw;
        break;
      }
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-fz->coeffs());
      bool accepted = false;
      for (double lambda = 1.0; lambda >= 1e-10; lambda *= 0.5) {
        CDNumber trial(level, z.coeffs() + lambda * step);
        auto ft = residual_of(trial);
        if (!ft) continue;
        const double phi_t = squared_norm(*ft);
        if (phi_t <= (1.0 - 2e-4 * lambda) * phi) {
          z = std::move(trial);
          fz = std::move(ft);
          phi = phi_t;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (std::sqrt(phi) < best.residual) best = {z, std::sqrt(phi), total_iterations, attempt};
    if (best.residual <= tol) {
      best.iterations = total_iterations;
      return best;
    }
  }
  std::ostringstream os;
  os << "no root within tolerance after " << kRootRestarts << " restarts; best residual "
     << best.residual << " at " << format_constant(best.root);
  throw Error(ErrorKind::non_convergence, os.str());
}

}  // namespace cdalg
