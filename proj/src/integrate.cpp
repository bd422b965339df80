#include "cdalg/integrate.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <numbers>

#include "cdalg/transcendental.hpp"

namespace cdalg {

namespace {

constexpr int kMaxRichardsonColumns = 8;
constexpr double kMaxAngleStep = std::numbers::pi / 2;

std::vector<CDNumber> sample(const Path& gamma, const Partition& partition) {
  std::vector<CDNumber> pts;
  pts.reserve(partition.knots.size());
  for (double t : partition.knots) pts.push_back(gamma.at(t));
  return pts;
}

CDNumber offset_from(const CDNumber& z, const CDNumber& center) {
  CDNumber u = z - center;
  if (!(norm(u) > kEpsZero)) {
    throw Error(ErrorKind::pole, "path passes through a logarithmic singularity");
  }
  return u;
}

bool on_negative_axis(const CDNumber& u) {
  return u.real_part() < 0 && norm(u.imag()) <= detail::kAxisTol * norm(u);
}

// Ln(z_0 - c); a start on the cut borrows its branch from the next knot.
CDNumber seed_log(const std::vector<CDNumber>& pts, const CDNumber& center) {
  const CDNumber u0 = offset_from(pts.front(), center);
  if (!on_negative_axis(u0) || pts.size() < 2) return ln_principal(u0);
  const CDNumber u1 = offset_from(pts[1], center);
  return ln_continued(u0, ln_principal(u1));
}

CDNumber continue_log(const CDNumber& z, const CDNumber& center, const CDNumber& current) {
  CDNumber next = ln_continued(offset_from(z, center), current);
  if (norm(next.imag() - current.imag()) >= kMaxAngleStep) {
    throw Error(ErrorKind::cut_straddle,
                "partition too coarse to continue the logarithm (angle step >= pi/2)");
  }
  return next;
}

// Richardson-accelerated doubling over sums produced by `level_sum(N)`.
QuadratureResult extrapolate(const std::function<CDNumber(int)>& level_sum, double tol,
                             int max_knots) {
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "tolerance must be positive");
  if (max_knots < kInitialKnots) {
    throw Error(ErrorKind::domain, "max_knots must be at least " + std::to_string(kInitialKnots));
  }
  std::vector<CDNumber> prev;
  QuadratureResult out;
  for (int n = kInitialKnots, doublings = 0; n <= max_knots; n *= 2, ++doublings) {
    CDNumber s;
    try {
      s = level_sum(n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::cut_straddle || n > max_knots / 2) throw;
      prev.clear();
      continue;
    }
    std::vector<CDNumber> row{s};
    const int columns = std::min<int>(static_cast<int>(prev.size()), kMaxRichardsonColumns);
    for (int j = 1; j <= columns; ++j) {
      const double factor = std::ldexp(1.0, j) - 1.0;
      row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / factor);
    }
    out.value = row.back();
    out.knots = n;
    out.refinements = doublings;
    if (!prev.empty()) {
      out.est_error = norm(row.back() - prev.back());
      if (out.est_error < tol) {
        out.converged = true;
        return out;
      }
    } else {
      out.est_error = std::numeric_limits<double>::infinity();
    }
    prev = std::move(row);
  }
  return out;
}

}  // namespace

double total_variation(const Path& gamma, const Partition& partition) {
  double v = 0.0;
  CDNumber last = gamma.at(partition.knots.front());
  for (std::size_t k = 1; k < partition.knots.size(); ++k) {
    CDNumber next = gamma.at(partition.knots[k]);
    v += norm(next - last);
    last = std::move(next);
  }
  return v;
}

CDNumber primitive_sum(const Phrase& g, const Path& gamma, const Partition& partition,
                       const Phrase* q) {
  if (!(g.level == gamma.level())) {
    throw Error(ErrorKind::level_mismatch, "path and phrase live in different algebras");
  }
  const std::vector<CDNumber> pts = sample(gamma, partition);
  const std::vector<CDNumber> centers = log_centers(g.root);
  LogBranches branches;
  for (const auto& c : centers) branches.set(c, seed_log(pts, c));

  CDNumber acc(g.level);
  CDNumber q_prev = q ? evaluate(*q, pts.front()) : CDNumber(g.level);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const CDNumber& z = pts[k + 1];
    for (const auto& c : centers) branches.set(c, continue_log(z, c, *branches.find(c)));
    CDNumber h;
    if (q) {
      CDNumber q_next = evaluate(*q, z);
      h = q_next - q_prev;
      q_prev = std::move(q_next);
    } else {
      h = z - pts[k];
    }
    acc += derivative_apply(g, z, h, &branches);
  }
  return acc;
}

CDNumber integral_sum(const Phrase& f, const Path& gamma, const Partition& partition) {
  return primitive_sum(primitive(f).g, gamma, partition);
}

QuadratureResult primitive_integral(const Phrase& g, const Path& gamma, double tol,
                                    int max_knots, const Phrase* q) {
  return extrapolate(
      [&](int n) { return primitive_sum(g, gamma, make_partition(gamma, n), q); }, tol,
      max_knots);
}

QuadratureResult line_integral(const Phrase& f, const Path& gamma, double tol,
                               int max_knots) {
  const Phrase g = primitive(f).g;
  return primitive_integral(g, gamma, tol, max_knots);
}

QuadratureResult stieltjes_integral(const Phrase& f, const Phrase& q, const Path& gamma,
                                    double tol, int max_knots) {
  if (!(f.level == q.level)) {
    throw Error(ErrorKind::level_mismatch, "integrand and integrator live in different algebras");
  }
  const Phrase g = primitive(f).g;
  return primitive_integral(g, gamma, tol, max_knots, &q);
}

QuadratureResult log_integral(const CDNumber& center, const Path& gamma, double tol,
                              int max_knots) {
  if (!(center.level() == gamma.level())) {
    throw Error(ErrorKind::level_mismatch, "center and path live in different algebras");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "tolerance must be positive");
  QuadratureResult out;
  std::optional<CDNumber> prev;
  bool any_success = false;
  for (int n = kInitialKnots, doublings = 0; n <= max_knots; n *= 2, ++doublings) {
    const std::vector<CDNumber> pts = sample(gamma, make_partition(gamma, n));
    CDNumber log = seed_log(pts, center);
    const CDNumber first = log;
    try {
      for (std::size_t k = 1; k < pts.size(); ++k) log = continue_log(pts[k], center, log);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::cut_straddle) throw;
      prev.reset();
      continue;
    }
    any_success = true;
    CDNumber value = log - first;
    out.value = value;
    out.knots = n;
    out.refinements = doublings;
    if (prev) {
      out.est_error = norm(value - *prev);
      if (out.est_error < tol) {
        out.converged = true;
        return out;
      }
    }
    prev = std::move(value);
  }
  if (!any_success) {
    throw Error(ErrorKind::cut_straddle,
                "logarithm could not be continued along the path within the knot budget");
  }
  if (!prev) out.est_error = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace cdalg
