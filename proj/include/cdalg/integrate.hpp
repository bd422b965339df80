#ifndef CDALG_INTEGRATE_HPP
#define CDALG_INTEGRATE_HPP

#include "cdalg/expr.hpp"
#include "cdalg/path.hpp"

namespace cdalg {

inline constexpr double kDefaultTol = 1e-6;
inline constexpr int kDefaultMaxKnots = 1 << 20;
inline constexpr int kInitialKnots = 64;

struct QuadratureResult {
  CDNumber value;
  double est_error = 0.0;
  int refinements = 0;  ///< number of knot doublings performed
  int knots = 0;        ///< intervals in the finest partition used
  bool converged = false;
};

/// v(gamma; P) = sum_k |gamma(c_{k+1}) - gamma(c_k)|.
double total_variation(const Path& gamma, const Partition& partition);

/**
 * I(f, gamma; P) = sum_k (Dg(z_{k+1})).(z_{k+1} - z_k) with g = primitive(f),
 * the differential taken at the right endpoint of every interval. Logarithms
 * in g are continued along the knots.
 */
CDNumber integral_sum(const Phrase& f, const Path& gamma, const Partition& partition);

/// As integral_sum for an explicit primitive g; the increments are
/// q(z_{k+1}) - q(z_k) when q is given (Stieltjes form).
CDNumber primitive_sum(const Phrase& g, const Path& gamma, const Partition& partition,
                       const Phrase* q = nullptr);

/**
 * Limit of integral_sum under knot doubling from 64 knots. Successive sums
 * are Richardson-extrapolated in powers of 1/N; est_error is the change of
 * the extrapolated value in the last doubling. If max_knots is reached first
 * the best value is returned with converged = false.
 */
QuadratureResult line_integral(const Phrase& f, const Path& gamma,
                               double tol = kDefaultTol,
                               int max_knots = kDefaultMaxKnots);

/// line_integral of an explicit primitive (increments of q if given).
QuadratureResult primitive_integral(const Phrase& g, const Path& gamma, double tol,
                                    int max_knots, const Phrase* q = nullptr);

/**
 * Integral of d Ln(z - center) along gamma: the telescoped change of the
 * logarithm continued knot to knot (each step must turn by less than pi/2;
 * coarse partitions are refined). Converged when two refinements agree.
 */
QuadratureResult log_integral(const CDNumber& center, const Path& gamma,
                              double tol = kDefaultTol,
                              int max_knots = kDefaultMaxKnots);

/// Sum with increments q(gamma(c_{k+1})) - q(gamma(c_k)).
QuadratureResult stieltjes_integral(const Phrase& f, const Phrase& q, const Path& gamma,
                                    double tol = kDefaultTol,
                                    int max_knots = kDefaultMaxKnots);

}  // namespace cdalg

#endif
