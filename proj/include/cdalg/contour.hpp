#ifndef CDALG_CONTOUR_HPP
#define CDALG_CONTOUR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdalg/integrate.hpp"

namespace cdalg {

/// Winding number of the projection onto each plane R + R i_s (s >= 1);
/// nullopt where the projected curve passes within 1e-9 of the point.
struct IndexVector {
  std::vector<std::optional<int>> per_plane;  ///< index s - 1 holds plane s
};

/// "value": coefficients are numbers. "functional": the result is the value
/// of the functional M -> c M and no recovery by M* is exact.
enum class CoefficientMode { value, functional };

struct ContourValue {
  CDNumber value;                      ///< (2 pi)^{-1} loop integral, ~ c M
  std::optional<CDNumber> recovered;   ///< value M*, in value mode
  double est_error = 0.0;
  bool converged = true;
  CoefficientMode mode = CoefficientMode::value;
};

struct ContourReport {
  CDNumber lhs;
  CDNumber rhs;
  double diff = 0.0;
  double est_error = 0.0;
  bool converged = true;
  CoefficientMode mode = CoefficientMode::value;
  std::vector<std::string> paths_used;
};

struct CoefficientReport {
  int k_min = 0;
  std::vector<ContourValue> coeffs;  ///< coeffs[i] is c_{k_min + i}
  double est_error = 0.0;
  bool converged = true;
  CoefficientMode mode = CoefficientMode::value;
};

IndexVector winding_index(const CDNumber& a, const Path& gamma);

/// (2 pi)^{-1} of the integral of d Ln(z - a); n M for an n-turn circle.
QuadratureResult ar_index(const CDNumber& a, const Path& gamma, double tol = kDefaultTol);

/**
 * res(p, f)M = (2 pi)^{-1} of the integral of f over the circle
 * p + rho exp(2 pi t M/|M|), scaled by |M|.
 */
QuadratureResult residue(const Phrase& f, const CDNumber& p, const CDNumber& direction,
                         double rho, double tol = kDefaultTol);

/**
 * (2 pi)^{-1} of the loop integral of f(zeta)(zeta - z)^{-1} over the circle
 * psi, which equals f(z)M. psi must be a whole circle and z must lie
 * strictly inside it, in the plane R + R M of the circle (elsewhere the
 * loop does not wind around z and the integral vanishes).
 *
 * The identity needs (Df(zeta)).u = ((Df(zeta)).1) u for u in R + R M on
 * the circle: left-coefficient words (a z^k) with the circle center in
 * R + R M qualify for r <= 3, real coefficients for every r. Coefficients
 * on the right of z^k turn the result into a sandwich {b M c} instead.
 */
ContourValue cauchy_eval(const Phrase& f, const CDNumber& z, const Path& psi,
                         double tol = kDefaultTol);

/// k!(2 pi)^{-1} of the loop integral of f(zeta)(zeta - z)^{-k-1}, ~ f^(k)(z)M.
ContourValue cauchy_derivative(const Phrase& f, const CDNumber& z, int k, const Path& psi,
                               double tol = kDefaultTol);

/// c_k = (2 pi)^{-1} loop integral of f(zeta)(zeta - a)^{-k-1} over psi
/// (centered at a), k = 0..count-1, recovered by M* in value mode.
CoefficientReport taylor_coeffs(const Phrase& f, const CDNumber& a, int count, const Path& psi,
                                double tol = kDefaultTol);

/// Coefficients k_min..k_max over the middle circle of the annulus
/// rho_inner <= |z - a| <= rho_outer, oriented by `direction`.
CoefficientReport laurent_coeffs(const Phrase& f, const CDNumber& a, int k_min, int k_max,
                                 double rho_inner, double rho_outer,
                                 const CDNumber& direction, double tol = kDefaultTol);

/**
 * Loop integral of f over psi against 2 pi sum_j res(p_j, f) In(p_j, psi),
 * each residue taken on a small circle in the plane of the pole's index.
 */
ContourReport residue_theorem_check(const Phrase& f, const std::vector<CDNumber>& poles,
                                    const Path& psi, double tol = kDefaultTol);

/// Radius of the circle used for the residue at infinity.
inline constexpr double kInfinityRadius = 1e3;

/**
 * Sum of the residues res(p_j, f)M plus the residue at infinity (reversed
 * circle of radius 1e3 about 0). lhs = finite sum, rhs = minus the residue
 * at infinity, diff = |lhs - rhs|.
 */
ContourReport sum_residues_check(const Phrase& f, const std::vector<CDNumber>& poles,
                                 const CDNumber& direction, double tol = kDefaultTol);

struct DivisorEntry {
  CDNumber point;
  int order;
};

/// Index of 0 under f o gamma against sum_j order_j In(a_j, gamma).
ContourReport argument_principle(const Phrase& f, const Path& gamma,
                                 const std::vector<DivisorEntry>& zeros,
                                 double tol = kDefaultTol);

struct RootResult {
  CDNumber root;
  double residual = 0.0;
  int iterations = 0;
  int restarts = 0;
};

inline constexpr int kRootRestarts = 16;

/**
 * Damped Newton on the real-coordinate map of P with Armijo backtracking on
 * |P|^2; the Jacobian columns are (DP(z)).e_s and steps are minimum-norm
 * least-squares solutions. Up to 16 restarts from random points in the ball
 * |z| <= 1 + sum |coefficients|. Throws non_convergence if all fail.
 */
RootResult find_root(const Phrase& p, const CDNumber& seed, int max_iter = 200,
                     double tol = 1e-10, std::uint64_t rng_seed = 42);

/// True when every constant in the tree is real.
bool has_real_constants(const Expr& e);

}  // namespace cdalg

#endif
