#ifndef CDALG_DIFFCHECK_HPP
#define CDALG_DIFFCHECK_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cdalg/expr.hpp"

namespace cdalg {

/**
 * @brief Real-coordinate map F = sum_s F_s s on R^{2^r}, components indexed
 * like CDNumber coefficients.
 *
 * `F2` is the (z, z~) form with the two slots independent; only zbar_check
 * needs it. A step of 0 selects the default 1e-5 (1 + |z|).
 */
struct RealFieldSample {
  AlgebraLevel level;
  std::function<CDNumber(const CDNumber&)> F;
  std::function<CDNumber(const CDNumber&, const CDNumber&)> F2;
  double step = 0.0;

  static RealFieldSample from_phrase(const Phrase& f, double step = 0.0);
};

inline constexpr double kDefaultCheckThreshold = 1e-4;

struct CRReport {
  double max_residual = 0.0;
  /// Keyed "e1".."e{2^r-1}" for planes, "e{p},e{q}" for harmonic pairs and
  /// "pair{j}" for the paired planes of zbar_check; basis order.
  std::vector<std::pair<std::string, double>> residuals;
  double threshold = kDefaultCheckThreshold;
  bool pass = true;
};

/// max over q of |dF/dw_1 - (dF/dw_q) q*| by central differences.
CRReport cr_check(const RealFieldSample& F, const CDNumber& z,
                  double threshold = kDefaultCheckThreshold);

/**
 * max over components s of |d^2F_s/dw_p^2 + d^2F_s/dw_q^2| for every pair
 * p < q of real coordinates. The default step here is 1e-3 (1 + |z|):
 * second differences lose twice the digits of first ones.
 */
CRReport harmonic_check(const RealFieldSample& F, const CDNumber& z,
                        double threshold = kDefaultCheckThreshold);

/**
 * For each j, the differential in the z~ slot along the paired plane
 * s = i_{2j}, p = i_{2j+1}: (d f/d z~).(s h) for h in {1, s* p}, measured
 * with central differences of F2 in the direction conj(s h). Residual is
 * the larger norm of the two.
 */
CRReport zbar_check(const RealFieldSample& F, const CDNumber& z,
                    double threshold = kDefaultCheckThreshold);

/**
 * Random polynomial of degree <= `degree` whose differential is right
 * superlinear, (Df(z)).(h lambda) = ((Df(z)).h) lambda. The coefficients of
 * the words (e_i z^k) e_j, k = 1..degree, are a random point of the null
 * space of the linear constraints sampled at random (z, h, lambda); a random
 * constant term is added.
 */
Phrase right_superlinear_polynomial(AlgebraLevel level, int degree, std::uint64_t seed);

}  // namespace cdalg

#endif
