#ifndef CDALG_STRUCTURE_HPP
#define CDALG_STRUCTURE_HPP

#include <cstdint>
#include <optional>
#include <utility>

#include "cdalg/number.hpp"

namespace cdalg {

/// Two nonzero elements whose product vanishes.
struct ZeroDivisorPair {
  CDNumber a;
  CDNumber b;
  double product_norm;
};

/// Searches products (i_a +- i_b)(i_c +- i_d) of two-term basis sums,
/// examining at most `search_budget` pairs. No pair exists for r <= 3.
std::optional<ZeroDivisorPair> find_zero_divisor(AlgebraLevel level,
                                                 std::int64_t search_budget);

/// A pair (x, y) breaking one of the alternative laws
/// (xx)y = x(xy), (xy)y = x(yy).
struct AlternativityWitness {
  CDNumber x;
  CDNumber y;
  double residual;
};

/// Max of the two alternative-law residuals for a given pair.
double alternativity_residual(const CDNumber& x, const CDNumber& y);

/// Searches two-term basis sums for a pair with residual above `min_residual`.
std::optional<AlternativityWitness> find_alternativity_violation(
    AlgebraLevel level, std::int64_t search_budget, double min_residual = 0.1);

}  // namespace cdalg

#endif
