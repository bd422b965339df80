#include "cdalg/structure.hpp"

#include <vector>

namespace cdalg {

namespace {

// All elements i_a + sign i_b with a < b, in a fixed order.
std::vector<CDNumber> two_term_sums(AlgebraLevel level) {
  std::vector<CDNumber> out;
  const int n = level.dim();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (double sign : {1.0, -1.0}) {
        CDNumber x(level);
        x[a] = 1.0;
        x[b] = sign;
        out.push_back(std::move(x));
      }
    }
  }
  return out;
}

}  // namespace

std::optional<ZeroDivisorPair> find_zero_divisor(AlgebraLevel level,
                                                 std::int64_t search_budget) {
  const auto candidates = two_term_sums(level);
  std::int64_t examined = 0;
  for (const auto& a : candidates) {
    for (const auto& b : candidates) {
      if (examined++ >= search_budget) return std::nullopt;
      const double p = norm(mul(a, b));
      if (p < 1e-12 * norm(a) * norm(b)) return ZeroDivisorPair{a, b, p};
    }
  }
  return std::nullopt;
}

double alternativity_residual(const CDNumber& x, const CDNumber& y) {
  const double left = norm(mul(mul(x, x), y) - mul(x, mul(x, y)));
  const double right = norm(mul(mul(x, y), y) - mul(x, mul(y, y)));
  return std::max(left, right);
}

std::optional<AlternativityWitness> find_alternativity_violation(
    AlgebraLevel level, std::int64_t search_budget, double min_residual) {
  const auto candidates = two_term_sums(level);
  std::int64_t examined = 0;
  for (const auto& x : candidates) {
    for (const auto& y : candidates) {
      if (examined++ >= search_budget) return std::nullopt;
      const double res = alternativity_residual(x, y);
      if (res > min_residual) return AlternativityWitness{x, y, res};
    }
  }
  return std::nullopt;
}

}  // namespace cdalg
