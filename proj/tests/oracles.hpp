#ifndef CDALG_TESTS_ORACLES_HPP
#define CDALG_TESTS_ORACLES_HPP

// Reference arithmetic written independently of the library: Hamilton
// quaternions by the explicit formula, and a recursive pair-of-halves
// doubling on plain std::vector.

#include <array>
#include <complex>
#include <random>
#include <vector>

#include "cdalg/number.hpp"

namespace oracle {

using Quat = std::array<double, 4>;

inline Quat hamilton(const Quat& p, const Quat& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

using Vec = std::vector<double>;

inline Vec conj(Vec a) {
  for (std::size_t i = 1; i < a.size(); ++i) a[i] = -a[i];
  return a;
}

/// (a, b)(c, d) = (ac - d* b, d a + b c*).
inline Vec doubling_product(const Vec& x, const Vec& y) {
  const std::size_t n = x.size();
  if (n == 1) return {x[0] * y[0]};
  const std::size_t h = n / 2;
  const Vec a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  const Vec c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  const Vec ac = doubling_product(a, c), db = doubling_product(conj(d), b);
  const Vec da = doubling_product(d, a), bc = doubling_product(b, conj(c));
  Vec out(n);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = ac[i] - db[i];
    out[h + i] = da[i] + bc[i];
  }
  return out;
}

inline Vec to_vec(const cdalg::CDNumber& z) {
  return Vec(z.coeffs().data(), z.coeffs().data() + z.dim());
}

inline double distance(const cdalg::CDNumber& z, const Vec& v) {
  double s = 0.0;
  for (int i = 0; i < z.dim(); ++i) s += (z[i] - v[i]) * (z[i] - v[i]);
  return std::sqrt(s);
}

inline cdalg::CDNumber random_number(std::mt19937_64& rng, cdalg::AlgebraLevel level,
                                     double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  cdalg::CDNumber z(level);
  for (int i = 0; i < z.dim(); ++i) z[i] = g(rng);
  return z;
}

inline cdalg::CDNumber random_unit_imaginary(std::mt19937_64& rng, cdalg::AlgebraLevel level) {
  cdalg::CDNumber m = random_number(rng, level).imag();
  return m / cdalg::norm(m);
}

/// x + y M.
inline cdalg::CDNumber in_plane(cdalg::AlgebraLevel level, std::complex<double> w,
                                const cdalg::CDNumber& m) {
  return cdalg::CDNumber::real(level, w.real()) + m * w.imag();
}

}  // namespace oracle

#endif
