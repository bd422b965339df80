#ifndef CDALG_NUMBER_HPP
#define CDALG_NUMBER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "cdalg/basis_table.hpp"
#include "cdalg/errors.hpp"

namespace cdalg {

/// Inputs with norm at or below this are treated as the zero element.
inline constexpr double kEpsZero = 1e-300;

/**
 * Element of the Cayley-Dickson algebra A_r, stored as the dense vector of
 * its 2^r real coordinates w_s in basis order (index 0 is the real part).
 */
template <typename Scalar>
class Number {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Number() : Number(AlgebraLevel{}) {}
  explicit Number(AlgebraLevel level)
      : level_(level), coeffs_(Coeffs::Zero(level.dim())) {}
  Number(AlgebraLevel level, Coeffs coeffs)
      : level_(level), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != level.dim()) {
      throw Error(ErrorKind::level_mismatch,
                  "coefficient vector of length " +
                      std::to_string(coeffs_.size()) +
                      " does not match algebra dimension " +
                      std::to_string(level.dim()));
    }
  }

  static Number real(AlgebraLevel level, Scalar value) {
    Number out(level);
    out.coeffs_[0] = value;
    return out;
  }
  static Number one(AlgebraLevel level) { return real(level, Scalar(1)); }
  static Number unit(AlgebraLevel level, int index, Scalar scale = Scalar(1)) {
    if (index < 0 || index >= level.dim()) {
      throw Error(ErrorKind::domain, "basis index e" + std::to_string(index) +
                                         " out of range for level r=" +
                                         std::to_string(level.r()));
    }
    Number out(level);
    out.coeffs_[index] = scale;
    return out;
  }

  AlgebraLevel level() const noexcept { return level_; }
  int dim() const noexcept { return level_.dim(); }
  const Coeffs& coeffs() const noexcept { return coeffs_; }
  Coeffs& coeffs() noexcept { return coeffs_; }

  Scalar operator[](int i) const { return coeffs_[i]; }
  Scalar& operator[](int i) { return coeffs_[i]; }

  Scalar real_part() const { return coeffs_[0]; }
  Number imag() const {
    Number out(*this);
    out.coeffs_[0] = Scalar(0);
    return out;
  }
  bool is_real() const { return coeffs_.tail(dim() - 1).isZero(0); }

  Number& operator+=(const Number& rhs) {
    check_same_level(rhs);
    coeffs_ += rhs.coeffs_;
    return *this;
  }
  Number& operator-=(const Number& rhs) {
    check_same_level(rhs);
    coeffs_ -= rhs.coeffs_;
    return *this;
  }
  Number& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  Number& operator/=(Scalar s) {
    coeffs_ /= s;
    return *this;
  }

  friend Number operator+(Number a, const Number& b) { return a += b; }
  friend Number operator-(Number a, const Number& b) { return a -= b; }
  friend Number operator-(Number a) {
    a.coeffs_ = -a.coeffs_;
    return a;
  }
  friend Number operator*(Number a, Scalar s) { return a *= s; }
  friend Number operator*(Scalar s, Number a) { return a *= s; }
  friend Number operator/(Number a, Scalar s) { return a /= s; }
  friend Number operator*(const Number& a, const Number& b) {
    return mul(a, b);
  }

  friend bool operator==(const Number& a, const Number& b) {
    return a.level_ == b.level_ && a.coeffs_ == b.coeffs_;
  }

  void check_same_level(const Number& other) const {
    if (!(level_ == other.level_)) {
      throw Error(ErrorKind::level_mismatch,
                  "operands live in different algebras (r=" +
                      std::to_string(level_.r()) + " and r=" +
                      std::to_string(other.level_.r()) + ")");
    }
  }

 private:
  AlgebraLevel level_;
  Coeffs coeffs_;
};

using CDNumber = Number<double>;

/// Doubling-law product, evaluated through the level's basis table.
template <typename Scalar>
Number<Scalar> mul(const Number<Scalar>& a, const Number<Scalar>& b) {
  a.check_same_level(b);
  const BasisTable& table = BasisTable::for_level(a.level());
  const int n = a.dim();
  Number<Scalar> out(a.level());
  auto& acc = out.coeffs();
  for (int i = 0; i < n; ++i) {
    const Scalar ai = a[i];
    if (ai == Scalar(0)) continue;
    for (int j = 0; j < n; ++j) {
      const Scalar bj = b[j];
      if (bj == Scalar(0)) continue;
      const auto e = table(i, j);
      acc[e.index] += Scalar(e.sign) * ai * bj;
    }
  }
  return out;
}

template <typename Scalar>
Number<Scalar> conj(const Number<Scalar>& z) {
  Number<Scalar> out(z);
  out.coeffs().tail(z.dim() - 1) *= Scalar(-1);
  return out;
}

/// Euclidean inner product of coordinate vectors, Re(a b*).
template <typename Scalar>
Scalar dot(const Number<Scalar>& a, const Number<Scalar>& b) {
  a.check_same_level(b);
  return a.coeffs().dot(b.coeffs());
}

template <typename Scalar>
Scalar squared_norm(const Number<Scalar>& z) {
  return z.coeffs().squaredNorm();
}

template <typename Scalar>
Scalar norm(const Number<Scalar>& z) {
  return z.coeffs().norm();
}

/// a^{-1} = a* / |a|^2; two-sided in every A_r.
template <typename Scalar>
Number<Scalar> inverse(const Number<Scalar>& z) {
  const Scalar n2 = squared_norm(z);
  if (!(std::sqrt(n2) > Scalar(kEpsZero))) {
    throw Error(ErrorKind::singular, "inverse of a zero element");
  }
  return conj(z) / n2;
}

/// z^n with z^n := z(z(...(zz))); negative n uses powers of z^{-1}.
template <typename Scalar>
Number<Scalar> pow_int(const Number<Scalar>& z, int n) {
  if (n == 0) return Number<Scalar>::one(z.level());
  const Number<Scalar> base = n > 0 ? z : inverse(z);
  const int m = n > 0 ? n : -n;
  Number<Scalar> out = base;
  for (int k = 1; k < m; ++k) out = mul(base, out);
  return out;
}

/// z = v + M with v = Re z and M = (z - z*)/2.
template <typename Scalar>
std::pair<Scalar, Number<Scalar>> split(const Number<Scalar>& z) {
  return {z.real_part(), z.imag()};
}

/// Subalgebra embedding A_r -> A_target (coefficients copied, rest zero).
template <typename Scalar>
Number<Scalar> embed(const Number<Scalar>& z, AlgebraLevel target) {
  if (target.r() < z.level().r()) {
    throw Error(ErrorKind::level_mismatch,
                "cannot embed level r=" + std::to_string(z.level().r()) +
                    " into smaller level r=" + std::to_string(target.r()));
  }
  Number<Scalar> out(target);
  out.coeffs().head(z.dim()) = z.coeffs();
  return out;
}

/**
 * Conjugation from the generator identity
 *   z* = (2^r - 2)^{-1} { -z + sum_{s != 1} s (z s*) },
 * an independent route to conj() used as a cross-check. Needs r >= 2.
 */
template <typename Scalar>
Number<Scalar> conj_via_generators(const Number<Scalar>& z) {
  const AlgebraLevel level = z.level();
  if (level.r() < 2) {
    throw Error(ErrorKind::unsupported_shape,
                "generator identity for conjugation requires r >= 2");
  }
  Number<Scalar> acc = -z;
  for (int s = 1; s < level.dim(); ++s) {
    const auto unit = Number<Scalar>::unit(level, s);
    acc += mul(unit, mul(z, conj(unit)));
  }
  return acc / Scalar(level.dim() - 2);
}

/// Pure imaginary test with a relative tolerance on the real part.
template <typename Scalar>
bool is_pure_imaginary(const Number<Scalar>& z, Scalar rel_tol = Scalar(1e-12)) {
  return std::abs(z.real_part()) <= rel_tol * std::max(Scalar(1), norm(z));
}

}  // namespace cdalg

#endif
