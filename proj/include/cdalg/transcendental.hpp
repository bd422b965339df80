#ifndef CDALG_TRANSCENDENTAL_HPP
#define CDALG_TRANSCENDENTAL_HPP

#include <cmath>
#include <numbers>

#include "cdalg/number.hpp"

namespace cdalg {

/// z = rho exp(theta M) with rho = |z|, theta in [0, pi], M unit pure
/// imaginary (e1 when Im z = 0).
template <typename Scalar>
struct PolarForm {
  Scalar rho;
  Number<Scalar> direction;
  Scalar theta;
};

/// exp(v + M) = e^v (cos|M| + (sin|M|/|M|) M).
template <typename Scalar>
Number<Scalar> exp(const Number<Scalar>& z) {
  auto [v, m] = split(z);
  const Scalar len = norm(m);
  const Scalar ev = std::exp(v);
  if (len == Scalar(0)) return Number<Scalar>::real(z.level(), ev);
  Number<Scalar> out = m * (ev * std::sin(len) / len);
  out[0] = ev * std::cos(len);
  return out;
}

/// Truncated power series sum_{n < terms} z^n / n!.
template <typename Scalar>
Number<Scalar> exp_series(const Number<Scalar>& z, int terms) {
  if (terms < 1) throw Error(ErrorKind::domain, "exp_series needs terms >= 1");
  Number<Scalar> term = Number<Scalar>::one(z.level());
  Number<Scalar> sum = term;
  for (int n = 1; n < terms; ++n) {
    term = mul(term, z) / Scalar(n);
    sum += term;
  }
  return sum;
}

template <typename Scalar>
PolarForm<Scalar> polar_decompose(const Number<Scalar>& z) {
  auto [v, m] = split(z);
  const Scalar s = norm(m);
  PolarForm<Scalar> out{norm(z), Number<Scalar>::unit(z.level(), 1), Scalar(0)};
  if (out.rho == Scalar(0)) return out;
  out.theta = std::atan2(s, v);
  if (s > Scalar(0)) out.direction = m / s;
  return out;
}

/// Principal logarithm ln|z| + theta M, theta in [0, pi]; the negative real
/// axis maps to pi e1.
template <typename Scalar>
Number<Scalar> ln_principal(const Number<Scalar>& z) {
  const auto polar = polar_decompose(z);
  if (!(polar.rho > Scalar(kEpsZero))) {
    throw Error(ErrorKind::domain, "logarithm of zero");
  }
  Number<Scalar> out = polar.direction * polar.theta;
  out[0] = std::log(polar.rho);
  return out;
}

namespace detail {

// Points with |Im z| below this fraction of |z| are treated as lying on the
// real axis, where the direction of a nonzero branch angle is taken from
// the reference logarithm.
inline constexpr double kAxisTol = 1e-10;

template <typename Scalar>
struct BranchChoice {
  Scalar log_rho;
  Scalar phi;                 // signed angle along `direction`
  Number<Scalar> direction;   // unit pure imaginary
  bool on_axis;               // direction borrowed from the reference
};

// Branch of Ln z whose angle vector phi N is nearest to Im(reference).
template <typename Scalar>
BranchChoice<Scalar> select_branch(const Number<Scalar>& z,
                                   const Number<Scalar>& reference) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  const Scalar rho = norm(z);
  if (!(rho > Scalar(kEpsZero))) {
    throw Error(ErrorKind::domain, "logarithm of zero");
  }
  auto [v, m] = split(z);
  const Number<Scalar> a_ref = reference.imag();
  const Scalar s = norm(m);

  BranchChoice<Scalar> out{std::log(rho), Scalar(0), Number<Scalar>(z.level()),
                           false};
  if (s > Scalar(0)) {
    out.direction = m / s;
    const Scalar theta = std::atan2(s, v);
    const Scalar p = dot(out.direction, a_ref);
    out.phi = theta + two_pi * std::round((p - theta) / two_pi);
    if (s > Scalar(kAxisTol) * rho) return out;
  }
  // On the real axis: the admissible logs form spheres of radius pi k.
  const Scalar ref_len = norm(a_ref);
  out.direction = ref_len > Scalar(0) ? a_ref / ref_len
                                      : Number<Scalar>::unit(z.level(), 1);
  const Scalar base = v > 0 ? Scalar(0) : std::numbers::pi_v<Scalar>;
  out.phi = base + two_pi * std::round((ref_len - base) / two_pi);
  out.on_axis = true;
  return out;
}

}  // namespace detail

/// The logarithm of z on the branch closest to `reference` (continuation).
template <typename Scalar>
Number<Scalar> ln_continued(const Number<Scalar>& z,
                            const Number<Scalar>& reference) {
  const auto b = detail::select_branch(z, reference);
  Number<Scalar> out = b.direction * b.phi;
  out[0] = b.log_rho;
  return out;
}

/**
 * Continuation of Ln along a sampled path. Each accepted step changes the
 * angle vector by less than pi/2.
 */
template <typename Scalar>
class BranchState {
 public:
  static constexpr Scalar kMaxStep = std::numbers::pi_v<Scalar> / 2;

  explicit BranchState(const Number<Scalar>& start)
      : log_(ln_principal(start)) {}
  /// Starts on the branch nearest `hint` (useful when `start` sits on the cut).
  BranchState(const Number<Scalar>& start, const Number<Scalar>& hint)
      : log_(ln_continued(start, hint)) {}

  const Number<Scalar>& log_value() const noexcept { return log_; }
  Scalar accumulated_arg() const { return norm(log_.imag()); }
  Number<Scalar> current_direction() const {
    const Scalar a = accumulated_arg();
    return a > Scalar(0) ? log_.imag() / a
                         : Number<Scalar>::unit(log_.level(), 1);
  }

  /// Moves to z; returns false (state unchanged) if the step is too coarse.
  bool advance(const Number<Scalar>& z) {
    Number<Scalar> next = ln_continued(z, log_);
    if (norm(next.imag() - log_.imag()) >= kMaxStep) return false;
    log_ = std::move(next);
    return true;
  }

 private:
  Number<Scalar> log_;
};

/**
 * Directional derivative (DLn(z)).h of the logarithm on the branch nearest
 * `reference`, from the closed form of Ln in real coordinates:
 *   d ln|z| = <z,h>/|z|^2,  d(phi N) = dtheta N + phi (H - <N,H> N)/|Im z|.
 * On the real axis the out-of-plane part of h is dropped (Ln is only
 * differentiable along the plane of the branch there).
 */
template <typename Scalar>
Number<Scalar> dln_apply(const Number<Scalar>& z, const Number<Scalar>& h,
                         const Number<Scalar>& reference) {
  const auto b = detail::select_branch(z, reference);
  const Scalar rho2 = squared_norm(z);
  auto [v, m] = split(z);
  auto [h0, hi] = split(h);
  const Scalar s = norm(m);
  const Scalar along = dot(b.direction, hi);

  Number<Scalar> out(z.level());
  if (!b.on_axis) {
    const Scalar dtheta = (v * along - s * h0) / rho2;
    out = b.direction * dtheta + (hi - b.direction * along) * (b.phi / s);
  } else if (b.phi == Scalar(0)) {
    out = hi / v;
  } else {
    out = b.direction * (along / v);
  }
  out[0] = dot(z, h) / rho2;
  return out;
}

/// (DLn(z)).h on the principal branch; rejects points on the negative real
/// axis, where the principal branch is not differentiable.
template <typename Scalar>
Number<Scalar> dln_apply(const Number<Scalar>& z, const Number<Scalar>& h) {
  const Scalar rho = norm(z);
  if (!(rho > Scalar(kEpsZero))) {
    throw Error(ErrorKind::domain, "logarithm of zero");
  }
  if (z.real_part() < 0 && norm(z.imag()) <= Scalar(detail::kAxisTol) * rho) {
    throw Error(ErrorKind::cut_straddle,
                "principal logarithm differentiated on the branch cut");
  }
  return dln_apply(z, h, ln_principal(z));
}

enum class TrigKind { cos, sin, cosh, sinh };

/**
 * Trigonometric and hyperbolic functions. With z = v + yM (M unit):
 *   cos z = [exp(Mz) + exp(-Mz)]/2 = cos v cosh y - sin v sinh y M
 *   sin z = [exp(Mz) - exp(-Mz)] M* / 2 = sin v cosh y + cos v sinh y M
 *   cosh z = [exp z + exp(-z)]/2,  sinh z = [exp z - exp(-z)]/2.
 * Real arguments use the real functions.
 */
template <typename Scalar>
Number<Scalar> trig(const Number<Scalar>& z, TrigKind which) {
  const AlgebraLevel level = z.level();
  if (which == TrigKind::cosh || which == TrigKind::sinh) {
    const auto ep = exp(z);
    const auto em = exp(-z);
    return which == TrigKind::cosh ? (ep + em) / Scalar(2)
                                   : (ep - em) / Scalar(2);
  }
  auto [v, m] = split(z);
  const Scalar y = norm(m);
  if (y == Scalar(0)) {
    return Number<Scalar>::real(level,
                                which == TrigKind::cos ? std::cos(v) : std::sin(v));
  }
  const Number<Scalar> unit = m / y;
  const Number<Scalar> mz = mul(unit, z);
  const auto ep = exp(mz);
  const auto em = exp(-mz);
  if (which == TrigKind::cos) return (ep + em) / Scalar(2);
  return mul(ep - em, conj(unit)) / Scalar(2);
}

}  // namespace cdalg

#endif
