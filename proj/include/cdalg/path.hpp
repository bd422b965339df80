#ifndef CDALG_PATH_HPP
#define CDALG_PATH_HPP

#include <functional>
#include <string>
#include <vector>

#include "cdalg/number.hpp"

namespace cdalg {

enum class PathKind { circle, polyline, parametric };

/**
 * Rectifiable curve t in [0,1] -> A_r.
 *
 * circle:     gamma(t) = center + radius exp(2 pi t turns M), M unit pure
 *             imaginary (the given direction is normalized).
 * polyline:   vertices joined by segments, parametrized proportionally to
 *             arc length.
 * parametric: an arbitrary continuous sampler.
 *
 * sub() and reversed() return views reparametrized over [0,1].
 */
class Path {
 public:
  using Sampler = std::function<CDNumber(double)>;

  static Path circle(const CDNumber& center, double radius,
                     const CDNumber& direction, double turns = 1.0);
  static Path polyline(std::vector<CDNumber> points);
  static Path parametric(AlgebraLevel level, Sampler sampler,
                         std::string label = "parametric");

  PathKind kind() const noexcept { return kind_; }
  AlgebraLevel level() const noexcept { return level_; }

  CDNumber at(double t) const { return base_at(t0_ + (t1_ - t0_) * t); }
  CDNumber start() const { return at(0.0); }
  CDNumber end() const { return at(1.0); }
  bool is_closed(double tol = 1e-12) const;

  /// Restriction to [a, b] of this path's parameter, itself over [0,1].
  Path sub(double a, double b) const;
  Path reversed() const;
  /// True when this is the whole underlying curve in its own orientation.
  bool is_whole() const noexcept { return t0_ == 0.0 && t1_ == 1.0; }

  // Circle data (meaningful for kind() == circle).
  const CDNumber& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const CDNumber& direction() const noexcept { return direction_; }
  double turns() const noexcept { return turns_; }

  const std::vector<CDNumber>& vertices() const noexcept { return points_; }
  /// Parameters in (0,1) where the path has corners (polyline vertices).
  std::vector<double> breakpoints() const;
  const std::string& label() const noexcept { return label_; }

 private:
  explicit Path(PathKind kind, AlgebraLevel level) : kind_(kind), level_(level) {}
  CDNumber base_at(double s) const;

  PathKind kind_;
  AlgebraLevel level_;
  double t0_ = 0.0;
  double t1_ = 1.0;
  CDNumber center_;
  double radius_ = 0.0;
  CDNumber direction_;
  double turns_ = 0.0;
  std::vector<CDNumber> points_;
  std::vector<double> cumulative_;  // arc-length fraction at each vertex
  Sampler sampler_;
  std::string label_;
};

/// Strictly increasing parameters 0 = c_0 < ... < c_t = 1.
struct Partition {
  std::vector<double> knots;

  int intervals() const { return static_cast<int>(knots.size()) - 1; }
  /// |P| = max spacing.
  double mesh() const;
};

/**
 * Partition with `knots` intervals. Corners of the path are always knots;
 * the intervals are split over the smooth pieces proportionally to their
 * parameter length, and doubling `knots` from a multiple of 64 doubles the
 * count in every piece.
 */
Partition make_partition(const Path& path, int knots);

Partition uniform_partition(int knots);

}  // namespace cdalg

#endif
