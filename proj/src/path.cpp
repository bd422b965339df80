#include "cdalg/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cdalg/transcendental.hpp"

namespace cdalg {

Path Path::circle(const CDNumber& center, double radius, const CDNumber& direction,
                  double turns) {
  center.check_same_level(direction);
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::domain, "circle radius must be positive and finite");
  }
  if (!std::isfinite(turns)) throw Error(ErrorKind::domain, "circle turns must be finite");
  const double len = norm(direction);
  if (!(len > 0.0) || std::abs(direction.real_part()) > 1e-12 * len) {
    throw Error(ErrorKind::domain, "circle direction must be a nonzero pure imaginary");
  }
  Path p(PathKind::circle, center.level());
  p.center_ = center;
  p.radius_ = radius;
  p.direction_ = direction.imag() / len;
  p.turns_ = turns;
  p.label_ = "circle";
  return p;
}

Path Path::polyline(std::vector<CDNumber> points) {
  if (points.size() < 2) throw Error(ErrorKind::domain, "polyline needs at least two points");
  for (const auto& q : points) points.front().check_same_level(q);
  Path p(PathKind::polyline, points.front().level());
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < points.size(); ++i) {
    cum.push_back(cum.back() + norm(points[i] - points[i - 1]));
  }
  const double total = cum.back();
  if (total > 0.0) {
    for (auto& c : cum) c /= total;
  } else {
    for (std::size_t i = 0; i < cum.size(); ++i) {
      cum[i] = static_cast<double>(i) / static_cast<double>(cum.size() - 1);
    }
  }
  cum.back() = 1.0;
  p.points_ = std::move(points);
  p.cumulative_ = std::move(cum);
  p.label_ = "polyline";
  return p;
}

Path Path::parametric(AlgebraLevel level, Sampler sampler, std::string label) {
  if (!sampler) throw Error(ErrorKind::domain, "parametric path needs a sampler");
  Path p(PathKind::parametric, level);
  p.sampler_ = std::move(sampler);
  p.label_ = std::move(label);
  return p;
}

CDNumber Path::base_at(double s) const {
  switch (kind_) {
    case PathKind::circle: {
      const double angle = 2.0 * std::numbers::pi * s * turns_;
      return center_ + exp(direction_ * angle) * radius_;
    }
    case PathKind::polyline: {
      s = std::clamp(s, 0.0, 1.0);
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
      std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
      if (i >= points_.size() - 1) return points_.back();
      const double span = cumulative_[i + 1] - cumulative_[i];
      const double u = span > 0.0 ? (s - cumulative_[i]) / span : 0.0;
      return points_[i] + (points_[i + 1] - points_[i]) * u;
    }
    case PathKind::parametric: {
      CDNumber out = sampler_(s);
      if (!(out.level() == level_)) {
        throw Error(ErrorKind::level_mismatch, "parametric sampler returned a point of the wrong level");
      }
      return out;
    }
  }
  return CDNumber(level_);
}

bool Path::is_closed(double tol) const {
  const CDNumber a = start();
  const CDNumber b = end();
  return norm(b - a) <= tol * std::max(1.0, norm(a));
}

Path Path::sub(double a, double b) const {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) {
    throw Error(ErrorKind::domain, "sub-path needs 0 <= a < b <= 1");
  }
  Path p(*this);
  p.t0_ = t0_ + (t1_ - t0_) * a;
  p.t1_ = t0_ + (t1_ - t0_) * b;
  return p;
}

Path Path::reversed() const {
  Path p(*this);
  std::swap(p.t0_, p.t1_);
  return p;
}

std::vector<double> Path::breakpoints() const {
  std::vector<double> out;
  if (kind_ != PathKind::polyline) return out;
  const double lo = std::min(t0_, t1_);
  const double hi = std::max(t0_, t1_);
  for (std::size_t i = 1; i + 1 < cumulative_.size(); ++i) {
    const double s = cumulative_[i];
    if (s > lo && s < hi) out.push_back((s - t0_) / (t1_ - t0_));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Partition::mesh() const {
  double m = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) m = std::max(m, knots[i] - knots[i - 1]);
  return m;
}

namespace {

// Largest-remainder split of `total` over weights, at least one per piece.
std::vector<int> split_counts(const std::vector<double>& weights, int total) {
  const int n = static_cast<int>(weights.size());
  std::vector<int> counts(n, 1);
  int remaining = total - n;
  if (remaining <= 0) return counts;
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::pair<double, int>> frac;
  for (int i = 0; i < n; ++i) {
    const double exact = remaining * weights[i] / sum;
    const int whole = static_cast<int>(std::floor(exact));
    counts[i] += whole;
    frac.emplace_back(exact - whole, i);
  }
  int used = std::accumulate(counts.begin(), counts.end(), 0);
  std::stable_sort(frac.begin(), frac.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total && k < frac.size(); ++k, ++used) {
    ++counts[frac[k].second];
  }
  return counts;
}

}  // namespace

Partition uniform_partition(int knots) {
  if (knots < 1) throw Error(ErrorKind::domain, "partition needs at least one interval");
  Partition p;
  p.knots.resize(static_cast<std::size_t>(knots) + 1);
  for (int i = 0; i <= knots; ++i) p.knots[i] = static_cast<double>(i) / knots;
  p.knots.back() = 1.0;
  return p;
}

Partition make_partition(const Path& path, int knots) {
  if (knots < 1) throw Error(ErrorKind::domain, "partition needs at least one interval");
  std::vector<double> edges{0.0};
  for (double b : path.breakpoints()) edges.push_back(b);
  edges.push_back(1.0);
  const int pieces = static_cast<int>(edges.size()) - 1;
  if (pieces == 1) return uniform_partition(knots);

  std::vector<double> spans;
  for (int i = 0; i < pieces; ++i) spans.push_back(edges[i + 1] - edges[i]);
  // Counts are fixed at the base resolution and scaled, so doubling the knot
  // count doubles every piece.
  constexpr int kBase = 64;
  std::vector<int> counts;
  if (knots % kBase == 0 && pieces <= kBase) {
    counts = split_counts(spans, kBase);
    for (auto& c : counts) c *= knots / kBase;
  } else {
    counts = split_counts(spans, std::max(knots, pieces));
  }
  Partition p;
  p.knots.push_back(0.0);
  for (int i = 0; i < pieces; ++i) {
    for (int k = 1; k <= counts[i]; ++k) {
      p.knots.push_back(k == counts[i] ? edges[i + 1]
                                       : edges[i] + spans[i] * k / counts[i]);
    }
  }
  p.knots.back() = 1.0;
  return p;
}

}  // namespace cdalg
