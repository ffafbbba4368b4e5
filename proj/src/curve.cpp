#include "annulus/curve.hpp"

#include <algorithm>
#include <cmath>

namespace annulus {

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  const std::size_t n = knots_.size();
  if (n < 2 || values_.size() != n) throw Error(ErrorKind::Config, "spline needs at least two matching knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw Error(ErrorKind::Config, "spline knots must increase strictly");
  }
  second_.assign(n, 0.0);
  if (n == 2) return;
  // Thomas algorithm on the natural-spline tridiagonal system.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = knots_[i] - knots_[i - 1];
    const double h1 = knots_[i + 1] - knots_[i];
    const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
    const double rhs = (values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    second_[i] = d[i] - c[i] * second_[i + 1];
  }
}

std::size_t CubicSpline::interval(double s) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(i, knots_.size() - 2);
}

double CubicSpline::operator()(double s) const {
  const std::size_t i = interval(s);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - s) / h;
  const double b = (s - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double s) const {
  const std::size_t i = interval(s);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - s) / h;
  const double b = (s - knots_[i]) / h;
  return (values_[i + 1] - values_[i]) / h - (3 * a * a - 1) * h / 6.0 * second_[i] +
         (3 * b * b - 1) * h / 6.0 * second_[i + 1];
}

ParametricCurve::ParametricCurve(Map point, Map tangent, double s_min, double s_max, std::size_t polyline_size)
    : point_(std::move(point)), tangent_(std::move(tangent)), s_min_(s_min), s_max_(s_max) {
  if (!(s_max > s_min)) throw Error(ErrorKind::Config, "curve interval must have s_min < s_max");
  polyline_size = std::max<std::size_t>(polyline_size, 2);
  poly_s_.resize(polyline_size);
  poly_p_.resize(polyline_size);
  for (std::size_t i = 0; i < polyline_size; ++i) {
    const double s = s_min + (s_max - s_min) * static_cast<double>(i) / static_cast<double>(polyline_size - 1);
    poly_s_[i] = s;
    poly_p_[i] = point_(s);
  }
}

ParametricCurve::Projection ParametricCurve::project(const Point& z) const {
  // Coarse: nearest polyline segment.
  double best = std::numeric_limits<double>::infinity();
  double s = s_min_;
  for (std::size_t i = 0; i + 1 < poly_p_.size(); ++i) {
    const Point a = poly_p_[i];
    const Point ab = poly_p_[i + 1] - a;
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0.0 ? std::clamp((z - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d2 = (a + u * ab - z).squaredNorm();
    if (d2 < best) {
      best = d2;
      s = poly_s_[i] + u * (poly_s_[i + 1] - poly_s_[i]);
    }
  }
  // Refine: Gauss-Newton on (point(s) - z) . tangent(s) = 0.
  for (int it = 0; it < 30; ++it) {
    const Point p = point_(s);
    const Point t = tangent_(s);
    const double tt = t.squaredNorm();
    if (tt == 0.0) break;
    const double next = std::clamp(s - (p - z).dot(t) / tt, s_min_, s_max_);
    const bool done = std::abs(next - s) <= 1e-15 * (1.0 + std::abs(s));
    s = next;
    if (done) break;
  }
  Projection out;
  out.s = s;
  out.foot = point_(s);
  const Point diff = z - out.foot;
  out.distance = diff.norm();
  const Point t = tangent_(s);
  const double tn = t.norm();
  out.offset = tn > 0.0 ? (t.x() * diff.y() - t.y() * diff.x()) / tn : 0.0;
  return out;
}

EventSpec ParametricCurve::crossing_event(Crossing direction) const {
  EventSpec e;
  e.g = [this](const Point& z) { return project(z).offset; };
  e.direction = direction;
  e.accept = [this](const Point& z) {
    const Projection p = project(z);
    return p.distance <= 1e-8 * scale_of(z);
  };
  return e;
}

}  // namespace annulus
