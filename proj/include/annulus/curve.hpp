#pragma once

#include <functional>
#include <string>
#include <vector>

#include "annulus/flow.hpp"
#include "annulus/types.hpp"

namespace annulus {

/// Natural cubic spline through (s_i, v_i) with strictly increasing knots.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> knots, std::vector<double> values);

  double operator()(double s) const;
  double derivative(double s) const;

 private:
  std::size_t interval(double s) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;  // second derivatives at the knots
};

/// Curve s -> point on [s_min, s_max] with tangent, plus the nearest-point
/// machinery used for membership tests and crossing events.
class ParametricCurve {
 public:
  using Map = std::function<Point(double)>;

  ParametricCurve() = default;
  ParametricCurve(Map point, Map tangent, double s_min, double s_max, std::size_t polyline_size = 257);

  Point point(double s) const { return point_(s); }
  Point tangent(double s) const { return tangent_(s); }
  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }

  struct Projection {
    double s = 0.0;
    Point foot = Point::Zero();
    double distance = 0.0;
    /// cross(unit tangent, z - foot): signed normal offset.
    double offset = 0.0;
  };

  /// Closest point of the curve to z (parameter clamped to the interval).
  Projection project(const Point& z) const;
  double distance(const Point& z) const { return project(z).distance; }

  /// Crossing event: g = signed normal offset, accepted only on the curve itself.
  /// The event refers to this curve, which must outlive it.
  EventSpec crossing_event(Crossing direction = Crossing::Any) const;

 private:
  Map point_;
  Map tangent_;
  double s_min_ = 0.0;
  double s_max_ = 0.0;
  std::vector<double> poly_s_;
  std::vector<Point> poly_p_;
};

}  // namespace annulus
