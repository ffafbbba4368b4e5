#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "annulus/curve.hpp"
#include "annulus/expr.hpp"
#include "annulus/field.hpp"

namespace annulus {

/// Textual description of a section curve s -> (sx(s), sy(s)) on [s_min, s_max].
struct SectionSpec {
  std::string description;
  expr::Expr sx;
  expr::Expr sy;
  double s_min = 0.0;
  double s_max = 1.0;
  std::size_t grid_size = 33;
};

/// Shorthand "x-axis [a, b]", "y-axis [a, b]" or "diagonal [a, b]".
SectionSpec parse_section_shorthand(std::string_view text);
/// Expressions in the parameter s.
SectionSpec section_from_expressions(std::string_view sx, std::string_view sy, double s_min, double s_max);

/// Regular curve transversal to the field at every grid point.
struct Section {
  std::string description;
  ParametricCurve curve;
  std::vector<double> grid;
  /// det[delta'(s), V(delta(s))] at each grid point.
  std::vector<double> transversality;

  Point operator()(double s) const { return curve.point(s); }
};

/// Uniform grid of `count` points on [s_min, s_max].
std::vector<double> uniform_grid(double s_min, double s_max, std::size_t count);

/// Builds and certifies a section. Throws Error(Transversality) naming the
/// first failing s, or Error(DegenerateTangent).
/// An empty grid uses spec.grid_size uniform points.
Section make_section(const SectionSpec& spec, const PlanarField& field, std::vector<double> grid = {});

/// Transversality test |det[t, v]| >= 1e-6 |t| |v| used for sections and their images.
bool transversal(const Point& tangent, const Point& v);

}  // namespace annulus
