#include "annulus/section.hpp"

#include <cctype>
#include <cmath>

#include "annulus/io.hpp"

namespace annulus {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format(double v) { return format_number(v); }

}  // namespace

SectionSpec parse_section_shorthand(std::string_view text) {
  text = trim(text);
  const auto bracket = text.find('[');
  if (bracket == std::string_view::npos) {
    throw Error(ErrorKind::Config, "section shorthand needs an interval, e.g. 'x-axis [0.2, 2]'");
  }
  const std::string_view kind = trim(text.substr(0, bracket));
  const auto range = parse_number_list(text.substr(bracket));
  if (range.size() != 2 || !(range[0] < range[1])) {
    throw Error(ErrorKind::Config, "section interval must be [s_min, s_max] with s_min < s_max");
  }
  const char* sx = nullptr;
  const char* sy = nullptr;
  if (kind == "x-axis") {
    sx = "s", sy = "0";
  } else if (kind == "y-axis") {
    sx = "0", sy = "s";
  } else if (kind == "diagonal") {
    sx = "s", sy = "s";
  } else {
    throw Error(ErrorKind::Config, "unknown section shorthand '" + std::string(kind) + "'");
  }
  SectionSpec spec = section_from_expressions(sx, sy, range[0], range[1]);
  spec.description = std::string(kind) + " [" + format(range[0]) + ", " + format(range[1]) + "]";
  return spec;
}

SectionSpec section_from_expressions(std::string_view sx, std::string_view sy, double s_min, double s_max) {
  const expr::Variables s_only{{"s"}};
  SectionSpec spec;
  spec.sx = expr::parse(sx, s_only);
  spec.sy = expr::parse(sy, s_only);
  spec.s_min = s_min;
  spec.s_max = s_max;
  if (!(s_min < s_max)) throw Error(ErrorKind::Config, "section interval must have s_min < s_max");
  spec.description = "(" + std::string(trim(sx)) + ", " + std::string(trim(sy)) + ") s in [" + format(s_min) +
                     ", " + format(s_max) + "]";
  return spec;
}

std::vector<double> uniform_grid(double s_min, double s_max, std::size_t count) {
  if (count < 2) throw Error(ErrorKind::Config, "grid needs at least two points");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = s_min + (s_max - s_min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  g.back() = s_max;
  return g;
}

bool transversal(const Point& tangent, const Point& v) {
  const double det = tangent.x() * v.y() - tangent.y() * v.x();
  return std::abs(det) >= 1e-6 * tangent.norm() * v.norm() && v.norm() > 1e-12;
}

Section make_section(const SectionSpec& spec, const PlanarField& field, std::vector<double> grid) {
  const expr::Expr dsx = expr::differentiate(spec.sx, 0);
  const expr::Expr dsy = expr::differentiate(spec.sy, 0);
  auto point = [sx = spec.sx, sy = spec.sy](double s) { return Point(expr::evaluate(sx, s), expr::evaluate(sy, s)); };
  auto tangent = [dsx, dsy](double s) { return Point(expr::evaluate(dsx, s), expr::evaluate(dsy, s)); };

  if (grid.empty()) grid = uniform_grid(spec.s_min, spec.s_max, spec.grid_size);
  Section out;
  out.description = spec.description;
  out.curve = ParametricCurve(point, tangent, spec.s_min, spec.s_max);
  out.grid = std::move(grid);
  for (double s : out.grid) {
    if (s < spec.s_min || s > spec.s_max) {
      throw Error(ErrorKind::Config, "grid value " + format(s) + " outside the section interval", s);
    }
    const Point t = tangent(s);
    if (t.norm() < 1e-12) throw Error(ErrorKind::DegenerateTangent, "degenerate tangent at s = " + format(s), s);
    const Point v = field(point(s));
    out.transversality.push_back(t.x() * v.y() - t.y() * v.x());
    if (!transversal(t, v)) {
      throw Error(ErrorKind::Transversality, "section is not transversal to the field at s = " + format(s), s);
    }
  }
  // No self-intersection on the grid: non-adjacent points stay apart.
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    for (std::size_t j = i + 2; j < out.grid.size(); ++j) {
      if ((point(out.grid[i]) - point(out.grid[j])).norm() <= 1e-9 * scale_of(point(out.grid[i]))) {
        throw Error(ErrorKind::NotASection,
                    "section self-intersects between s = " + format(out.grid[i]) + " and s = " + format(out.grid[j]),
                    out.grid[j]);
      }
    }
  }
  return out;
}

}  // namespace annulus
