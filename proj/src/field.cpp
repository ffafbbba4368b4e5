#include "annulus/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace annulus {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lexical: return "lexical";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownFunction: return "unknown-function";
    case ErrorKind::UnknownVariable: return "unknown-variable";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::StepLimit: return "step-limit";
    case ErrorKind::LeftDomain: return "left-domain";
    case ErrorKind::Horizon: return "horizon";
    case ErrorKind::NoEvent: return "no-event";
    case ErrorKind::CriticalPoint: return "critical-point";
    case ErrorKind::NotACycle: return "not-a-cycle";
    case ErrorKind::Transversality: return "transversality";
    case ErrorKind::DegenerateTangent: return "degenerate-tangent";
    case ErrorKind::NotASection: return "not-a-section";
    case ErrorKind::OnConjugateSection: return "on-conjugate-section";
    case ErrorKind::WellPosedness: return "well-posedness";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

PlanarField::PlanarField(std::string name, expr::Expr p, expr::Expr q, Box domain)
    : name_(std::move(name)), p_(std::move(p)), q_(std::move(q)), domain_(domain) {}

PlanarField PlanarField::from_strings(std::string name, std::string_view p, std::string_view q, Box domain) {
  PlanarField f(std::move(name), expr::parse(p), expr::parse(q), domain);
  f.set_partials({expr::differentiate(f.p_, 0), expr::differentiate(f.p_, 1), expr::differentiate(f.q_, 0),
                  expr::differentiate(f.q_, 1)});
  return f;
}

Matrix PlanarField::jacobian(const Point& z) const {
  Matrix j;
  if (partials_) {
    const auto& d = *partials_;
    j << expr::evaluate(d[0], z.x(), z.y()), expr::evaluate(d[1], z.x(), z.y()),
        expr::evaluate(d[2], z.x(), z.y()), expr::evaluate(d[3], z.x(), z.y());
    return j;
  }
  const double h = 1e-6 * scale_of(z);
  for (int c = 0; c < 2; ++c) {
    Point dz = Point::Zero();
    dz[c] = h;
    j.col(c) = ((*this)(z + dz) - (*this)(z - dz)) / (2.0 * h);
  }
  return j;
}

double PlanarField::partials_mismatch(const std::vector<Point>& points, double h) const {
  if (!partials_) return 0.0;
  double worst = 0.0;
  for (const Point& z : points) {
    const Matrix exact = jacobian(z);
    Matrix fd;
    for (int c = 0; c < 2; ++c) {
      Point dz = Point::Zero();
      dz[c] = h;
      fd.col(c) = ((*this)(z + dz) - (*this)(z - dz)) / (2.0 * h);
    }
    for (int i = 0; i < 4; ++i) {
      const double e = exact.data()[i];
      worst = std::max(worst, std::abs(e - fd.data()[i]) / (1.0 + std::abs(e)));
    }
  }
  return worst;
}

namespace {

struct Builtin {
  const char* name;
  const char* p;
  const char* q;
  const char* section;
};

// Sections stay inside the period annulus: the pendulum and Duffing
// separatrices are at |x| = pi and infinity respectively.
constexpr Builtin kBuiltins[] = {
    {"linear-center", "-y", "x", "x-axis [0.2, 2]"},
    {"pendulum", "y", "-sin(x)", "x-axis [0.2, 2.5]"},
    {"duffing", "y", "-x - x^3", "x-axis [0.2, 1.5]"},
    {"cubic-center", "-y^3", "x^3", "x-axis [0.5, 2]"},
};

const Builtin& find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (name == b.name) return b;
  }
  throw Error(ErrorKind::Config, "unknown built-in field '" + std::string(name) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& b : kBuiltins) v.emplace_back(b.name);
    return v;
  }();
  return names;
}

PlanarField builtin_field(std::string_view name) {
  const Builtin& b = find_builtin(name);
  return PlanarField::from_strings(b.name, b.p, b.q);
}

std::string builtin_default_section(std::string_view name) { return find_builtin(name).section; }

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw Error(ErrorKind::Config, "expected a bracketed list, got '" + std::string(text) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    // Allow simple expressions such as "-1.5" or "2*3" through the expression parser.
    try {
      out.push_back(expr::evaluate(expr::parse(item, expr::Variables{{}}), 0.0));
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, "bad number '" + std::string(item) + "': " + e.what());
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

PlanarField parse_field_definition(std::string_view text, std::string name) {
  std::optional<std::string> p, q;
  Box domain;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "P") {
      p = std::string(value);
    } else if (key == "Q") {
      q = std::string(value);
    } else if (key == "domain") {
      auto v = parse_number_list(value);
      if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
        throw Error(ErrorKind::Config, "domain must be [xmin, xmax, ymin, ymax] with min < max");
      }
      domain = {v[0], v[1], v[2], v[3]};
    } else {
      throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (!p || !q) throw Error(ErrorKind::Config, "field definition needs both P and Q");
  return PlanarField::from_strings(std::move(name), *p, *q, domain);
}

}  // namespace annulus
