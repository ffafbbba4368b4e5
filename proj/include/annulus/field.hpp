#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annulus/expr.hpp"
#include "annulus/types.hpp"

namespace annulus {

/// Planar vector field V = (P, Q) built from expression trees.
///
/// Immutable after construction; evaluation is reentrant.
class PlanarField {
 public:
  PlanarField(std::string name, expr::Expr p, expr::Expr q, Box domain = {});

  /// Parses P and Q and attaches symbolic partials.
  static PlanarField from_strings(std::string name, std::string_view p, std::string_view q,
                                  Box domain = {});

  const std::string& name() const { return name_; }
  const Box& domain() const { return domain_; }
  const expr::Expr& p() const { return p_; }
  const expr::Expr& q() const { return q_; }

  /// V(z). Throws Error(Domain) if P or Q cannot be evaluated at z.
  Point operator()(const Point& z) const {
    return {expr::evaluate(p_, z.x(), z.y()), expr::evaluate(q_, z.x(), z.y())};
  }

  bool has_partials() const { return partials_.has_value(); }
  void set_partials(std::array<expr::Expr, 4> dpdx_dpdy_dqdx_dqdy) { partials_ = std::move(dpdx_dpdy_dqdx_dqdy); }
  void drop_partials() { partials_.reset(); }

  /// DV(z): exact when partials are attached, central differences otherwise.
  Matrix jacobian(const Point& z) const;

  /// Largest relative mismatch between attached partials and central
  /// differences of P, Q over `points`. Zero when there are no partials.
  double partials_mismatch(const std::vector<Point>& points, double h = 1e-6) const;

 private:
  std::string name_;
  expr::Expr p_;
  expr::Expr q_;
  Box domain_;
  std::optional<std::array<expr::Expr, 4>> partials_;
};

/// Built-in fields: linear-center, pendulum, duffing, cubic-center.
const std::vector<std::string>& builtin_names();
PlanarField builtin_field(std::string_view name);
/// Default seed/section shorthand used when a config names a built-in but no section.
std::string builtin_default_section(std::string_view name);

/// Parses a field definition:
///   P = <expr>
///   Q = <expr>
///   domain = [xmin, xmax, ymin, ymax]     (optional)
/// '#' starts a comment. Unknown keys are rejected.
PlanarField parse_field_definition(std::string_view text, std::string name = "custom");

/// Parses "[a, b, c, ...]" into numbers. Throws Error(Config).
std::vector<double> parse_number_list(std::string_view text);

}  // namespace annulus
