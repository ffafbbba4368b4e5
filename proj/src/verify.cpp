#include "annulus/verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "annulus/io.hpp"
#include "annulus/period.hpp"

namespace annulus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double frac(double v) { return v - std::floor(v); }

// Additive recurrence with the plastic-number constants (R2 sequence).
constexpr double kR2a = 0.7548776662466927;
constexpr double kR2b = 0.5698402909980532;

double seed_offset(std::uint64_t seed, double mult) { return frac(0.5 + static_cast<double>(seed % 1000003) * mult); }

}  // namespace

ResidualGate::ResidualGate(std::string name, double tolerance, Comparison comparison, Extreme extreme)
    : extreme_(extreme) {
  result_.name = std::move(name);
  result_.tolerance = tolerance;
  result_.comparison = comparison;
  result_.max_residual = extreme == Extreme::Max ? 0.0 : kInf;
}

void ResidualGate::record(double residual, const Point& z, std::optional<double> t) {
  ++result_.evaluated;
  if (std::isnan(residual)) residual = extreme_ == Extreme::Max ? kInf : -kInf;
  const bool first = !result_.worst_point;
  const bool beyond = extreme_ == Extreme::Max ? residual > result_.max_residual : residual < result_.max_residual;
  if (first || beyond) {
    result_.max_residual = residual;
    result_.worst_point = z;
    result_.worst_time = t;
  }
}

void ResidualGate::fail(const Point& z, const std::exception& e, std::optional<double> t) {
  std::ostringstream os;
  os << "(" << format_number(z.x()) << ", " << format_number(z.y()) << ")";
  if (t) os << " t=" << format_number(*t);
  os << ": " << e.what();
  result_.errors.push_back(os.str());
}

CheckResult ResidualGate::finish() const {
  CheckResult out = result_;
  if (!out.errors.empty()) out.max_residual = out.comparison == Comparison::AtMost ? kInf : -kInf;
  out.pass = out.comparison == Comparison::AtMost ? out.max_residual <= out.tolerance
                                                  : out.max_residual >= out.tolerance;
  return out;
}

std::size_t VerificationReport::passed() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.pass ? 1 : 0;
  return n;
}

const CheckResult& VerificationReport::at(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named " + name);
}

CheckResult check_involution(const PlanarMap& sigma, std::span<const Point> samples, double tolerance,
                             Scaling scaling) {
  ResidualGate gate("involution", tolerance);
  for (const Point& z : samples) {
    try {
      const double r = (sigma(sigma(z)) - z).norm();
      gate.record(scaling == Scaling::Relative ? r / scale_of(z) : r, z);
    } catch (const std::exception& e) {
      gate.fail(z, e);
    }
  }
  return gate.finish();
}

CheckResult check_commutation(const PlanarField& field, const PlanarMap& sigma, int sign,
                              std::span<const Point> samples, std::span<const double> times,
                              const IntegratorConfig& cfg, double tolerance) {
  ResidualGate gate(sign > 0 ? "flow_commutation" : "flow_anticommutation", tolerance);
  for (const Point& z : samples) {
    std::optional<Point> image;
    try {
      image = sigma(z);
    } catch (const std::exception& e) {
      gate.fail(z, e);
      continue;
    }
    for (double t : times) {
      try {
        const Point lhs = sigma(flow(field, z, t, cfg));
        const Point rhs = flow(field, *image, sign > 0 ? t : -t, cfg);
        gate.record((lhs - rhs).norm(), z, t);
      } catch (const std::exception& e) {
        gate.fail(z, e, t);
      }
    }
  }
  return gate.finish();
}

CheckResult check_field_condition(const PlanarField& field, const PlanarMap& sigma, int sign,
                                  std::span<const Point> samples, double tolerance, double h) {
  ResidualGate gate("field_condition", tolerance);
  for (const Point& z : samples) {
    try {
      const Matrix j = jacobian_fd(sigma, z, h);
      const Point lhs = field(sigma(z));
      const Point rhs = static_cast<double>(sign > 0 ? 1 : -1) * (j * field(z));
      gate.record((lhs - rhs).norm(), z);
    } catch (const std::exception& e) {
      gate.fail(z, e);
    }
  }
  return gate.finish();
}

CheckResult check_period_invariance(const PlanarField& field, const PlanarMap& sigma, std::span<const Point> samples,
                                    const IntegratorConfig& cfg, double tolerance) {
  ResidualGate gate("period_invariance", tolerance);
  for (const Point& z : samples) {
    try {
      const double tz = period(field, z, cfg);
      const double ts = period(field, sigma(z), cfg);
      gate.record(std::abs(ts - tz) / tz, z);
    } catch (const std::exception& e) {
      gate.fail(z, e);
    }
  }
  return gate.finish();
}

FixedSetCheck fixed_set_distance(const PlanarMap& sigma, std::span<const Point> samples, const ParametricCurve& delta,
                                 double tolerance_fixed, double tolerance_distance, double fixed_threshold) {
  ResidualGate on_delta("fixed_curve.delta_fixed", tolerance_fixed);
  ResidualGate fixed("fixed_curve.fixed_on_delta", tolerance_distance);
  FixedSetCheck out;
  for (const Point& z : samples) {
    try {
      const double moved = (sigma(z) - z).norm();
      const double dist = delta.distance(z);
      if (dist <= 1e-9 * scale_of(z)) {
        ++out.samples_on_delta;
        on_delta.record(moved, z);
      }
      if (moved <= fixed_threshold) {
        ++out.fixed_samples;
        fixed.record(dist, z);
      }
    } catch (const std::exception& e) {
      on_delta.fail(z, e);
      fixed.fail(z, e);
    }
  }
  out.delta_fixed = on_delta.finish();
  out.fixed_on_delta = fixed.finish();
  return out;
}

CheckResult check_non_triviality(const PlanarMap& sigma, std::span<const Point> samples, double threshold) {
  ResidualGate gate("non_triviality", threshold, Comparison::AtLeast, Extreme::Max);
  for (const Point& z : samples) {
    try {
      gate.record((sigma(z) - z).norm(), z);
    } catch (const std::exception& e) {
      gate.fail(z, e);
    }
  }
  return gate.finish();
}

nlohmann::json to_json(const CheckResult& check) {
  using nlohmann::json;
  auto number = [](double v) -> json { return std::isfinite(v) ? json(v) : json(format_number(v)); };
  json j;
  j["check_name"] = check.name;
  j["max_residual"] = number(check.max_residual);
  j["tolerance"] = number(check.tolerance);
  j["comparison"] = check.comparison == Comparison::AtMost ? "<=" : ">=";
  j["pass"] = check.pass;
  j["worst_point"] = check.worst_point ? json::array({check.worst_point->x(), check.worst_point->y()}) : json(nullptr);
  j["worst_time"] = check.worst_time ? json(*check.worst_time) : json(nullptr);
  j["evaluated"] = check.evaluated;
  j["errors"] = check.errors;
  return j;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["provenance"] = {{"field", report.provenance.field},
                     {"section", report.provenance.section},
                     {"config_digest", report.provenance.config_digest}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) j["checks"].push_back(to_json(c));
  j["passed"] = report.passed();
  j["total"] = report.checks.size();
  return j;
}

std::string summary_csv(const VerificationReport& report) {
  std::ostringstream os;
  os << "check,residual,tolerance,pass\n";
  for (const auto& c : report.checks) {
    os << c.name << ',' << format_number(c.max_residual) << ',' << format_number(c.tolerance) << ','
       << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

AnnulusPoints annulus_samples(const PlanarField& field, const Section& seed, std::size_t count, std::uint64_t seed_value,
                              const IntegratorConfig& cfg) {
  AnnulusPoints out;
  const double off_a = seed_offset(seed_value, kR2a);
  const double off_b = seed_offset(seed_value, kR2b);
  const double s_min = seed.curve.s_min();
  const double s_max = seed.curve.s_max();
  for (std::size_t n = 1; n <= count; ++n) {
    const double u = frac(off_a + static_cast<double>(n) * kR2a);
    double v = frac(off_b + static_cast<double>(n) * kR2b);
    if (v == 0.5) v = 0.5 + 1e-3;
    const double s = s_min + (s_max - s_min) * (0.05 + 0.9 * u);
    const double f = 0.02 + 0.96 * v;
    try {
      const Point base = seed(s);
      const double t = period(field, base, cfg);
      out.points.push_back(flow(field, base, f * t, cfg));
      out.params.push_back(s);
      out.fractions.push_back(f);
    } catch (const std::exception& e) {
      out.failures.push_back("s=" + format_number(s) + ": " + e.what());
    }
  }
  return out;
}

std::vector<double> sample_times(std::size_t count, std::uint64_t seed_value) {
  std::vector<double> out;
  const double off = seed_offset(seed_value, kR2b);
  for (std::size_t n = 1; n <= count; ++n) out.push_back(0.05 + 2.9 * frac(off + static_cast<double>(n) * kR2a));
  return out;
}

}  // namespace annulus
