#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "annulus/curve.hpp"
#include "annulus/flow.hpp"
#include "annulus/section.hpp"

namespace annulus {

using PlanarMap = std::function<Point(const Point&)>;

enum class Comparison { AtMost, AtLeast };
enum class Scaling { Absolute, Relative };

/// Outcome of one named residual gate.
///
/// `max_residual` holds the extreme the check gates on: the largest residual
/// for ordinary checks, the smallest value for lower-bound probes.
/// Any per-sample evaluation failure forces the residual to +inf (AtMost) or
/// -inf (AtLeast), so pass always equals the comparison against tolerance.
struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::AtMost;
  bool pass = true;
  std::optional<Point> worst_point;
  std::optional<double> worst_time;
  std::size_t evaluated = 0;
  std::vector<std::string> errors;
};

/// Which extreme of the per-sample values a gate keeps.
enum class Extreme { Max, Min };

/// Accumulates per-sample residuals into a CheckResult.
class ResidualGate {
 public:
  ResidualGate(std::string name, double tolerance, Comparison comparison = Comparison::AtMost,
               Extreme extreme = Extreme::Max);

  void record(double residual, const Point& z, std::optional<double> t = std::nullopt);
  void fail(const Point& z, const std::exception& e, std::optional<double> t = std::nullopt);
  CheckResult finish() const;

 private:
  CheckResult result_;
  Extreme extreme_;
};

struct Provenance {
  std::string field;
  std::string section;
  std::string config_digest;
};

struct VerificationReport {
  Provenance provenance;
  std::vector<CheckResult> checks;

  std::size_t passed() const;
  bool all_pass() const { return passed() == checks.size(); }
  const CheckResult& at(const std::string& name) const;
};

/// max |sigma(sigma(z)) - z| (divided by 1 + |z| when relative).
CheckResult check_involution(const PlanarMap& sigma, std::span<const Point> samples, double tolerance,
                             Scaling scaling = Scaling::Relative);

/// max |sigma(phi(t, z)) - phi(sign t, sigma(z))|. sign = +1 symmetry, -1 reversibility.
CheckResult check_commutation(const PlanarField& field, const PlanarMap& sigma, int sign,
                              std::span<const Point> samples, std::span<const double> times,
                              const IntegratorConfig& cfg, double tolerance);

/// max |V(sigma(z)) - sign J_sigma(z) V(z)| with J_sigma by central differences.
CheckResult check_field_condition(const PlanarField& field, const PlanarMap& sigma, int sign,
                                  std::span<const Point> samples, double tolerance, double h = 0.0);

/// max |T(sigma(z)) - T(z)| / T(z).
CheckResult check_period_invariance(const PlanarField& field, const PlanarMap& sigma, std::span<const Point> samples,
                                    const IntegratorConfig& cfg, double tolerance);

/// Fixed-curve gates for a reversibility with fixed curve delta.
struct FixedSetCheck {
  /// Over samples on delta: max |sigma(z) - z|.
  CheckResult delta_fixed;
  /// Over samples with |sigma(z) - z| <= fixed_threshold: max distance to delta.
  CheckResult fixed_on_delta;
  std::size_t samples_on_delta = 0;
  std::size_t fixed_samples = 0;
};

FixedSetCheck fixed_set_distance(const PlanarMap& sigma, std::span<const Point> samples, const ParametricCurve& delta,
                                 double tolerance_fixed = 1e-8, double tolerance_distance = 1e-6,
                                 double fixed_threshold = 1e-8);

/// max over samples of |sigma(z) - z|, required to reach `threshold`.
CheckResult check_non_triviality(const PlanarMap& sigma, std::span<const Point> samples, double threshold);

nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const VerificationReport& report);
/// Columns check,residual,tolerance,pass.
std::string summary_csv(const VerificationReport& report);

/// Deterministic annulus samples: points phi(f T(delta(s)), delta(s)) with
/// (s, f) from an additive low-discrepancy sequence offset by `seed`.
/// Fractions stay inside [0.02, 0.98] and never equal 1/2 exactly.
struct AnnulusPoints {
  std::vector<Point> points;
  std::vector<double> params;
  std::vector<double> fractions;
  std::vector<std::string> failures;
};
AnnulusPoints annulus_samples(const PlanarField& field, const Section& seed, std::size_t count, std::uint64_t seed_value,
                              const IntegratorConfig& cfg = {});

/// `count` times in (0, 3) from the same kind of sequence.
std::vector<double> sample_times(std::size_t count, std::uint64_t seed_value);

}  // namespace annulus
