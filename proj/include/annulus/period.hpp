#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "annulus/flow.hpp"
#include "annulus/section.hpp"

namespace annulus {

/// Closed orbit through `base` with minimal period `period`.
struct Cycle {
  Point base = Point::Zero();
  double period = 0.0;
  /// Dense solution from the base point covering at least [0, period].
  Trajectory trajectory;
  /// |phi(T, base) - base|.
  double closure_residual = 0.0;
};

/// First return to the line through z normal to V(z), crossed in the same
/// direction as at z. Throws CriticalPoint when |V(z)| < 1e-12, NotACycle
/// when the return misses z by more than 1e-8 (1 + |z|), and NoEvent when
/// nothing returns within the horizon guard.
Cycle detect_cycle(const PlanarField& field, const Point& z, const IntegratorConfig& cfg = {});

/// T(z).
double period(const PlanarField& field, const Point& z, const IntegratorConfig& cfg = {});

struct SampleFailure {
  std::size_t index = 0;
  double parameter = 0.0;
  ErrorKind kind = ErrorKind::NoEvent;
  std::string message;
};

/// Cycles through seed points delta(s); failures are collected per point.
struct AnnulusSample {
  std::vector<double> params;
  std::vector<Point> seeds;
  std::vector<std::optional<Cycle>> cycles;
  std::vector<SampleFailure> failures;

  bool ok() const { return failures.empty(); }
};

AnnulusSample sample_annulus(const PlanarField& field, const Section& seed, std::span<const double> params,
                             const IntegratorConfig& cfg = {});

/// Columns s,x0,y0,T,closure_residual. Failed rows carry nan.
void write_csv(std::ostream& out, const AnnulusSample& sample);

}  // namespace annulus
