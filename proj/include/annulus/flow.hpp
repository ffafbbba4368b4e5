#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "annulus/dopri5.hpp"
#include "annulus/field.hpp"
#include "annulus/types.hpp"

namespace annulus {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 10'000'000;
  /// |t| above this is a horizon error; guards searches that never terminate.
  double max_time = 1e5;

  void validate() const;
};

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejections = 0;
  std::size_t rhs_evaluations = 0;
};

/// Dense solution segment of the flow. Steps tile [t_begin, t_end] (in the
/// direction of integration) without gaps.
template <typename Scalar>
class BasicTrajectory {
 public:
  using Step = DenseStep<Scalar>;
  using Vec = Vector2<Scalar>;

  BasicTrajectory() = default;
  BasicTrajectory(std::vector<Step> steps, IntegrationStats stats) : steps_(std::move(steps)), stats_(stats) {}

  bool empty() const { return steps_.empty(); }
  Scalar t_begin() const { return steps_.front().t0; }
  Scalar t_end() const { return steps_.back().t1; }
  const std::vector<Step>& steps() const { return steps_; }
  const IntegrationStats& stats() const { return stats_; }

  /// State at any t inside the covered span.
  Vec operator()(Scalar t) const {
    const Step& s = steps_[locate(t)];
    return s(t);
  }

  std::size_t locate(Scalar t) const {
    const bool forward = t_end() >= t_begin();
    auto before = [forward](const Step& s, Scalar value) { return forward ? s.t1 < value : s.t1 > value; };
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t, before);
    if (it == steps_.end()) return steps_.size() - 1;
    return static_cast<std::size_t>(it - steps_.begin());
  }

 private:
  std::vector<Step> steps_;
  IntegrationStats stats_;
};

using Trajectory = BasicTrajectory<double>;

/// Integrates V from z0 over [0, t] (t may be negative) and keeps every step.
Trajectory integrate(const PlanarField& field, const Point& z0, double t, const IntegratorConfig& cfg = {});

/// phi(t, z0). t = 0 returns z0 unchanged.
Point flow(const PlanarField& field, const Point& z0, double t, const IntegratorConfig& cfg = {});

enum class Crossing { Rising, Falling, Any };

/// Zero crossing of a scalar function g along the flow. `accept`, when set,
/// can veto a located root (e.g. a sign change of a signed distance that is
/// not on the curve itself).
struct EventSpec {
  std::function<double(const Point&)> g;
  Crossing direction = Crossing::Any;
  bool terminal = true;
  std::function<bool(const Point&)> accept;
  /// Magnitude of g below which the starting point counts as on the surface.
  double scale = 1.0;
};

struct EventHit {
  std::size_t event = 0;
  double t = 0.0;
  Point z = Point::Zero();
};

/// First strict crossing of `event` in time direction sign(direction),
/// |t| <= t_max. A root at t = 0 is ignored when g(z0) vanishes.
EventHit flow_to_event(const PlanarField& field, const Point& z0, const EventSpec& event, int direction, double t_max,
                       const IntegratorConfig& cfg = {});

/// Earliest crossing among several events; `event` in the hit is the index.
/// When `recorded` is given it receives every step taken, the last one
/// containing the hit.
EventHit flow_to_events(const PlanarField& field, const Point& z0, std::span<const EventSpec> events,
                        int direction, double t_max, const IntegratorConfig& cfg = {},
                        Trajectory* recorded = nullptr);

/// All crossings of `event` on a stored trajectory with time strictly inside
/// (t_lo, t_hi) (interpreted in the trajectory's direction).
std::vector<EventHit> crossings(const Trajectory& trajectory, const EventSpec& event, double t_lo, double t_hi);

/// Central-difference Jacobian of a planar map. h <= 0 selects 1e-5 (1 + |z|).
template <typename Map>
Matrix jacobian_fd(Map&& map, const Point& z, double h = 0.0) {
  if (h <= 0.0) h = 1e-5 * scale_of(z);
  Matrix j;
  for (int c = 0; c < 2; ++c) {
    Point dz = Point::Zero();
    dz[c] = h;
    const Point zp = z + dz;
    const Point zm = z - dz;
    // Divide by the representable stencil width, not 2h.
    j.col(c) = (map(zp) - map(zm)) / (zp[c] - zm[c]);
  }
  return j;
}

}  // namespace annulus
