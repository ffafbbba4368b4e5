#include "annulus/flow.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <string>

namespace annulus {

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw Error(ErrorKind::Config, "integrator tolerances must be positive");
  if (max_steps < 1) throw Error(ErrorKind::Config, "max step count must be at least 1");
  if (!(max_time > 0.0)) throw Error(ErrorKind::Config, "max time must be positive");
}

namespace {

using Step = DenseStep<double>;

struct FieldRhs {
  const PlanarField& field;
  IntegrationStats& stats;

  Point operator()(const Point& z) const {
    ++stats.rhs_evaluations;
    if (!field.domain().contains(z)) {
      throw Error(ErrorKind::LeftDomain, "state (" + std::to_string(z.x()) + ", " + std::to_string(z.y()) +
                                             ") left the declared domain");
    }
    return field(z);
  }
};

/// Integrates from (0, z0) toward t_end, handing each accepted step to
/// `observer`, which returns true to stop early.
template <typename Observer>
IntegrationStats drive(const PlanarField& field, const Point& z0, double t_end, const IntegratorConfig& cfg,
                       Observer&& observer) {
  cfg.validate();
  IntegrationStats stats;
  if (t_end == 0.0) return stats;
  if (!field.domain().contains(z0)) throw Error(ErrorKind::LeftDomain, "initial point outside the declared domain");

  FieldRhs rhs{field, stats};
  const double dir = t_end > 0.0 ? 1.0 : -1.0;
  const double span = std::abs(t_end);
  Point y = z0;
  Point f = rhs(y);
  double elapsed = 0.0;  // |t|
  double h = dopri5_initial_step<double>(rhs, y, f, dir, cfg.rtol, cfg.atol, span);
  bool rejected_last = false;

  while (elapsed < span) {
    if (stats.steps + stats.rejections >= cfg.max_steps) {
      throw Error(ErrorKind::StepLimit, "step limit of " + std::to_string(cfg.max_steps) + " exceeded", dir * elapsed);
    }
    if (h <= 1e-14 * std::max(1.0, elapsed)) {
      throw Error(ErrorKind::StepLimit, "step size underflow", dir * elapsed);
    }
    bool last = false;
    double hs = h;
    if (elapsed + hs >= span) {
      hs = span - elapsed;
      last = true;
    }
    auto attempt = dopri5_attempt<double>(rhs, dir * elapsed, y, f, dir * hs, cfg.rtol, cfg.atol);
    if (!std::isfinite(attempt.error)) {
      throw Error(ErrorKind::Domain, "non-finite state during integration", dir * elapsed);
    }
    if (attempt.error <= 1.0) {
      ++stats.steps;
      if (last) attempt.step.t1 = t_end;
      y = attempt.step.y1;
      f = attempt.f1;
      elapsed = last ? span : elapsed + hs;
      if (observer(attempt.step)) break;
      double fac = attempt.error == 0.0 ? 5.0 : 0.9 * std::pow(attempt.error, -0.2);
      fac = std::clamp(fac, 0.2, 5.0);
      if (rejected_last) fac = std::min(fac, 1.0);
      h = hs * fac;
      rejected_last = false;
    } else {
      ++stats.rejections;
      h = hs * std::max(0.2, 0.9 * std::pow(attempt.error, -0.2));
      rejected_last = true;
    }
  }
  return stats;
}

bool direction_matches(Crossing want, double g0, double g1) {
  const bool rising = g0 < 0.0 && g1 >= 0.0;
  const bool falling = g0 > 0.0 && g1 <= 0.0;
  switch (want) {
    case Crossing::Rising: return rising;
    case Crossing::Falling: return falling;
    case Crossing::Any: return rising || falling;
  }
  return false;
}

/// Root of g on the step interpolant, given end values g0 (at t0) and g1 (at t1).
std::optional<EventHit> locate(const Step& step, const EventSpec& event, double g0, double g1) {
  if (g0 == 0.0 || !direction_matches(event.direction, g0, g1)) return std::nullopt;
  double t_root = step.t1;
  if (g1 != 0.0) {
    auto g_of = [&](double theta) { return event.g(step(step.t0 + theta * (step.t1 - step.t0))); };
    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    const auto [a, b] = boost::math::tools::toms748_solve(g_of, 0.0, 1.0, g0, g1, tol, max_iter);
    const double ga = g_of(a);
    const double gb = g_of(b);
    const double theta = std::abs(ga) <= std::abs(gb) ? a : b;
    t_root = theta == 1.0 ? step.t1 : step.t0 + theta * (step.t1 - step.t0);
  }
  EventHit hit;
  hit.t = t_root;
  hit.z = step(t_root);
  if (event.accept && !event.accept(hit.z)) return std::nullopt;
  return hit;
}

bool starts_on_surface(const EventSpec& e, double g0) { return std::abs(g0) <= 1e-12 * e.scale; }

}  // namespace

Trajectory integrate(const PlanarField& field, const Point& z0, double t, const IntegratorConfig& cfg) {
  if (std::abs(t) > cfg.max_time) throw Error(ErrorKind::Horizon, "requested time exceeds the horizon guard", t);
  std::vector<Step> steps;
  auto stats = drive(field, z0, t, cfg, [&](const Step& s) {
    steps.push_back(s);
    return false;
  });
  if (steps.empty()) {
    Step s;
    s.y0 = s.y1 = z0;
    steps.push_back(s);
  }
  return Trajectory(std::move(steps), stats);
}

Point flow(const PlanarField& field, const Point& z0, double t, const IntegratorConfig& cfg) {
  if (t == 0.0) return z0;
  if (std::abs(t) > cfg.max_time) throw Error(ErrorKind::Horizon, "requested time exceeds the horizon guard", t);
  Point end = z0;
  drive(field, z0, t, cfg, [&](const Step& s) {
    end = s.y1;
    return false;
  });
  return end;
}

EventHit flow_to_event(const PlanarField& field, const Point& z0, const EventSpec& event, int direction, double t_max,
                       const IntegratorConfig& cfg) {
  return flow_to_events(field, z0, std::span<const EventSpec>(&event, 1), direction, t_max, cfg);
}

EventHit flow_to_events(const PlanarField& field, const Point& z0, std::span<const EventSpec> events, int direction,
                        double t_max, const IntegratorConfig& cfg, Trajectory* recorded) {
  if (events.empty()) throw Error(ErrorKind::Config, "no events given");
  const double limit = std::min(std::abs(t_max), cfg.max_time);
  const double t_end = direction >= 0 ? limit : -limit;

  std::vector<double> g_prev(events.size());
  std::vector<bool> skip_first(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    g_prev[i] = events[i].g(z0);
    skip_first[i] = starts_on_surface(events[i], g_prev[i]);
  }

  std::optional<EventHit> found;
  bool first = true;
  std::vector<Step> steps;
  const auto stats = drive(field, z0, t_end, cfg, [&](const Step& step) {
    if (recorded) steps.push_back(step);
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double g1 = events[i].g(step.y1);
      if (!(first && skip_first[i])) {
        if (auto hit = locate(step, events[i], g_prev[i], g1)) {
          if (!found || std::abs(hit->t) < std::abs(found->t)) {
            found = hit;
            found->event = i;
          }
        }
      }
      g_prev[i] = g1;
    }
    first = false;
    return found.has_value();
  });
  if (!found) {
    throw Error(ErrorKind::NoEvent, "no event crossing within |t| <= " + std::to_string(limit), t_end);
  }
  if (recorded) *recorded = Trajectory(std::move(steps), stats);
  return *found;
}

std::vector<EventHit> crossings(const Trajectory& trajectory, const EventSpec& event, double t_lo, double t_hi) {
  std::vector<EventHit> out;
  if (trajectory.empty()) return out;
  const bool forward = trajectory.t_end() >= trajectory.t_begin();
  auto inside = [&](double t) { return forward ? (t > t_lo && t < t_hi) : (t < t_lo && t > t_hi); };
  double g_prev = event.g(trajectory.steps().front().y0);
  bool skip = starts_on_surface(event, g_prev);
  for (const Step& step : trajectory.steps()) {
    const double g1 = event.g(step.y1);
    if (!skip) {
      if (auto hit = locate(step, event, g_prev, g1); hit && inside(hit->t)) out.push_back(*hit);
    }
    skip = false;
    g_prev = g1;
  }
  return out;
}

}  // namespace annulus
