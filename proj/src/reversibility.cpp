#include "annulus/reversibility.hpp"

#include <cmath>
#include <memory>

#include "annulus/io.hpp"
#include "annulus/period.hpp"

namespace annulus {

namespace {

struct SignedTime {
  double value = 0.0;
  /// Backward and forward hits are equally far: z sits on the conjugate curve.
  bool ambiguous = false;
};

/// Signed time to the crossing of `curve` nearest in time along the orbit of z.
SignedTime nearest_crossing_time(const PlanarField& field, const ParametricCurve& curve, const Point& z,
                                 const IntegratorConfig& cfg) {
  EventSpec event = curve.crossing_event(Crossing::Any);
  event.scale = scale_of(z);
  const EventHit back = flow_to_event(field, z, event, -1, cfg.max_time, cfg);
  const double span = -back.t;
  std::optional<double> forward;
  try {
    forward = flow_to_event(field, z, event, +1, span * (1.0 + 1e-6) + 1e-9, cfg).t;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoEvent) throw;
  }
  SignedTime out;
  out.value = back.t;
  if (forward) {
    const double speed = field(z).norm();
    out.ambiguous = std::abs(*forward - span) <= 2.0 * membership_tolerance(z) / speed;
    if (*forward < span) out.value = *forward;
  }
  return out;
}

}  // namespace

const char* to_string(BranchTag tag) {
  switch (tag) {
    case BranchTag::OnDelta: return "ON_DELTA";
    case BranchTag::OnDeltaStar: return "ON_DELTA_STAR";
    case BranchTag::APlus: return "A_PLUS";
    case BranchTag::AMinus: return "A_MINUS";
  }
  return "?";
}

ConjugateSection conjugate_section(const PlanarField& field, const Section& delta, const IntegratorConfig& cfg) {
  ConjugateSection out;
  out.grid = delta.grid;
  const EventSpec on_delta = delta.curve.crossing_event(Crossing::Any);
  for (double s : delta.grid) {
    const Point z = delta(s);
    Cycle cycle;
    try {
      cycle = detect_cycle(field, z, cfg);
    } catch (const Error& e) {
      throw Error(e.kind(), "cycle through delta(" + format_number(s) + ") failed: " + e.what(), s);
    }
    const double t = cycle.period;
    const auto extra = crossings(cycle.trajectory, on_delta, 1e-6 * t, t * (1.0 - 1e-6));
    if (!extra.empty()) {
      throw Error(ErrorKind::NotASection,
                  "not a section for this annulus: the cycle through s = " + format_number(s) +
                      " meets the curve again at t = " + format_number(extra.front().t),
                  s);
    }
    out.points.push_back(flow(field, z, t / 2, cfg));
    out.periods.push_back(t);
  }

  std::vector<double> xs, ys;
  for (const Point& p : out.points) {
    xs.push_back(p.x());
    ys.push_back(p.y());
  }
  auto sx = std::make_shared<CubicSpline>(out.grid, xs);
  auto sy = std::make_shared<CubicSpline>(out.grid, ys);
  out.curve = ParametricCurve([sx, sy](double s) { return Point((*sx)(s), (*sy)(s)); },
                              [sx, sy](double s) { return Point(sx->derivative(s), sy->derivative(s)); },
                              out.grid.front(), out.grid.back());

  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const Point tangent = out.curve.tangent(out.grid[i]);
    const Point v = field(out.points[i]);
    out.transversality.push_back(tangent.x() * v.y() - tangent.y() * v.x());
    if (!transversal(tangent, v)) {
      throw Error(ErrorKind::Transversality,
                  "conjugate curve is not transversal at s = " + format_number(out.grid[i]), out.grid[i]);
    }
  }
  return out;
}

void write_csv(std::ostream& out, const ConjugateSection& conjugate) {
  out << "s,x*,y*,T\n";
  for (std::size_t i = 0; i < conjugate.grid.size(); ++i) {
    out << format_number(conjugate.grid[i]) << ',' << format_number(conjugate.points[i].x()) << ','
        << format_number(conjugate.points[i].y()) << ',' << format_number(conjugate.periods[i]) << '\n';
  }
}

Classification classify(const PlanarField& field, const Section& delta, const ConjugateSection& conjugate,
                        const Point& z, const IntegratorConfig& cfg) {
  if (delta.curve.distance(z) <= membership_tolerance(z)) return {BranchTag::OnDelta, 0.0};
  if (conjugate.curve.distance(z) <= membership_tolerance(z)) return {BranchTag::OnDeltaStar, 0.0};
  EventSpec events[2] = {delta.curve.crossing_event(), conjugate.curve.crossing_event()};
  for (auto& e : events) e.scale = scale_of(z);
  const EventHit hit = flow_to_events(field, z, events, -1, cfg.max_time, cfg);
  return {hit.event == 0 ? BranchTag::APlus : BranchTag::AMinus, hit.t};
}

double tau(const PlanarField& field, const Section& delta, const Point& z, const IntegratorConfig& cfg) {
  if (delta.curve.distance(z) <= membership_tolerance(z)) return 0.0;
  const SignedTime t = nearest_crossing_time(field, delta.curve, z, cfg);
  if (t.ambiguous) throw Error(ErrorKind::OnConjugateSection, "tau is undefined on the conjugate curve; use tau*");
  return t.value;
}

double tau_star(const PlanarField& field, const ConjugateSection& conjugate, const Point& z,
                const IntegratorConfig& cfg) {
  if (conjugate.curve.distance(z) <= membership_tolerance(z)) return 0.0;
  const SignedTime t = nearest_crossing_time(field, conjugate.curve, z, cfg);
  if (t.ambiguous) throw Error(ErrorKind::OnConjugateSection, "tau* is undefined on the section; use tau");
  return t.value;
}

Point sigma_reversible(const PlanarField& field, const Section& delta, const ConjugateSection& conjugate,
                       const Point& z, const IntegratorConfig& cfg) {
  if (delta.curve.distance(z) <= membership_tolerance(z)) return z;
  const double to_conjugate = conjugate.curve.distance(z);
  if (to_conjugate <= membership_tolerance(z)) return z;  // tau* = 0

  const SignedTime t = nearest_crossing_time(field, delta.curve, z, cfg);
  const bool in_band = to_conjugate <= kOverlapBand * scale_of(z);
  if (t.ambiguous && !in_band) {
    throw Error(ErrorKind::OnConjugateSection, "orbit is equidistant in time from the section but off its image");
  }
  const Point image = flow(field, z, 2.0 * t.value, cfg);
  if (in_band) {
    const double ts = tau_star(field, conjugate, z, cfg);
    const Point other = flow(field, z, 2.0 * ts, cfg);
    if ((other - image).norm() > 1e-6) {
      throw Error(ErrorKind::WellPosedness, "tau and tau* branches disagree by " + format_number((other - image).norm()));
    }
  }
  return image;
}

ReversibilityInvolution::ReversibilityInvolution(PlanarField field, Section delta, const IntegratorConfig& cfg)
    : field_(std::move(field)), delta_(std::move(delta)), cfg_(cfg) {
  conjugate_ = conjugate_section(field_, delta_, cfg_);
}

Point ReversibilityInvolution::rectified(const Point& z) const {
  const double t = tau(z);
  const Point foot = flow(field_, z, t, cfg_);
  return {-t, delta_.curve.project(foot).s};
}

VerificationReport verify_reversibility(const ReversibilityInvolution& sigma, std::span<const Point> samples,
                                        std::span<const double> times, const ReversibilityTolerances& tol) {
  const PlanarField& field = sigma.field();
  const IntegratorConfig& cfg = sigma.config();
  const PlanarMap map = [&sigma](const Point& z) { return sigma(z); };

  VerificationReport report;
  report.provenance.field = field.name();
  report.provenance.section = sigma.section().description;

  report.checks.push_back(check_commutation(field, map, -1, samples, times, cfg, tol.anticommutation));
  report.checks.push_back(check_involution(map, samples, tol.involution));

  std::vector<Point> with_delta(samples.begin(), samples.end());
  for (double s : sigma.section().grid) with_delta.push_back(sigma.section()(s));
  FixedSetCheck fixed =
      fixed_set_distance(map, with_delta, sigma.section().curve, tol.delta_fixed, tol.fixed_distance, 1e-8);
  report.checks.push_back(fixed.delta_fixed);
  report.checks.push_back(fixed.fixed_on_delta);

  ResidualGate well_posed("well_posedness", tol.well_posedness);
  for (const Point& z : samples) {
    if (sigma.section().curve.distance(z) <= membership_tolerance(z) ||
        sigma.conjugate().curve.distance(z) <= membership_tolerance(z)) {
      continue;
    }
    try {
      const Point a = flow(field, z, 2.0 * sigma.tau(z), cfg);
      const Point b = flow(field, z, 2.0 * sigma.tau_star(z), cfg);
      well_posed.record((a - b).norm(), z);
    } catch (const std::exception& e) {
      well_posed.fail(z, e);
    }
  }
  report.checks.push_back(well_posed.finish());

  report.checks.push_back(check_field_condition(field, map, -1, samples, tol.field_condition));
  report.checks.push_back(check_period_invariance(field, map, samples, cfg, tol.period));
  return report;
}

}  // namespace annulus
