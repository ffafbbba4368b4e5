#include "annulus/period.hpp"

#include <cmath>
#include <limits>

#include "annulus/io.hpp"

namespace annulus {

Cycle detect_cycle(const PlanarField& field, const Point& z, const IntegratorConfig& cfg) {
  const Point v = field(z);
  if (v.norm() < 1e-12) throw Error(ErrorKind::CriticalPoint, "critical point: |V(z)| below 1e-12");
  const Point normal = v.normalized();

  EventSpec transversal;
  transversal.g = [z, normal](const Point& w) { return (w - z).dot(normal); };
  transversal.direction = Crossing::Rising;
  transversal.scale = scale_of(z);

  Cycle cycle;
  cycle.base = z;
  const EventHit hit = flow_to_events(field, z, std::span<const EventSpec>(&transversal, 1), +1, cfg.max_time, cfg,
                                      &cycle.trajectory);
  cycle.period = hit.t;
  cycle.closure_residual = (hit.z - z).norm();
  if (!(cycle.closure_residual <= 1e-8 * scale_of(z))) {
    throw Error(ErrorKind::NotACycle,
                "orbit does not close: first return misses the base point by " + format_number(cycle.closure_residual),
                hit.t);
  }
  return cycle;
}

double period(const PlanarField& field, const Point& z, const IntegratorConfig& cfg) {
  return detect_cycle(field, z, cfg).period;
}

AnnulusSample sample_annulus(const PlanarField& field, const Section& seed, std::span<const double> params,
                             const IntegratorConfig& cfg) {
  AnnulusSample out;
  out.params.assign(params.begin(), params.end());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double s = params[i];
    Point z = Point::Constant(std::numeric_limits<double>::quiet_NaN());
    try {
      z = seed(s);
      out.seeds.push_back(z);
      out.cycles.emplace_back(detect_cycle(field, z, cfg));
    } catch (const Error& e) {
      if (out.seeds.size() == i) out.seeds.push_back(z);
      out.cycles.emplace_back(std::nullopt);
      out.failures.push_back({i, s, e.kind(), e.what()});
    }
  }
  return out;
}

void write_csv(std::ostream& out, const AnnulusSample& sample) {
  out << "s,x0,y0,T,closure_residual\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < sample.params.size(); ++i) {
    const auto& c = sample.cycles[i];
    out << format_number(sample.params[i]) << ',' << format_number(sample.seeds[i].x()) << ','
        << format_number(sample.seeds[i].y()) << ',' << format_number(c ? c->period : nan) << ','
        << format_number(c ? c->closure_residual : nan) << '\n';
  }
}

}  // namespace annulus
