#include "annulus/symmetry.hpp"

#include <bit>
#include <cmath>

#include "annulus/period.hpp"

namespace annulus {

PeriodCache::Key PeriodCache::key(const Point& z) {
  return {std::bit_cast<std::uint64_t>(z.x()), std::bit_cast<std::uint64_t>(z.y())};
}

std::optional<double> PeriodCache::find(const Point& z) const {
  std::lock_guard lock(mutex_);
  auto it = periods_.find(key(z));
  if (it == periods_.end()) return std::nullopt;
  return it->second;
}

void PeriodCache::store(const Point& z, double period) {
  std::lock_guard lock(mutex_);
  periods_.emplace(key(z), period);
}

std::size_t PeriodCache::size() const {
  std::lock_guard lock(mutex_);
  return periods_.size();
}

SymmetryInvolution::SymmetryInvolution(PlanarField field, IntegratorConfig cfg, std::shared_ptr<PeriodCache> cache)
    : field_(std::move(field)), cfg_(cfg), cache_(std::move(cache)) {}

double SymmetryInvolution::period_at(const Point& z) const {
  if (cache_) {
    if (auto hit = cache_->find(z)) return *hit;
  }
  const double t = period(field_, z, cfg_);
  if (cache_) cache_->store(z, t);
  return t;
}

Point SymmetryInvolution::operator()(const Point& z) const { return flow(field_, z, period_at(z) / 2, cfg_); }

Point sigma_symmetric(const PlanarField& field, const Point& z, const IntegratorConfig& cfg) {
  return flow(field, z, period(field, z, cfg) / 2, cfg);
}

double uniqueness_probe(const PlanarField& field, const Point& z, double fraction, const IntegratorConfig& cfg) {
  auto shift = [&](const Point& w) { return flow(field, w, fraction * period(field, w, cfg), cfg); };
  return (shift(shift(z)) - z).norm();
}

std::vector<double> uniqueness_fractions() {
  std::vector<double> out;
  for (int k = 1; k <= 19; ++k) {
    if (k != 10) out.push_back(0.05 * k);
  }
  return out;
}

VerificationReport verify_sigma_symmetry(const PlanarField& field, std::span<const Point> samples,
                                         std::span<const double> times, const IntegratorConfig& cfg,
                                         const SymmetryTolerances& tol) {
  const SymmetryInvolution sigma(field, cfg);
  const PlanarMap map = [&sigma](const Point& z) { return sigma(z); };

  VerificationReport report;
  report.provenance.field = field.name();
  report.checks.push_back(check_involution(map, samples, tol.involution));
  report.checks.push_back(check_commutation(field, map, +1, samples, times, cfg, tol.commutation));
  report.checks.push_back(check_period_invariance(field, map, samples, cfg, tol.period));
  report.checks.push_back(check_field_condition(field, map, +1, samples, tol.field_condition));
  report.checks.push_back(check_non_triviality(map, samples, tol.non_triviality));

  ResidualGate half("uniqueness.half_period", tol.uniqueness_half);
  ResidualGate other("uniqueness.other_fractions", tol.uniqueness_other, Comparison::AtLeast, Extreme::Min);
  if (!samples.empty()) {
    const Point& z = samples.front();
    try {
      half.record(uniqueness_probe(field, z, 0.5, cfg), z, 0.5);
    } catch (const std::exception& e) {
      half.fail(z, e, 0.5);
    }
    for (double f : uniqueness_fractions()) {
      try {
        other.record(uniqueness_probe(field, z, f, cfg), z, f);
      } catch (const std::exception& e) {
        other.fail(z, e, f);
      }
    }
  }
  report.checks.push_back(half.finish());
  report.checks.push_back(other.finish());
  return report;
}

}  // namespace annulus
