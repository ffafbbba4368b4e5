#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include "annulus/flow.hpp"
#include "annulus/verify.hpp"

namespace annulus {

/// Thread-safe memo of T(z) keyed by the exact bits of z. Only identical
/// points hit, so results never depend on whether the cache is present.
class PeriodCache {
 public:
  std::optional<double> find(const Point& z) const;
  void store(const Point& z, double period);
  std::size_t size() const;

 private:
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  static Key key(const Point& z);

  mutable std::mutex mutex_;
  std::map<Key, double> periods_;
};

/// The half-period involution z -> phi(T(z)/2, z) on a period annulus.
class SymmetryInvolution {
 public:
  explicit SymmetryInvolution(PlanarField field, IntegratorConfig cfg = {},
                              std::shared_ptr<PeriodCache> cache = std::make_shared<PeriodCache>());

  Point operator()(const Point& z) const;
  double period_at(const Point& z) const;

  const PlanarField& field() const { return field_; }
  const IntegratorConfig& config() const { return cfg_; }

 private:
  PlanarField field_;
  IntegratorConfig cfg_;
  std::shared_ptr<PeriodCache> cache_;
};

Point sigma_symmetric(const PlanarField& field, const Point& z, const IntegratorConfig& cfg = {});

/// |sigma_f(sigma_f(z)) - z| for the time-fraction shift sigma_f(w) = phi(f T(w), w).
/// Vanishes only for f = 0 or 1/2 (mod 1).
double uniqueness_probe(const PlanarField& field, const Point& z, double fraction, const IntegratorConfig& cfg = {});

/// Fractions 0.05, 0.10, ..., 0.95 without 0.5.
std::vector<double> uniqueness_fractions();

struct SymmetryTolerances {
  double involution = 1e-7;       // relative to 1 + |z|
  double commutation = 1e-6;
  double period = 1e-7;           // relative to T
  double field_condition = 1e-4;  // central differences, h = 1e-5 (1 + |z|)
  double non_triviality = 0.1;    // lower bound on max |sigma(z) - z|
  double uniqueness_half = 1e-8;
  double uniqueness_other = 1e-3;  // lower bound
};

/// Full symmetry suite: involution, flow commutation, period invariance,
/// field condition (sign +1), non-triviality and the fraction-grid
/// uniqueness probe at the first sample.
VerificationReport verify_sigma_symmetry(const PlanarField& field, std::span<const Point> samples,
                                         std::span<const double> times, const IntegratorConfig& cfg = {},
                                         const SymmetryTolerances& tol = {});

}  // namespace annulus
