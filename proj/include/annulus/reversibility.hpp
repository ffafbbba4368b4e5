#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "annulus/curve.hpp"
#include "annulus/flow.hpp"
#include "annulus/section.hpp"
#include "annulus/verify.hpp"

namespace annulus {

/// Image of a section under the half-period map, tabulated on the section's
/// grid and joined by a natural cubic spline.
struct ConjugateSection {
  std::vector<double> grid;
  std::vector<Point> points;
  std::vector<double> periods;
  std::vector<double> transversality;
  ParametricCurve curve;

  Point operator()(double s) const { return curve.point(s); }
};

/// Tabulates phi(T(delta(s))/2, delta(s)) over delta's grid. Throws
/// NotASection when a cycle meets delta more than once per period and
/// Transversality when the image is tangent to the flow.
ConjugateSection conjugate_section(const PlanarField& field, const Section& delta, const IntegratorConfig& cfg = {});

/// Columns s,x*,y*,T.
void write_csv(std::ostream& out, const ConjugateSection& conjugate);

enum class BranchTag { OnDelta, OnDeltaStar, APlus, AMinus };
const char* to_string(BranchTag tag);

/// Distance below which a point counts as lying on delta or delta*.
inline double membership_tolerance(const Point& z) { return 1e-9 * scale_of(z); }
/// Band around delta* inside which both tau and tau* are evaluated and compared.
inline constexpr double kOverlapBand = 1e-7;

struct Classification {
  BranchTag tag = BranchTag::OnDelta;
  /// Backward time to the first crossing that decided the tag (0 on a curve).
  double crossing_time = 0.0;
};

/// A_PLUS when the backward orbit meets delta before delta*, A_MINUS otherwise.
Classification classify(const PlanarField& field, const Section& delta, const ConjugateSection& conjugate,
                        const Point& z, const IntegratorConfig& cfg = {});

/// Signed time to delta with |tau| < T/2: the backward hit on A+, the
/// forward hit on A-. Throws OnConjugateSection for z on delta*.
double tau(const PlanarField& field, const Section& delta, const Point& z, const IntegratorConfig& cfg = {});

/// Signed time to delta*, with the roles of the branches swapped.
/// Throws OnConjugateSection (with the roles swapped) for z on delta.
double tau_star(const PlanarField& field, const ConjugateSection& conjugate, const Point& z,
                const IntegratorConfig& cfg = {});

/// sigma(z) = phi(2 tau(z), z) off delta*, phi(2 tau*(z), z) on it.
Point sigma_reversible(const PlanarField& field, const Section& delta, const ConjugateSection& conjugate,
                       const Point& z, const IntegratorConfig& cfg = {});

/// Reversing involution with fixed curve delta, bundled with its conjugate section.
class ReversibilityInvolution {
 public:
  ReversibilityInvolution(PlanarField field, Section delta, const IntegratorConfig& cfg = {});

  Point operator()(const Point& z) const { return sigma_reversible(field_, delta_, conjugate_, z, cfg_); }
  double tau(const Point& z) const { return annulus::tau(field_, delta_, z, cfg_); }
  double tau_star(const Point& z) const { return annulus::tau_star(field_, conjugate_, z, cfg_); }
  Classification classify(const Point& z) const { return annulus::classify(field_, delta_, conjugate_, z, cfg_); }

  /// Flow-box coordinates near delta: u = -tau(z), v = section parameter of phi(tau(z), z).
  Point rectified(const Point& z) const;

  const PlanarField& field() const { return field_; }
  const Section& section() const { return delta_; }
  const ConjugateSection& conjugate() const { return conjugate_; }
  const IntegratorConfig& config() const { return cfg_; }

 private:
  PlanarField field_;
  Section delta_;
  ConjugateSection conjugate_;
  IntegratorConfig cfg_;
};

struct ReversibilityTolerances {
  double anticommutation = 1e-6;
  double involution = 1e-7;       // relative to 1 + |z|
  double delta_fixed = 1e-8;
  double fixed_distance = 1e-6;
  double well_posedness = 1e-6;
  double field_condition = 1e-4;  // central differences, h = 1e-5 (1 + |z|)
  double period = 1e-7;           // relative to T
};

/// Reversibility suite: anti-commutation, involution, fixed curve (both
/// directions), well-posedness of the two branches, field condition (sign -1)
/// and period invariance. Points of delta's grid are added to the samples for
/// the fixed-curve gates.
VerificationReport verify_reversibility(const ReversibilityInvolution& sigma, std::span<const Point> samples,
                                        std::span<const double> times, const ReversibilityTolerances& tol = {});

}  // namespace annulus
