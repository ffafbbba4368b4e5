#include <cmath>
#include <sstream>

#include "annulus/period.hpp"
#include "annulus/reversibility.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annulus;
using oracle::kPi;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Config;
}

Section section(const PlanarField& field, const std::string& text) {
  return make_section(parse_section_shorthand(text), field);
}

Point polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

}  // namespace

TEST_CASE("conjugate section examples") {
  const PlanarField lin = builtin_field("linear-center");
  const ConjugateSection star = conjugate_section(lin, section(lin, "x-axis [0.2, 2]"));
  REQUIRE(star.points.size() == star.grid.size());
  for (std::size_t i = 0; i < star.grid.size(); ++i) {
    CHECK((star.points[i] - Point(-star.grid[i], 0)).norm() <= 1e-9);
    CHECK(std::abs(star.periods[i] - 2 * kPi) <= 1e-9);
  }
  // The interpolant is exact on a straight image.
  CHECK((star(1.234) - Point(-1.234, 0)).norm() <= 1e-9);

  const ConjugateSection diag = conjugate_section(lin, section(lin, "diagonal [0.2, 2]"));
  for (std::size_t i = 0; i < diag.grid.size(); ++i) {
    CHECK((diag.points[i] + Point(diag.grid[i], diag.grid[i])).norm() <= 1e-9);
  }

  const PlanarField pend = builtin_field("pendulum");
  const ConjugateSection pstar = conjugate_section(pend, section(pend, "x-axis [0.2, 2.5]"));
  for (std::size_t i = 0; i < pstar.grid.size(); ++i) {
    CHECK((pstar.points[i] - Point(-pstar.grid[i], 0)).norm() <= 1e-6);
    CHECK(std::abs(pstar.periods[i] - oracle::pendulum_period(pstar.grid[i])) <= 1e-6);
  }

  std::ostringstream csv;
  write_csv(csv, star);
  CHECK(csv.str().rfind("s,x*,y*,T\n", 0) == 0);
}

TEST_CASE("a curve crossing a cycle twice is not a section") {
  const PlanarField lin = builtin_field("linear-center");
  // Transversal at its four grid points, but the radius oscillates, so the
  // circle through delta(0) meets the curve again.
  const expr::Variables s_only{{"s"}};
  const SectionSpec wobble = {"wobble", expr::parse("(1 + 0.2*sin(3*s))*cos(s)", s_only),
                              expr::parse("(1 + 0.2*sin(3*s))*sin(s)", s_only), 0.0, 3.0, 4};
  const Section delta = make_section(wobble, lin);
  CHECK(kind_of([&] { conjugate_section(lin, delta); }) == ErrorKind::NotASection);
}

TEST_CASE("classification of the linear center with delta = positive x-axis") {
  const PlanarField lin = builtin_field("linear-center");
  const ReversibilityInvolution sigma(lin, section(lin, "x-axis [0.2, 2]"));
  const Classification up = sigma.classify(Point(0, 1));
  CHECK(up.tag == BranchTag::APlus);
  CHECK(up.crossing_time == doctest::Approx(-kPi / 2).epsilon(1e-9));
  CHECK(sigma.classify(Point(0, -1)).tag == BranchTag::AMinus);
  CHECK(sigma.classify(Point(1.3, 0)).tag == BranchTag::OnDelta);
  CHECK(sigma.classify(Point(-1.3, 0)).tag == BranchTag::OnDeltaStar);
  CHECK(std::string(to_string(BranchTag::AMinus)) == "A_MINUS");
}

TEST_CASE("signed times tau and tau*") {
  const PlanarField lin = builtin_field("linear-center");
  const ReversibilityInvolution sigma(lin, section(lin, "x-axis [0.2, 2]"));
  CHECK(sigma.tau(Point(0, 1)) == doctest::Approx(-kPi / 2).epsilon(1e-9));
  CHECK(sigma.tau(Point(0, -1)) == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(sigma.tau_star(Point(0, 1)) == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(sigma.tau_star(Point(0, -1)) == doctest::Approx(-kPi / 2).epsilon(1e-9));
  CHECK(sigma.tau(Point(1.5, 0)) == 0.0);
  CHECK(sigma.tau_star(Point(-1.5, 0)) == 0.0);
  CHECK(kind_of([&] { sigma.tau(Point(-1.5, 0)); }) == ErrorKind::OnConjugateSection);
  CHECK(kind_of([&] { sigma.tau_star(Point(1.5, 0)); }) == ErrorKind::OnConjugateSection);

  const PlanarField pend = builtin_field("pendulum");
  const Section delta = section(pend, "x-axis [0.2, 2.5]");
  const Point z = flow(pend, Point(kPi / 2, 0), 1.0);
  CHECK(std::abs(tau(pend, delta, z) + 1.0) <= 1e-7);
}

TEST_CASE("shift law, range and the tau* relation") {
  const PlanarField duff = builtin_field("duffing");
  const ReversibilityInvolution sigma(duff, section(duff, "x-axis [0.2, 1.5]"));
  for (double s : {0.3, 0.8, 1.4}) {
    const double t_cycle = period(duff, Point(s, 0));
    for (double f : {0.1, 0.3, 0.45, 0.55, 0.7, 0.9}) {
      CAPTURE(s);
      CAPTURE(f);
      const Point z = flow(duff, Point(s, 0), f * t_cycle);
      const double t = sigma.tau(z);
      CHECK(std::abs(t - (f < 0.5 ? -f : 1 - f) * t_cycle) <= 1e-7);
      CHECK(std::abs(t) < t_cycle / 2);
      const double ts = sigma.tau_star(z);
      CHECK(std::abs(ts - (f < 0.5 ? t + t_cycle / 2 : t - t_cycle / 2)) <= 1e-7);
      for (double dt : {0.05, 0.2}) {
        const Point moved = flow(duff, z, dt);
        if (sigma.classify(moved).tag != sigma.classify(z).tag) continue;
        CHECK(std::abs(sigma.tau(moved) - (t - dt)) <= 1e-7);
      }
    }
  }
}

TEST_CASE("sigma examples") {
  const PlanarField lin = builtin_field("linear-center");
  const ReversibilityInvolution axis(lin, section(lin, "x-axis [0.2, 2]"));
  CHECK((axis(Point(0, 1)) - Point(0, -1)).norm() <= 1e-9);
  const ReversibilityInvolution diagonal(lin, section(lin, "diagonal [0.2, 2]"));
  CHECK((diagonal(Point(1, 0)) - Point(0, 1)).norm() <= 1e-9);

  const PlanarField pend = builtin_field("pendulum");
  const ReversibilityInvolution psigma(pend, section(pend, "x-axis [0.2, 2.5]"));
  CHECK((psigma(flow(pend, Point(1, 0), 0.7)) - flow(pend, Point(1, 0), -0.7)).norm() <= 1e-6);
}

TEST_CASE("mirror on the linear center at many angles") {
  const PlanarField lin = builtin_field("linear-center");
  const ReversibilityInvolution axis(lin, section(lin, "x-axis [0.2, 2]"));
  const ReversibilityInvolution diagonal(lin, section(lin, "diagonal [0.2, 2]"));
  double largest_gap = 0.0;
  for (int i = 0; i < 24; ++i) {
    const Point z = polar(0.3 + 0.07 * i, 0.1 + 2 * kPi * i * 0.618034);
    CHECK((axis(z) - Point(z.x(), -z.y())).norm() <= 1e-8);
    CHECK((diagonal(z) - Point(z.y(), z.x())).norm() <= 1e-8);
    largest_gap = std::max(largest_gap, (axis(z) - diagonal(z)).norm());
  }
  CHECK(largest_gap > 0.1);
}

TEST_CASE("fixed curve: delta and its conjugate") {
  const PlanarField pend = builtin_field("pendulum");
  const ReversibilityInvolution sigma(pend, section(pend, "x-axis [0.2, 2.5]"));
  for (double s : sigma.section().grid) {
    CHECK((sigma(sigma.section()(s)) - sigma.section()(s)).norm() <= 1e-8);
    // Time reflection on a cycle fixes the half-period point as well.
    const Point star = sigma.conjugate()(s);
    CHECK((sigma(star) - star).norm() <= 1e-8);
  }
  // Near delta*, both branches are evaluated and must agree.
  const Point near_star = sigma.conjugate()(1.0) + Point(0, 5e-8);
  CHECK((sigma(sigma(near_star)) - near_star).norm() <= 1e-7 * scale_of(near_star));
}

TEST_CASE("rectified chart: sigma acts as (u, v) -> (-u, v)") {
  const PlanarField duff = builtin_field("duffing");
  const ReversibilityInvolution sigma(duff, section(duff, "x-axis [0.2, 1.5]"));
  for (double s : {0.5, 1.0}) {
    for (double t : {-0.3, -0.05, 0.05, 0.3}) {
      const Point z = flow(duff, Point(s, 0), t);
      const Point uv = sigma.rectified(z);
      const Point image = sigma.rectified(sigma(z));
      CHECK(std::abs(uv.x() - t) <= 1e-7);
      CHECK(std::abs(uv.y() - s) <= 1e-7);
      CHECK((image - Point(-uv.x(), uv.y())).norm() <= 1e-6);
    }
  }
}

TEST_CASE("reversibility suites") {
  const std::vector<double> times = {0.3, 1.0, 2.5};
  SUBCASE("linear center, positive x-axis") {
    const PlanarField lin = builtin_field("linear-center");
    const ReversibilityInvolution sigma(lin, section(lin, "x-axis [0.2, 2]"));
    const AnnulusPoints samples = annulus_samples(lin, sigma.section(), 10, 11);
    const VerificationReport report = verify_reversibility(sigma, samples.points, times);
    CHECK(report.all_pass());
    for (const char* name : {"flow_anticommutation", "involution", "well_posedness"}) {
      CAPTURE(name);
      CHECK(report.at(name).max_residual <= 1e-8);
    }
  }
  SUBCASE("duffing, positive x-axis") {
    const PlanarField duff = builtin_field("duffing");
    const ReversibilityInvolution sigma(duff, section(duff, "x-axis [0.2, 1.5]"));
    const AnnulusPoints samples = annulus_samples(duff, sigma.section(), 10, 5);
    const VerificationReport report = verify_reversibility(sigma, samples.points, times);
    CHECK(report.all_pass());
    CHECK(report.at("flow_anticommutation").max_residual <= 1e-6);
  }
  SUBCASE("cubic center, diagonal") {
    const PlanarField cubic = builtin_field("cubic-center");
    const ReversibilityInvolution sigma(cubic, section(cubic, "diagonal [0.5, 2]"));
    const AnnulusPoints samples = annulus_samples(cubic, sigma.section(), 10, 5);
    const VerificationReport report = verify_reversibility(sigma, samples.points, times);
    CHECK(report.all_pass());
    CHECK(report.at("flow_anticommutation").max_residual <= 1e-6);
  }
}
