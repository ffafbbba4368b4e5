#include <cmath>
#include <random>

#include "annulus/flow.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annulus;
using oracle::kPi;

namespace {

EventSpec coordinate_event(int index, Crossing dir) {
  EventSpec e;
  e.g = [index](const Point& z) { return z[index]; };
  e.direction = dir;
  return e;
}

}  // namespace

TEST_CASE("flow of the linear center is a rotation") {
  const PlanarField f = builtin_field("linear-center");
  CHECK((flow(f, Point(1, 0), kPi / 2) - Point(0, 1)).norm() <= 1e-9);
  const Point z(0.3, -1.1);
  CHECK(flow(f, z, 0.0) == z);
  for (double t : {-7.0, -1.3, 0.4, 2.0, 11.5}) {
    CHECK((flow(f, z, t) - oracle::rotate(z, t)).norm() <= 1e-9);
  }
}

TEST_CASE("pendulum returns after one quadrature period") {
  const PlanarField f = builtin_field("pendulum");
  const double period = oracle::pendulum_period(kPi / 2);
  CHECK(period == doctest::Approx(7.416298).epsilon(1e-6));
  const Point z0(kPi / 2, 0);
  CHECK((flow(f, z0, period) - z0).norm() <= 1e-7);
}

TEST_CASE("trajectory steps tile the interval and interpolate exactly at knots") {
  const PlanarField f = builtin_field("duffing");
  for (double t_end : {5.0, -5.0}) {
    const Trajectory tr = integrate(f, Point(1, 0.2), t_end);
    const auto& steps = tr.steps();
    REQUIRE(steps.size() > 10);
    CHECK(tr.t_begin() == 0.0);
    CHECK(tr.t_end() == t_end);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i > 0) {
        CHECK(steps[i].t0 == steps[i - 1].t1);
        CHECK(steps[i].y0 == steps[i - 1].y1);
      }
      CHECK(steps[i](steps[i].t0) == steps[i].y0);
      CHECK(steps[i](steps[i].t1) == steps[i].y1);
      CHECK(tr(steps[i].t1) == steps[i].y1);
    }
    CHECK(tr.stats().steps == steps.size());
    CHECK(tr.stats().rhs_evaluations >= 6 * steps.size());
  }
}

TEST_CASE("dense output is accurate between steps") {
  const PlanarField f = builtin_field("linear-center");
  const Point z(1.2, 0.4);
  const Trajectory tr = integrate(f, z, 6.0);
  double worst = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double t = 0.01 * i;
    worst = std::max(worst, (tr(t) - oracle::rotate(z, t)).norm());
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("property: group law and reversal over every built-in") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Case {
    const char* name;
    Point z;
    double period;
  };
  const Case cases[] = {
      {"linear-center", Point(1.3, 0), 2 * kPi},
      {"pendulum", Point(2.0, 0), oracle::pendulum_period(2.0)},
      {"duffing", Point(1.2, 0), oracle::duffing_period(1.2)},
      {"cubic-center", Point(0.8, 0), oracle::cubic_center_period(0.8)},
  };
  for (const auto& c : cases) {
    const PlanarField f = builtin_field(c.name);
    INFO(c.name);
    for (int i = 0; i < 5; ++i) {
      const double s = (unit(rng) * 2 - 1) * c.period;
      const double t = (unit(rng) * 2 - 1) * (2 * c.period - std::abs(s));
      const Point lhs = flow(f, flow(f, c.z, t), s);
      const Point rhs = flow(f, c.z, s + t);
      CHECK((lhs - rhs).norm() <= 1e-8 * scale_of(c.z));
      CHECK((flow(f, flow(f, c.z, t), -t) - c.z).norm() <= 1e-8);
    }
  }
}

TEST_CASE("property: tightening rtol does not increase the error") {
  const PlanarField f = builtin_field("linear-center");
  const Point z(0.7, -0.9);
  IntegratorConfig ref_cfg;
  ref_cfg.rtol = 1e-13;
  ref_cfg.atol = 1e-15;
  const double t = 9.0;
  const Point ref = flow(f, z, t, ref_cfg);
  double previous = std::numeric_limits<double>::infinity();
  for (double rtol = 1e-4; rtol >= 1e-10; rtol /= 2) {
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = rtol * 1e-2;
    const double err = (flow(f, z, t, cfg) - ref).norm();
    INFO("rtol = ", rtol);
    CHECK(err <= previous);
    previous = err;
  }
}

TEST_CASE("flow_to_event locates crossings") {
  const PlanarField lin = builtin_field("linear-center");
  // From (0,1) the rotation reaches the negative x-axis with y decreasing.
  EventHit hit = flow_to_event(lin, Point(0, 1), coordinate_event(1, Crossing::Falling), +1, 100.0);
  CHECK(hit.t == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK((hit.z - Point(-1, 0)).norm() <= 1e-9);

  // Starting on the surface: the t = 0 root is ignored.
  hit = flow_to_event(lin, Point(1, 0), coordinate_event(1, Crossing::Any), +1, 100.0);
  CHECK(std::abs(hit.t - kPi) <= 1e-9);
  CHECK((hit.z - Point(-1, 0)).norm() <= 1e-9);

  // Same-direction return is the full period.
  hit = flow_to_event(lin, Point(1, 0), coordinate_event(1, Crossing::Rising), +1, 100.0);
  CHECK(std::abs(hit.t - 2 * kPi) <= 1e-9);

  // Backward in time.
  hit = flow_to_event(lin, Point(0, 1), coordinate_event(1, Crossing::Any), -1, 100.0);
  CHECK(std::abs(hit.t + kPi / 2) <= 1e-9);
  CHECK((hit.z - Point(1, 0)).norm() <= 1e-9);

  const PlanarField duf = builtin_field("duffing");
  hit = flow_to_event(duf, Point(1, 0), coordinate_event(1, Crossing::Any), +1, 100.0);
  CHECK(std::abs(hit.t - oracle::duffing_period(1.0) / 2) <= 1e-8);
  CHECK(std::abs(duf(hit.z).dot(Point(0, 1))) > 0.1);
}

TEST_CASE("event consistency: root is on the surface with the requested sign change") {
  const PlanarField pend = builtin_field("pendulum");
  EventSpec e;
  e.g = [](const Point& z) { return z.x() + 0.5 * z.y() - 0.3; };
  e.direction = Crossing::Rising;
  const Point z0(-1.0, 0.4);
  const EventHit hit = flow_to_event(pend, z0, e, +1, 100.0);
  CHECK(std::abs(e.g(hit.z)) <= 1e-10);
  const Trajectory tr = integrate(pend, z0, hit.t + 0.01);
  CHECK(e.g(tr(hit.t - 1e-4)) < 0.0);
  CHECK(e.g(tr(hit.t + 1e-4)) > 0.0);
}

TEST_CASE("event errors") {
  const PlanarField lin = builtin_field("linear-center");
  try {
    flow_to_event(lin, Point(1, 0), coordinate_event(0, Crossing::Any), +1, 1.0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoEvent);
  }
  IntegratorConfig tiny;
  tiny.max_steps = 3;
  try {
    flow_to_event(lin, Point(1, 0), coordinate_event(1, Crossing::Any), +1, 100.0, tiny);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepLimit);
  }
  try {
    flow(lin, Point(1, 0), 2e5);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Horizon);
  }
}

TEST_CASE("leaving the declared domain is an error") {
  const PlanarField boxed = PlanarField::from_strings("boxed", "-y", "x", Box{-1.5, 1.5, -0.5, 0.5});
  try {
    flow(boxed, Point(1, 0), 2.0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LeftDomain);
  }
  const PlanarField singular = PlanarField::from_strings("singular", "1", "1/x");
  try {
    flow(singular, Point(0, 0), 1.0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("stored trajectories report interior crossings") {
  const PlanarField lin = builtin_field("linear-center");
  const Trajectory tr = integrate(lin, Point(1, 0), 4 * kPi);
  const auto hits = crossings(tr, coordinate_event(1, Crossing::Any), 0.0, 3.5 * kPi);
  REQUIRE(hits.size() == 3);
  CHECK(std::abs(hits[0].t - kPi) <= 1e-9);
  CHECK(std::abs(hits[1].t - 2 * kPi) <= 1e-9);
  CHECK(std::abs(hits[2].t - 3 * kPi) <= 1e-9);
}

TEST_CASE("jacobian_fd") {
  const Point z(0.3, 0.7);
  CHECK((jacobian_fd([](const Point& p) { return p; }, z) - Matrix::Identity()).norm() <= 1e-12);
  const Matrix mirror = jacobian_fd([](const Point& p) { return Point(p.x(), -p.y()); }, z);
  CHECK((mirror - Matrix(Eigen::Vector2d(1, -1).asDiagonal())).norm() <= 1e-10);

  const PlanarField lin = builtin_field("linear-center");
  const auto v = [&](const Point& p) { return lin(p); };
  const auto dv = [&](const Point& p) { return lin.jacobian(p); };
  const auto ref = oracle::variational_rk4(v, dv, Point(1, 0), kPi / 2, 2000);
  const Matrix fd = jacobian_fd([&](const Point& p) { return flow(lin, p, kPi / 2); }, Point(1, 0));
  CHECK((fd - ref.jacobian).norm() <= 1e-7);
  CHECK((ref.jacobian - (Matrix() << 0, -1, 1, 0).finished()).norm() <= 1e-9);
}
