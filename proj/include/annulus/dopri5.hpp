#pragma once

#include <algorithm>
#include <cmath>

#include "annulus/types.hpp"

namespace annulus {

/// One accepted step of the Dormand-Prince 5(4) pair together with its
/// continuous extension (Shampine's 4th-order interpolant).
template <typename Scalar>
struct DenseStep {
  using Vec = Vector2<Scalar>;

  Scalar t0{};
  Scalar t1{};
  Vec y0 = Vec::Zero();
  Vec y1 = Vec::Zero();
  // Interpolation coefficients, with y0 as the constant term.
  Vec r1 = Vec::Zero();
  Vec r2 = Vec::Zero();
  Vec r3 = Vec::Zero();
  Vec r4 = Vec::Zero();

  Scalar h() const { return t1 - t0; }

  /// State at time t in [t0, t1] (either orientation). Exact at both ends.
  Vec operator()(Scalar t) const {
    if (t == t0) return y0;
    if (t == t1) return y1;
    const Scalar theta = (t - t0) / (t1 - t0);
    const Scalar theta1 = Scalar(1) - theta;
    return y0 + theta * (r1 + theta1 * (r2 + theta * (r3 + theta1 * r4)));
  }
};

template <typename Scalar>
struct Dopri5Tableau {
  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                          a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                          a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  static constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
                          a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;
  // Error coefficients: b - b_hat.
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                          e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
  // Dense output.
  static constexpr Scalar d1 = Scalar(-12715105075.0L / 11282082432.0L), d3 = Scalar(87487479700.0L / 32700410799.0L),
                          d4 = Scalar(-10690763975.0L / 1880347072.0L), d5 = Scalar(701980252875.0L / 199316789632.0L),
                          d6 = Scalar(-1453857185.0L / 822651844.0L), d7 = Scalar(69997945.0L / 29380423.0L);
};

/// Result of attempting one step.
template <typename Scalar>
struct StepAttempt {
  DenseStep<Scalar> step;
  Vector2<Scalar> f1;  // rhs at the new state (first-same-as-last)
  Scalar error;        // scaled RMS error norm; accept when <= 1
};

/// Attempts a single Dormand-Prince step of signed size h from (t, y) with
/// f0 = rhs(y). The rhs is autonomous.
template <typename Scalar, typename Rhs>
StepAttempt<Scalar> dopri5_attempt(Rhs&& rhs, Scalar t, const Vector2<Scalar>& y, const Vector2<Scalar>& f0,
                                   Scalar h, Scalar rtol, Scalar atol) {
  using T = Dopri5Tableau<Scalar>;
  using Vec = Vector2<Scalar>;
  const Vec& k1 = f0;
  const Vec k2 = rhs(Vec(y + h * (T::a21 * k1)));
  const Vec k3 = rhs(Vec(y + h * (T::a31 * k1 + T::a32 * k2)));
  const Vec k4 = rhs(Vec(y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)));
  const Vec k5 = rhs(Vec(y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)));
  const Vec k6 = rhs(Vec(y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5)));
  const Vec y1 = y + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
  const Vec k7 = rhs(y1);

  const Vec err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
  Scalar sum = 0;
  for (int i = 0; i < 2; ++i) {
    const Scalar sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
    sum += (err[i] / sc) * (err[i] / sc);
  }

  StepAttempt<Scalar> out;
  out.step.t0 = t;
  out.step.t1 = t + h;
  out.step.y0 = y;
  out.step.y1 = y1;
  const Vec dy = y1 - y;
  const Vec bspl = h * k1 - dy;
  out.step.r1 = dy;
  out.step.r2 = bspl;
  out.step.r3 = dy - h * k7 - bspl;
  out.step.r4 = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 + T::d7 * k7);
  out.f1 = k7;
  out.error = std::sqrt(sum / 2);
  return out;
}

/// Hairer's starting step heuristic for a method of order 5.
template <typename Scalar, typename Rhs>
Scalar dopri5_initial_step(Rhs&& rhs, const Vector2<Scalar>& y, const Vector2<Scalar>& f0, Scalar direction,
                           Scalar rtol, Scalar atol, Scalar h_max) {
  Scalar dnf = 0, dny = 0;
  for (int i = 0; i < 2; ++i) {
    const Scalar sk = atol + rtol * std::abs(y[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y[i] / sk) * (y[i] / sk);
  }
  Scalar h = (dnf <= Scalar(1e-10) || dny <= Scalar(1e-10)) ? Scalar(1e-6) : std::sqrt(dny / dnf) * Scalar(0.01);
  h = std::min(h, h_max);
  const Vector2<Scalar> f1 = rhs(Vector2<Scalar>(y + direction * h * f0));
  Scalar der2 = 0;
  for (int i = 0; i < 2; ++i) {
    const Scalar sk = atol + rtol * std::abs(y[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const Scalar der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const Scalar h1 = der12 <= Scalar(1e-15) ? std::max(Scalar(1e-6), h * Scalar(1e-3))
                                           : std::pow(Scalar(0.01) / der12, Scalar(1) / 5);
  return std::min({Scalar(100) * h, h1, h_max});
}

}  // namespace annulus
