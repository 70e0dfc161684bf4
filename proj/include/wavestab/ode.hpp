#pragma once

#include <algorithm>
#include <cmath>

#include "wavestab/errors.hpp"

namespace wavestab {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  double initial_step = 0.0;  // 0: span/100
  long max_steps = 2'000'000;
};

// Adaptive Dormand-Prince 5(4).  State is any Eigen-style vector/matrix type
// with cwiseAbs(); works for real and complex states alike.  Calls observer
// (if provided) after each accepted step with (t, y).
template <class State, class Deriv, class Observer>
State dopri5(Deriv&& f, double t0, double t1, State y,
             const OdeOptions& opt, Observer&& observer) {
  // clang-format off
  constexpr double c2=1.0/5, c3=3.0/10, c4=4.0/5, c5=8.0/9;
  constexpr double a21=1.0/5;
  constexpr double a31=3.0/40, a32=9.0/40;
  constexpr double a41=44.0/45, a42=-56.0/15, a43=32.0/9;
  constexpr double a51=19372.0/6561, a52=-25360.0/2187, a53=64448.0/6561, a54=-212.0/729;
  constexpr double a61=9017.0/3168, a62=-355.0/33, a63=46732.0/5247, a64=49.0/176, a65=-5103.0/18656;
  constexpr double a71=35.0/384, a73=500.0/1113, a74=125.0/192, a75=-2187.0/6784, a76=11.0/84;
  constexpr double e1=71.0/57600, e3=-71.0/16695, e4=71.0/1920, e5=-17253.0/339200, e6=22.0/525, e7=-1.0/40;
  // clang-format on

  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  double h = opt.initial_step != 0.0 ? opt.initial_step * dir
                                     : span / 100.0;
  State k1 = f(t, y);
  for (long step = 0; step < opt.max_steps; ++step) {
    if ((t - t1) * dir >= 0.0) return y;
    if ((t + h - t1) * dir > 0.0) h = t1 - t;

    State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    State k5 = f(t + c5 * h,
                 State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    State k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                       a64 * k4 + a65 * k5)));
    State ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    State k7 = f(t + h, ynew);
    State err_v = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    auto ea = err_v.cwiseAbs().eval();
    auto sa = (opt.atol +
               opt.rtol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array())
                  .eval();
    err = (ea.array() / sa).maxCoeff();

    if (err <= 1.0) {
      t += h;
      y = std::move(ynew);
      k1 = std::move(k7);  // FSAL
      observer(t, y);
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (std::abs(h) < 1e-15 * std::abs(span))
      fail(ErrorCode::IntegratorFailed, "step size underflow");
  }
  fail(ErrorCode::IntegratorFailed, "step limit exceeded");
}

template <class State, class Deriv>
State dopri5(Deriv&& f, double t0, double t1, State y0, const OdeOptions& opt) {
  return dopri5<State>(std::forward<Deriv>(f), t0, t1, std::move(y0), opt,
                       [](double, const State&) {});
}

}  // namespace wavestab
