#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "revcurv/errors.hpp"

namespace revcurv {

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = 0;
};

/// One Dormand-Prince 5(4) step. When `err` is given it receives the difference
/// between the fifth- and fourth-order solutions.
template <typename Vec, typename F>
Vec dopri_step(F&& f, double s, const Vec& y, double h, Vec* err = nullptr) {
  const Vec k1 = f(s, y);
  const Vec k2 = f(s + h / 5, (y + h * (k1 / 5)).eval());
  const Vec k3 = f(s + 3 * h / 10, (y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2)).eval());
  const Vec k4 = f(s + 4 * h / 5, (y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3)).eval());
  const Vec k5 = f(s + 8 * h / 9, (y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                            64448.0 / 6561 * k3 - 212.0 / 729 * k4)).eval());
  const Vec k6 = f(s + h, (y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                                    49.0 / 176 * k4 - 5103.0 / 18656 * k5)).eval());
  const Vec y5 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                          2187.0 / 6784 * k5 + 11.0 / 84 * k6);
  if (err) {
    const Vec k7 = f(s + h, y5);
    *err = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 - 17253.0 / 339200 * k5 +
                22.0 / 525 * k6 - 1.0 / 40 * k7);
  }
  return y5;
}

/// Adaptive integration of y' = f(s, y) from s0 to s1. Each accepted step keeps
/// |err_i| <= tol * (1 + |y_i|). `observe(s, y)` sees the initial point and every
/// accepted step, ending exactly at s1. Non-finite trial values count as
/// rejections; throws IntegrationError once the step underflows.
template <typename Vec, typename F, typename Observer>
StepStats integrate_adaptive(F&& f, double s0, double s1, Vec y, double tol, Observer&& observe,
                             double h = 1e-2) {
  StepStats stats;
  double s = s0;
  observe(s, y);
  h = std::min(h, s1 - s0);
  while (s < s1) {
    const bool last = s + h >= s1;
    const double step = last ? s1 - s : h;
    Vec err;
    const Vec next = dopri_step(f, s, y, step, &err);
    double ratio = 0;
    for (int i = 0; i < y.size(); ++i)
      ratio = std::max(ratio, std::abs(err[i]) / (tol * (1 + std::max(std::abs(y[i]), std::abs(next[i])))));
    if (!std::isfinite(ratio) || !next.allFinite()) ratio = 1e10;
    if (ratio <= 1) {
      s = last ? s1 : s + step;
      y = next;
      ++stats.accepted;
      stats.h_min = std::min(stats.h_min, step);
      stats.h_max = std::max(stats.h_max, step);
      observe(s, y);
    } else {
      ++stats.rejected;
    }
    h = step * std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    if (s < s1 && h < 1e-12 * (1 + std::abs(s)))
      throw IntegrationError("step size underflow at s = " + std::to_string(s));
  }
  return stats;
}

/// `steps` equal Dormand-Prince steps from s0 to s1 (fifth-order solution only).
template <typename Vec, typename F, typename Observer>
void integrate_fixed(F&& f, double s0, double s1, Vec y, int steps, Observer&& observe) {
  const double h = (s1 - s0) / steps;
  observe(s0, y);
  for (int i = 0; i < steps; ++i) {
    y = dopri_step(f, s0 + i * h, y, h);
    observe(i + 1 == steps ? s1 : s0 + (i + 1) * h, y);
  }
}

}  // namespace revcurv
