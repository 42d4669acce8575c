#pragma once

#include <functional>

namespace innerlab {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Adaptive Gauss–Kronrod (15-point) on [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              unsigned max_depth = 18);

/// (1/2pi) times the integral over one period of a 2pi-periodic function,
/// by the trapezoid rule with doubling. The error estimate is the last change.
QuadResult periodic_mean(const std::function<double(double)>& f, double tol, int max_log2_points = 22);

}  // namespace innerlab
