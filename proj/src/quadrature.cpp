#include "innerlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace innerlab {

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              unsigned max_depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (a == b) return {0.0, 0.0, true};
  double err = 0.0, l1 = 0.0;
  const double v0 = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (err <= tol) return {v0, err, true};
  // Boost's tolerance is relative to the L1 norm of the integrand.
  const double rel = std::max(tol / std::max(l1, 1e-300), 4 * std::numeric_limits<double>::epsilon());
  const double v = GK::integrate(f, a, b, max_depth, rel, &err, &l1);
  return {v, err, err <= tol};
}

QuadResult periodic_mean(const std::function<double(double)>& f, double tol, int max_log2_points) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::size_t n = 16;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += f(two_pi * static_cast<double>(k) / static_cast<double>(n));
  double prev = sum / static_cast<double>(n);
  double change = std::numeric_limits<double>::infinity();
  for (int level = 5; level <= max_log2_points; ++level) {
    // Add the midpoints of the current grid.
    double add = 0.0;
    for (std::size_t k = 0; k < n; ++k) add += f(two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    sum += add;
    n *= 2;
    const double cur = sum / static_cast<double>(n);
    change = std::abs(cur - prev);
    if (change <= tol && level >= 7) return {cur, change, true};
    prev = cur;
  }
  return {prev, change, false};
}

}  // namespace innerlab
