#include "innerlab/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "innerlab/errors.hpp"

namespace innerlab {

bool aberth(const PolyEval& eval, std::vector<cplx>& roots, int max_iter, double tol) {
  const std::size_t n = roots.size();
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx p, dp;
      eval(roots[k], p, dp);
      if (p == 0.0) {
        done[k] = true;
        continue;
      }
      const cplx ratio = p / dp;
      cplx repel = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) {
          const cplx diff = roots[k] - roots[j];
          if (diff != 0.0) repel += 1.0 / diff;
        }
      cplx step = ratio / (1.0 - ratio * repel);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      roots[k] -= step;
      if (std::abs(step) <= tol * std::max(1.0, std::abs(roots[k]))) done[k] = true;
      else all_done = false;
    }
    if (all_done) return true;
  }
  return false;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = static_cast<double>(i) * a[i];
  return d;
}

cplx poly_eval(const Poly& a, cplx z) {
  cplx s = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) s = s * z + a[i];
  return s;
}

void poly_trim(Poly& a, double rel) {
  double mx = 0.0;
  for (cplx c : a) mx = std::max(mx, std::abs(c));
  while (a.size() > 1 && std::abs(a.back()) <= rel * mx) a.pop_back();
}

std::vector<cplx> poly_roots(const Poly& coeffs) {
  Poly a = coeffs;
  poly_trim(a);
  const std::size_t n = a.size() - 1;
  if (n == 0) return {};
  const Poly da = poly_derivative(a);
  Poly abs_a(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) abs_a[i] = std::abs(a[i]);
  // A residual below the rounding level of Horner's rule counts as an exact root.
  const PolyEval eval = [&](cplx z, cplx& p, cplx& dp) {
    p = poly_eval(a, z);
    dp = poly_eval(da, z);
    const double bound = poly_eval(abs_a, std::abs(z)).real();
    if (std::abs(p) <= 8.0 * std::numeric_limits<double>::epsilon() * bound) p = 0.0;
  };
  // Start on a circle of radius given by the geometric mean root modulus.
  const double radius = std::pow(std::abs(a[0] / a[n]), 1.0 / static_cast<double>(n));
  const double rad = (radius > 0.0 && std::isfinite(radius)) ? radius : 1.0;
  for (double offset : {0.4, 1.1, 2.3}) {
    std::vector<cplx> roots(n);
    for (std::size_t k = 0; k < n; ++k)
      roots[k] = std::polar(rad, offset + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    if (aberth(eval, roots, 1000)) return roots;
  }
  throw NumericalError("polynomial root finder did not converge");
}

}  // namespace innerlab
