#include "innerlab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "innerlab/errors.hpp"
#include "innerlab/polyroots.hpp"
#include "innerlab/quadrature.hpp"
#include "innerlab/rng.hpp"

namespace innerlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Upper bound for (1/2pi) int_{|theta| < eps} log(A + B/theta^2) d theta.
double window_bound(double A, double B, double eps) {
  return 2.0 * eps * (std::log(A * eps * eps + B) - 2.0 * std::log(eps) + 2.0) / kTwoPi;
}

LyapunovEstimate chi_with_atoms(const InnerModel& f, double tol) {
  std::vector<double> angles;
  for (const Atom& a : f.atoms()) angles.push_back(canonical_angle(a.angle));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  const std::size_t m = angles.size();

  double zero_bound = 0.0;
  for (cplx a : f.zeros()) zero_bound += (1.0 + std::abs(a)) / (1.0 - std::abs(a));
  const auto loglogd = [&](double t) { return std::log(f.boundary_deriv_modulus(t)); };

  // Pick one window half-width so that each excluded window is bounded by tol/(4m).
  double min_gap = kTwoPi;
  for (std::size_t i = 0; i < m; ++i) {
    const double next = (i + 1 < m) ? angles[i + 1] : angles[0] + kTwoPi;
    min_gap = std::min(min_gap, next - angles[i]);
  }
  double eps = std::min(0.1, min_gap / 4.0);
  double total_bound = 0.0;
  for (int it = 0; it < 200; ++it) {
    total_bound = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double A = zero_bound, sigma = 0.0;
      for (const Atom& at : f.atoms()) {
        const double gap = std::abs(std::remainder(at.angle - angles[k], kTwoPi));
        if (gap < 1e-15) {
          sigma += at.weight;
        } else {
          const double chord = std::max(2.0 * std::sin(std::max(gap - eps, 1e-300) / 2.0), 1e-300);
          A += 2.0 * at.weight / (chord * chord);
        }
      }
      total_bound += window_bound(A, sigma * std::numbers::pi * std::numbers::pi / 2.0, eps);
    }
    if (total_bound <= tol / 4.0) break;
    eps *= 0.5;
  }

  // The integrand is positive inside the windows, so their mass lies in [0, bound].
  LyapunovEstimate est{total_bound / 2.0, ChiMethod::Quadrature, total_bound / 2.0, true, 0};
  const double seg_tol = tol / (4.0 * static_cast<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const double a = angles[k] + eps;
    const double b = ((k + 1 < m) ? angles[k + 1] : angles[0] + kTwoPi) - eps;
    const QuadResult q = integrate_adaptive(loglogd, a, b, seg_tol * kTwoPi);
    est.value += q.value / kTwoPi;
    est.error += q.error / kTwoPi;
    est.converged = est.converged && q.converged;
  }
  return est;
}

}  // namespace

std::string to_string(ChiMethod m) {
  switch (m) {
    case ChiMethod::Quadrature: return "quadrature";
    case ChiMethod::Jensen: return "jensen";
    case ChiMethod::Birkhoff: return "birkhoff";
  }
  return "?";
}

LyapunovEstimate chi_quadrature(const InnerModel& f, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (!f.atoms().empty()) return chi_with_atoms(f, tol);
  const QuadResult q = periodic_mean([&](double t) { return std::log(f.boundary_deriv_modulus(t)); }, tol);
  return {q.value, ChiMethod::Quadrature, q.error, q.converged, 0};
}

LyapunovEstimate chi_jensen_oracle(const InnerModel& f) {
  if (!f.is_finite_blaschke()) throw PreconditionError("Jensen oracle needs a finite Blaschke product");
  const int d = f.degree();
  if (d < 2) throw PreconditionError("Jensen oracle needs degree at least 2");
  Poly num{f.rotation()}, den{1.0};
  for (cplx a : f.zeros()) {
    if (a == 0.0) {
      num = poly_mul(num, {0.0, 1.0});
    } else {
      const cplx c = std::abs(a) / a;
      num = poly_mul(num, {c * a, -c});
      den = poly_mul(den, {1.0, -std::conj(a)});
    }
  }
  // Numerator of F' = (N'D - ND')/D^2.
  const Poly a = poly_mul(poly_derivative(num), den);
  const Poly b = poly_mul(num, poly_derivative(den));
  Poly q(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) q[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) q[i] -= b[i];
  double mx = 0.0;
  for (cplx c : q) mx = std::max(mx, std::abs(c));
  std::size_t k = 0;
  while (k < q.size() && std::abs(q[k]) <= 1e-14 * mx) ++k;
  if (k == q.size()) throw NumericalError("derivative vanishes identically");
  const cplx lead = q[k];  // D(0) = 1, so this is the first Taylor coefficient of F'
  const Poly rest(q.begin() + static_cast<long>(k), q.end());
  double value = std::log(std::abs(lead));
  int inside = static_cast<int>(k);
  for (cplx c : poly_roots(rest)) {
    if (std::abs(c) < 1.0) {
      ++inside;
      value += -std::log(std::abs(c));
    }
  }
  if (inside != d - 1)
    throw NumericalError("found " + std::to_string(inside) + " critical points in the disk, expected " +
                         std::to_string(d - 1));
  return {value, ChiMethod::Jensen, 0.0, true, 0};
}

LyapunovEstimate chi_birkhoff(const InnerModel& f, double theta0, long n, std::uint64_t seed) {
  if (!f.is_finite_blaschke() || !f.centered() || f.is_rotation())
    throw PreconditionError("Birkhoff averages need a centered non-rotation finite Blaschke product");
  if (n < 1) throw PreconditionError("orbit length must be positive");
  auto g = substream(seed, 0);
  const long batches = std::clamp<long>(n / 20, 1, 50);
  const long batch_size = n / batches;
  std::vector<double> batch_sum(static_cast<std::size_t>(batches), 0.0);
  double theta = canonical_angle(theta0);
  double total = 0.0, carry = 0.0;
  long restarts = 0;
  for (long k = 0; k < n; ++k) {
    const double v = std::log(f.boundary_deriv_modulus(theta));
    const double t = total + v;  // Neumaier summation
    carry += std::abs(total) >= std::abs(v) ? (total - t) + v : (v - t) + total;
    total = t;
    const long b = k / batch_size;
    if (b < batches) batch_sum[static_cast<std::size_t>(b)] += v;
    const cplx w = f.eval(std::polar(1.0, theta));
    double next = canonical_angle(std::arg(w));
    if (std::abs(std::remainder(next - theta, kTwoPi)) < 1e-13) {
      next = canonical_angle(next + 1e-6 * uniform01(g));
      ++restarts;
    }
    theta = next;
  }
  const double mean = (total + carry) / static_cast<double>(n);
  double se = 0.0;
  if (batches > 1) {
    double bm = 0.0, ss = 0.0;
    for (double s : batch_sum) bm += s / static_cast<double>(batch_size);
    bm /= static_cast<double>(batches);
    for (double s : batch_sum) {
      const double x = s / static_cast<double>(batch_size) - bm;
      ss += x * x;
    }
    se = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  }
  // Constant observables (z^d) have no sampling spread; keep a rounding floor.
  se = std::max(se, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mean));
  return {mean, ChiMethod::Birkhoff, se, true, restarts};
}

}  // namespace innerlab
