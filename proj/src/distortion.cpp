#include "innerlab/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "innerlab/errors.hpp"
#include "innerlab/parallel.hpp"
#include "innerlab/quadrature.hpp"

namespace innerlab {

namespace {

constexpr double kPuncture = 1e-8;

// Polar point at hyperbolic distance rho from 0 in direction theta.
Polar at_radius(double rho, double theta) {
  // -log tanh(rho/2) = -log1p(-2/(e^rho + 1))
  return {-std::log1p(-2.0 / (std::exp(rho) + 1.0)), theta};
}

double rho_of(double r) { return std::log1p(2.0 * r / (1.0 - r)); }

}  // namespace

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::Mu: return "mu";
    case Quantity::Delta: return "delta";
    case Quantity::Eta: return "eta";
    case Quantity::Alpha: return "alpha";
  }
  return "?";
}

double DistortionSample::get(Quantity q) const {
  switch (q) {
    case Quantity::Mu: return mu;
    case Quantity::Delta: return delta;
    case Quantity::Eta: return eta;
    case Quantity::Alpha: return alpha;
  }
  return 0.0;
}

DistortionSample make_sample(cplx z, cplx p) {
  return {z, p, 1.0 - std::abs(p), std::abs(1.0 - p), 1.0 - p.real(), std::abs(std::arg(p))};
}

DistortionSample distortion_at_disk(const DiskMap& f, const Polar& z) {
  if (std::isinf(z.height)) throw PreconditionError("radial direction undefined at the origin");
  const PolarJet j = f(z);
  if (std::isinf(j.value.height)) throw PreconditionError("radial direction undefined at a zero of F");
  const double scale = z.one_minus_abs2() / j.value.one_minus_abs2();
  const cplx p = j.deriv * scale * std::polar(1.0, z.angle - j.value.angle);
  return make_sample(z.to_complex(), p);
}

DistortionSample distortion_at_disk(const DiskMap& f, cplx z) { return distortion_at_disk(f, Polar::from_complex(z)); }

double moebius_distortion(const DiskMap& f, const Polar& z) {
  const PolarJet j = f(z);
  return 1.0 - std::abs(j.deriv) * z.one_minus_abs2() / j.value.one_minus_abs2();
}

DistortionSample distortion_at_halfplane(const HalfPlaneMap& f, cplx z) {
  if (!(z.imag() > 0.0)) throw PreconditionError("point is not in the upper half-plane");
  const Jet j = f(z);
  if (!(j.value.imag() > 0.0)) throw PreconditionError("image is not in the upper half-plane");
  return make_sample(z, j.deriv * z.imag() / j.value.imag());
}

RadialIntegral radial_distortion_integral(const InnerModel& f, double theta, Quantity q, double r_max, double tol) {
  if (!(r_max > 0.0 && r_max < 1.0)) throw PreconditionError("r_max must lie in (0, 1)");
  const DiskMap F(f);
  const double rho_max = rho_of(r_max);

  // Parameter punctures at the origin and at zeros of F on the ray.
  std::vector<double> cuts{0.0};
  RadialIntegral out;
  if (q != Quantity::Mu) {
    cuts.push_back(kPuncture);
    for (cplx a : f.zeros()) {
      if (a == 0.0) continue;
      if (std::abs(std::remainder(std::arg(a) - theta, 2.0 * std::numbers::pi)) > 1e-12) continue;
      const double ra = disk_radius(a);
      if (ra - kPuncture > 0.0 && ra + kPuncture < rho_max) {
        cuts.push_back(ra - kPuncture);
        cuts.push_back(ra + kPuncture);
        ++out.punctures;
      }
    }
    ++out.punctures;
  }
  cuts.push_back(rho_max);
  std::sort(cuts.begin(), cuts.end());

  const auto integrand = [&](double rho) {
    const Polar w = at_radius(rho, theta);
    if (q == Quantity::Mu) return moebius_distortion(F, w);
    try {
      return distortion_at_disk(F, w).get(q);
    } catch (const PreconditionError&) {
      return distortion_at_disk(F, at_radius(rho + kPuncture, theta)).get(q);
    }
  };
  // Segments alternate between integrated pieces and excised punctures.
  const std::size_t start = (q == Quantity::Mu) ? 0 : 1;
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = start; i + 1 < cuts.size(); i += (q == Quantity::Mu ? 1 : 2)) pieces.emplace_back(cuts[i], cuts[i + 1]);
  for (auto [a, b] : pieces) {
    if (b <= a) continue;
    const QuadResult r = integrate_adaptive(integrand, a, b, tol / static_cast<double>(pieces.size()));
    out.value += r.value;
    out.error += r.error;
    out.converged = out.converged && r.converged;
  }
  out.r_reached = r_max;
  return out;
}

CumulativeDistortion cumulative_orbit_distortion(const InnerModel& f, std::span<const Polar> orbit, int N) {
  if (N < 0) throw PreconditionError("N must be nonnegative");
  if (static_cast<std::size_t>(N) >= orbit.size() && N > 0) throw PreconditionError("orbit is shorter than N");
  const DiskMap F(f);
  CumulativeDistortion out;
  for (int n = 1; n <= N; ++n) {
    const Polar& w = orbit[static_cast<std::size_t>(n)];
    try {
      out.value += distortion_at_disk(F, w).delta;
    } catch (const PreconditionError&) {
      // Two-sided radial limit.
      ++out.perturbed;
      const double h = std::isinf(w.height) ? -std::log(kPuncture) : w.height;
      const Polar in{h * (1.0 + kPuncture), w.angle}, outp{h * (1.0 - kPuncture), w.angle};
      out.value += 0.5 * (distortion_at_disk(F, in).delta + distortion_at_disk(F, outp).delta);
    }
  }
  return out;
}

std::vector<CriterionRow> angular_derivative_criterion_scan(
    const std::vector<std::pair<std::string, InnerModel>>& family, double theta, const std::vector<double>& r_grid,
    double tol, int threads) {
  const std::size_t n = family.size() * r_grid.size();
  std::vector<CriterionRow> rows(n);
  parallel_chunks(n, n, resolve_threads(threads), [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& [id, f] = family[i / r_grid.size()];
      const double r = r_grid[i % r_grid.size()];
      rows[i] = {id,
                 r,
                 radial_distortion_integral(f, theta, Quantity::Mu, r, tol).value,
                 radial_distortion_integral(f, theta, Quantity::Eta, r, tol).value,
                 radial_distortion_integral(f, theta, Quantity::Delta, r, tol).value,
                 radial_distortion_integral(f, theta, Quantity::Alpha, r, tol).value,
                 std::log(f.angular_derivative(theta))};
    }
  });
  return rows;
}

}  // namespace innerlab
