#pragma once

// Möbius and linear distortion of holomorphic self-maps.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "innerlab/innerfn.hpp"

namespace innerlab {

enum class Quantity { Mu, Delta, Eta, Alpha };

std::string to_string(Quantity q);

/// p together with mu = 1 - |p|, delta = |1 - p|, eta = Re(1 - p), alpha = |arg p|.
struct DistortionSample {
  cplx z;
  cplx p;
  double mu = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double alpha = 0.0;

  double get(Quantity q) const;
};

DistortionSample make_sample(cplx z, cplx p);

/// p = F'(z) (1-|z|^2)/(1-|F(z)|^2) (z/|z|) (|F(z)|/F(z)); z = 0 or F(z) = 0 throws.
DistortionSample distortion_at_disk(const DiskMap& f, const Polar& z);
DistortionSample distortion_at_disk(const DiskMap& f, cplx z);

/// 1 - |F'(z)| (1-|z|^2)/(1-|F(z)|^2), which needs no directions.
double moebius_distortion(const DiskMap& f, const Polar& z);

using HalfPlaneMap = std::function<Jet(cplx)>;

/// p = F'(z) Im z / Im F(z); Im F(z) <= 0 throws.
DistortionSample distortion_at_halfplane(const HalfPlaneMap& f, cplx z);

struct RadialIntegral {
  double value = 0.0;
  double error = 0.0;
  double r_reached = 0.0;
  bool converged = true;
  int punctures = 0;
};

/// Integral of the quantity along r -> r zeta, 0 <= r <= r_max, against hyperbolic arclength.
RadialIntegral radial_distortion_integral(const InnerModel& f, double theta, Quantity q, double r_max,
                                          double tol = 1e-10);

struct CumulativeDistortion {
  double value = 0.0;
  long perturbed = 0;  // coordinates where directions were undefined
};

/// sum_{n=1}^{N} delta_F(z_{-n}); orbit[n] holds z_{-n}.
CumulativeDistortion cumulative_orbit_distortion(const InnerModel& f, std::span<const Polar> orbit, int N);

struct CriterionRow {
  std::string model_id;
  double r_max;
  double integral_mu, integral_eta, integral_delta, integral_alpha;
  double log_angular_derivative;
};

std::vector<CriterionRow> angular_derivative_criterion_scan(
    const std::vector<std::pair<std::string, InnerModel>>& family, double theta, const std::vector<double>& r_grid,
    double tol = 1e-10, int threads = 0);

}  // namespace innerlab
