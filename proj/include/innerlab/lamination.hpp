#pragma once

// Backward orbits, the solenoid, exponential coordinates, box masses and
// shadowing statistics.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "innerlab/innerfn.hpp"

namespace innerlab {

enum class BranchPolicy {
  Explicit,  // follow the given root indices, then fall back to Uniform
  Uniform,   // each preimage with probability 1/d
  Lebesgue,  // boundary only: preimage u' with probability 1/|F'(u')|
};

/// An inverse orbit z_0, z_{-1}, ... with F(z_{-n-1}) = z_{-n}; coords()[n] = z_{-n}.
class InverseOrbit {
 public:
  /// Interior orbit from z0 (which must not be 0).
  static InverseOrbit interior(InnerModel f, const Polar& z0, BranchPolicy policy = BranchPolicy::Uniform,
                               std::uint64_t seed = 1, std::vector<int> branches = {});
  /// Boundary orbit from e^{i theta0}.
  static InverseOrbit boundary(InnerModel f, double theta0, BranchPolicy policy = BranchPolicy::Lebesgue,
                               std::uint64_t seed = 1, std::vector<int> branches = {});

  const InnerModel& model() const noexcept { return f_; }
  bool on_boundary() const noexcept { return boundary_; }
  const std::vector<Polar>& coords() const noexcept { return coords_; }
  const std::vector<int>& branch_indices() const noexcept { return chosen_; }
  std::size_t length() const noexcept { return coords_.size() - 1; }

  /// Extends the cached orbit to length n.
  void extend(std::size_t n);
  /// max_n |F(z_{-n-1}) - z_{-n}|.
  double max_residual() const;
  /// CSV with columns n, re, im.
  std::string to_csv() const;

 private:
  InverseOrbit(InnerModel f, bool boundary, BranchPolicy policy, std::uint64_t seed, std::vector<int> branches);
  InnerModel f_;
  bool boundary_;
  BranchPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<int> branches_;
  std::vector<int> chosen_;
  std::vector<Polar> coords_;
};

/// Boundary preimage angles of e^{i theta} with conditional weights 1/|F'(u')|.
/// Throws NumericalError if the weights do not sum to 1 within 1e-10.
std::vector<std::pair<double, double>> backward_weights(const InnerModel& f, double theta);

/// Boundary orbit of length n sampled from the natural extension of Lebesgue
/// measure. theta0 defaults to a uniform draw from the seed.
InverseOrbit sample_backward_orbit(const InnerModel& f, std::size_t n, std::uint64_t seed,
                                   std::optional<double> theta0 = std::nullopt);

struct TransverseWeight {
  cplx point;
  double weight = 0.0;      // log(1/|w|)
  double normalized = 0.0;  // log(1/|w|)/log(1/|z|)
  long parent = -1;
  int generation = 0;
};

/// Full d-ary tree of depth n (with multiplicity), generation by generation.
std::vector<TransverseWeight> transverse_weights(const InnerModel& f, cplx z, int n, long budget = 10'000'000);

/// F^k applied in polar coordinates.
PolarJet push_forward(const InnerModel& f, Polar w, std::size_t k);

struct ExpMapResult {
  Polar point;
  double cauchy_increment = 0.0;  // d(E_n, E_{n-1})
};

/// F^n(u_{-n} (1 - t/|(F^n)'(u_{-n})|)) for a boundary orbit u.
ExpMapResult exponential_map(const InverseOrbit& u, double t, std::size_t n_approx, double t_cap = 1.0);

/// d(g_s E(u,t), E(u, e^s t)) with g_s realized at depth k (default n_approx/2)
/// by scaling the offset from u_{-k} in logarithmic coordinates.
double geodesic_intertwining_check(const InverseOrbit& u, double t, double s, std::size_t n_approx,
                                   std::optional<std::size_t> k = std::nullopt, double t_cap = 1.0);

/// Annular box r1 <= |z| <= r2, theta1 <= arg z <= theta2.
struct AnnularBox {
  double r1, r2, theta1, theta2;
};

struct BoxMassEstimate {
  double mass = 0.0;
  double error = 0.0;
  int depth = 0;
};

/// (1/2pi) int_{F^{-n}(A)} log(1/|w|) dA_hyp by tensor Gauss–Legendre quadrature over A
/// of the preimage sum; the error is the change under one grid refinement.
BoxMassEstimate xi_box_mass(const InnerModel& f, const AnnularBox& box, int n, int cells_r = 4, int cells_theta = 8,
                            int threads = 0);

/// (1/2pi) int_A dA/(1-|z|), the comparison quantity for thin boxes.
double box_boundary_mass(const AnnularBox& box);

struct TotalMass {
  double mass = 0.0;
  double std_error = 0.0;
  double chi_reference = 0.0;
  long samples = 0;
};

/// Stratified Monte Carlo for (1/2pi) int_{E*} log(1/|z|) dA_hyp,
/// E* = {|z| >= r0, |F(z)| < r0}, paired with the Jensen value of chi.
TotalMass total_mass_check(const InnerModel& f, double r0, long samples, std::uint64_t seed, int threads = 0,
                           std::optional<double> target_std_error = std::nullopt);

struct ShadowingStat {
  double statistic = 0.0;
  bool inconclusive = false;
  std::size_t depth_used = 0;
  double limit_angle = 0.0;
};

/// Time-average of min{1, d(gamma, radial ray to the landing angle)} along the
/// geodesic through z_0 determined by the orbit (see README for the construction).
ShadowingStat radial_shadowing_stat(const InverseOrbit& orbit, std::size_t N, int samples = 2000);

/// Sets of bad times for the shadowing simulation.
struct BadTimes {
  std::vector<std::pair<double, double>> intervals;  // sorted, disjoint
  bool everything = false;

  static BadTimes none() { return {}; }
  static BadTimes all() { return {{}, true}; }
  /// union over k of [2^k, 2^k + k] below T.
  static BadTimes dyadic(double T);
  bool contains(double t) const;
};

enum class Adversary { UpRight, Right, Up };

struct ShadowResult {
  double limit_x = 0.0;
  bool diverged = false;
  double average_distance = 0.0;
  std::vector<std::pair<double, double>> curve;  // (t, running average of min{1, d})
};

/// Path in the upper half-plane that moves by v_down at good times and by the
/// adversary field at bad times, integrated with RK4.
ShadowResult shadowing_simulation(const BadTimes& bad, double T, Adversary adversary, double x0 = 0.0,
                                  double y0 = 1.0, double max_step = 0.01, int curve_points = 200);

}  // namespace innerlab
