#include "innerlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "innerlab/errors.hpp"
#include "innerlab/rng.hpp"

namespace innerlab {

CountingProfile::CountingProfile(cplx base, std::vector<double> radii, double cutoff, std::optional<double> chi)
    : base_(base), radii_(std::move(radii)), cutoff_(cutoff), chi_(chi) {
  std::sort(radii_.begin(), radii_.end());
  if (!radii_.empty() && radii_.back() > cutoff_) throw PreconditionError("radius beyond the cutoff");
}

CountingProfile CountingProfile::from_tree(const PreimageTree& tree, std::optional<double> chi) {
  std::vector<double> radii;
  radii.reserve(tree.nodes().size());
  for (const PreimageNode& n : tree.nodes()) radii.push_back(n.radius);
  return CountingProfile(tree.base(), std::move(radii), tree.cutoff(), chi);
}

long CountingProfile::count(double S) const {
  if (S > cutoff_) throw PreconditionError("S exceeds the enumeration cutoff");
  return std::upper_bound(radii_.begin(), radii_.end(), S) - radii_.begin();
}

double CountingProfile::cesaro(double R) const {
  if (R > cutoff_) throw PreconditionError("R exceeds the enumeration cutoff");
  if (!(R > 0.0)) throw PreconditionError("R must be positive");
  const double eR = std::exp(-R);
  double s = 0.0;
  for (double d : radii_) {
    if (d > R) break;
    s += std::exp(-d) - eR;
  }
  return s / R;
}

double CountingProfile::apriori_constant() const {
  if (radii_.empty()) return 0.0;
  const double d0 = disk_radius(base_);
  double best = 0.0;
  for (int k = 1; 0.25 * k <= cutoff_ + 1e-12; ++k) {
    const double r = std::min(0.25 * k, cutoff_);
    best = std::max(best, static_cast<double>(count(r)) * std::exp(-(r - d0)));
  }
  return best;
}

double target_constant(cplx z, double chi) {
  if (!(chi > 0.0)) throw PreconditionError("Lyapunov exponent must be positive");
  if (z == 0.0) throw PreconditionError("base point must be nonzero");
  return 0.5 * -std::log(std::abs(z)) / chi;
}

SchwarzGap estimate_schwarz_gap(const InnerModel& f, int samples, std::uint64_t seed) {
  if (!f.centered()) throw PreconditionError("Schwarz gap needs a centered map");
  if (f.is_rotation()) return {0.0, 0.0, true};
  const DiskMap F(f);
  auto gap = [&](double rho, double theta) {
    const Polar w{-std::log(std::tanh(rho / 2.0)), theta};
    return (rho - F(w).value.radius()) / 4.0;
  };
  auto g = substream(seed, 0);
  const int levels = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(samples))));
  const int per_level = std::max(8, samples / levels);
  SchwarzGap best{std::numeric_limits<double>::infinity(), 0.0, false};
  double best_rho = 1.0, best_theta = 0.0;
  for (int i = 0; i < levels; ++i) {
    const double rho = 1.0 + 11.0 * i / (levels - 1);
    const double offset = uniform01(g);
    for (int j = 0; j < per_level; ++j) {
      const double theta = 2.0 * std::numbers::pi * (j + offset) / per_level;
      const double v = gap(rho, theta);
      if (v < best.gamma) {
        best.gamma = v;
        best_rho = rho;
        best_theta = theta;
      }
    }
  }
  // Pattern search around the grid minimizer.
  double step_rho = 11.0 / (levels - 1), step_theta = 2.0 * std::numbers::pi / per_level;
  for (int it = 0; it < 60; ++it) {
    bool moved = false;
    for (auto [dr, dt] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const double r = std::clamp(best_rho + dr * step_rho, 1.0, 12.0);
      const double t = best_theta + dt * step_theta;
      const double v = gap(r, t);
      if (v < best.gamma) {
        best.gamma = v;
        best_rho = r;
        best_theta = t;
        moved = true;
      }
    }
    if (!moved) {
      step_rho *= 0.5;
      step_theta *= 0.5;
    }
  }
  best.argmin = std::polar(std::tanh(best_rho / 2.0), best_theta);
  return best;
}

std::vector<CountingRow> counting_table(const CountingProfile& profile, const std::vector<double>& Rs) {
  std::vector<CountingRow> rows;
  const double target = profile.chi() ? target_constant(profile.base(), *profile.chi())
                                      : std::numeric_limits<double>::quiet_NaN();
  for (double R : Rs) {
    const double n = static_cast<double>(profile.count(R));
    const double c = profile.cesaro(R);
    const double neR = n * std::exp(-R);
    rows.push_back({R, n, neR, c, target, neR / target, c / target});
  }
  return rows;
}

}  // namespace innerlab
