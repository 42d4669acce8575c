#pragma once

// Counting functionals built from a backward tree.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "innerlab/preimage.hpp"

namespace innerlab {

class CountingProfile {
 public:
  /// Radii need not be sorted; all must be <= cutoff.
  CountingProfile(cplx base, std::vector<double> radii, double cutoff, std::optional<double> chi = std::nullopt);
  static CountingProfile from_tree(const PreimageTree& tree, std::optional<double> chi = std::nullopt);

  cplx base() const noexcept { return base_; }
  double cutoff() const noexcept { return cutoff_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  std::optional<double> chi() const noexcept { return chi_; }

  /// #{radii <= S}; S > cutoff throws PreconditionError.
  long count(double S) const;
  /// (1/R) sum_{d <= R} (e^{-d} - e^{-R}), the exact value of (1/R) int_0^R N(S) e^{-S} dS.
  double cesaro(double R) const;
  /// max over R' in {0.25, 0.5, ...} up to the cutoff of N(R') e^{-(R' - d(0,z))}.
  double apriori_constant() const;

 private:
  cplx base_;
  std::vector<double> radii_;
  double cutoff_;
  std::optional<double> chi_;
};

/// (1/2) log(1/|z|) / chi.
double target_constant(cplx z, double chi);

struct SchwarzGap {
  double gamma = 0.0;
  cplx argmin = 0.0;
  bool degenerate = false;  // set for rotations
};

/// Empirical gamma = min (d(0,z) - d(0,F(z)))/4 over 1 <= d(0,z) <= 12.
SchwarzGap estimate_schwarz_gap(const InnerModel& f, int samples, std::uint64_t seed = 1);

struct CountingRow {
  double R, count, count_over_eR, cesaro, target, ratio, cesaro_ratio;
};

/// One row per requested R (each <= the profile cutoff).
std::vector<CountingRow> counting_table(const CountingProfile& profile, const std::vector<double>& Rs);

}  // namespace innerlab
