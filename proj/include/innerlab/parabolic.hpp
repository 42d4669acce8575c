#pragma once

// Parabolic inner functions of the upper half-plane with finitely many atoms:
// F(z) = z + beta + sum_k c_k (1 + z x_k)/(x_k - z).

#include <string>
#include <vector>

#include "innerlab/innerfn.hpp"

namespace innerlab {

struct HalfPlaneAtom {
  double x = 0.0;
  double c = 0.0;
};

class HalfPlaneInner {
 public:
  HalfPlaneInner(double beta, std::vector<HalfPlaneAtom> atoms);

  double beta() const noexcept { return beta_; }
  const std::vector<HalfPlaneAtom>& atoms() const noexcept { return atoms_; }
  int degree() const noexcept { return static_cast<int>(atoms_.size()) + 1; }
  /// sum_k c_k (1 + x_k^2), the coefficient of -1/z at infinity.
  double mass() const;
  /// max_k |x_k| (0 without atoms).
  double atom_extent() const;

  Jet jet(cplx z) const;
  /// F'(x) on the real line away from the atoms.
  double boundary_deriv(double x) const;
  /// Im F(z) / Im z = 1 + sum_k c_k (1 + x_k^2)/|x_k - z|^2.
  double im_ratio(cplx z) const;

  /// kind=halfplane, beta=..., atom=x,c lines.
  std::string serialize() const;
  static HalfPlaneInner parse(const std::string& text);

 private:
  double beta_;
  std::vector<HalfPlaneAtom> atoms_;
};

/// F(z) and F'(z) for z in the upper half-plane.
Jet hp_eval_deriv(const HalfPlaneInner& f, cplx z);

/// The deg F solutions of F(w) = z, all in the upper half-plane, sorted by Re w.
/// Throws NumericalError if sum Im w differs from Im z by more than 1e-9 relative.
std::vector<cplx> hp_preimages(const HalfPlaneInner& f, cplx z);

struct StripPoint {
  cplx point;
  int generation = 0;
  long parent = -1;  // index into StripProfile::nodes
};

struct StripOptions {
  long node_budget = 50'000'000;
  int threads = 0;
  /// Safety factor of the far-field pruning test; <= 0 disables it.
  double re_safety = 16.0;
};

struct StripProfile {
  cplx base;
  double lo = 0.0, hi = 0.0;
  double cutoff = 0.0;
  std::vector<StripPoint> nodes;    // every retained node, generation by generation
  std::vector<std::size_t> counted;  // indices of nodes in I x [e^{-R}, 1]
  std::vector<bool> complete;        // per generation: nothing lost to far-field pruning or merging
  long re_pruned = 0;
  long collisions = 0;

  /// #{counted w : -log Im w <= S}.
  long count(double S) const;
  /// (1/S) sum over counted w with -log Im w <= S of (e^{-d_w} - e^{-S}).
  double cesaro(double S) const;
  /// generation,re,im,Im_height,parent_index,counted
  std::string to_csv() const;
};

/// Backward tree of z cut at Im w >= e^{-R}; counts points with Re w in [lo, hi].
/// F must be of infinite height.
StripProfile enumerate_strip(const HalfPlaneInner& f, cplx z, double lo, double hi, double R,
                             const StripOptions& opt = {});

/// int_R log F'(x) dx with absolute error <= tol; NumericalError otherwise.
double chi_ell(const HalfPlaneInner& f, double tol = 1e-9);

struct HeightClass {
  bool infinite = false;
  std::string method;  // "taylor" or "iterate"
  std::string note;
};

/// Heuristic classification. Symmetric atom sets use the expansion at infinity,
/// others compare Im F^n(z0) with Im F^{n/16}(z0) (requires n_iters >= 1000).
HeightClass height_classify(const HalfPlaneInner& f, cplx z0, long n_iters = 4000);

struct StripRow {
  double R, count, count_over_eR, cesaro, target, ratio, cesaro_ratio;
};

/// target = |I|/chi_ell.
std::vector<StripRow> strip_counting_report(const StripProfile& profile, double chi, const std::vector<double>& Rs);

}  // namespace innerlab
