#pragma once

// Preimages of points under finite Blaschke products and the backward tree
// inside a hyperbolic ball.

#include <span>
#include <string>
#include <vector>

#include "innerlab/innerfn.hpp"

namespace innerlab {

/// Euclidean distance below which two tree points are treated as the same point.
inline constexpr double kDedupTolerance = 1e-9;

/// The d solutions of F(w) = z with multiplicity, polished to |F(w) - z| < 1e-12
/// and sorted by (argument, modulus).
std::vector<cplx> preimages_of(const InnerModel& f, cplx z);

/// Same for a point given in polar form; the heights of the results are
/// refined in logarithmic coordinates so they stay accurate near the circle.
/// Sorted by (angle, height).
std::vector<Polar> preimages_polar(const InnerModel& f, const Polar& z);

/// Angles of the d preimages of e^{i theta} on the circle, sorted ascending in [0, 2 pi).
std::vector<double> boundary_preimages(const InnerModel& f, double theta);

struct PreimageNode {
  cplx point;
  int generation = 0;
  double height = 0.0;  // log(1/|point|)
  double radius = 0.0;  // d(0, point)
  long parent = -1;
};

struct EnumerateOptions {
  long node_budget = 50'000'000;
  int max_generation = -1;  // -1: unlimited (requires a finite R)
  int threads = 0;          // 0: INNERLAB_THREADS or hardware concurrency
};

class PreimageTree {
 public:
  PreimageTree(InnerModel model, cplx base, double cutoff) : model_(std::move(model)), base_(base), cutoff_(cutoff) {}

  const InnerModel& model() const noexcept { return model_; }
  cplx base() const noexcept { return base_; }
  double cutoff() const noexcept { return cutoff_; }
  const std::vector<PreimageNode>& nodes() const noexcept { return nodes_; }
  int generations() const noexcept { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const PreimageNode> generation(int g) const;
  /// True if no node of generations 0..g was lost to the cutoff or to merging.
  bool fully_expanded(int g) const;
  long collisions() const noexcept { return collisions_; }

  /// CSV dump: header comment lines, then generation,re,im,height,radius,parent_index.
  std::string to_csv() const;

 private:
  friend PreimageTree enumerate_ball(const InnerModel&, cplx, double, const EnumerateOptions&);
  InnerModel model_;
  cplx base_;
  double cutoff_;
  std::vector<PreimageNode> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<bool> complete_;
  long collisions_ = 0;
};

/// Breadth-first backward tree of z retaining nodes with d(0, w) <= R.
/// R may be +inf when opt.max_generation bounds the depth.
PreimageTree enumerate_ball(const InnerModel& f, cplx z, double R, const EnumerateOptions& opt = {});

/// |sum of heights in generation n - log(1/|z|)|; the generation must be fully expanded.
double verify_sum_of_heights(const PreimageTree& tree, int n);

}  // namespace innerlab
