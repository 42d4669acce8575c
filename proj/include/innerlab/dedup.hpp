#pragma once

// Grid hash for merging points closer than a fixed tolerance.

#include <cmath>
#include <unordered_map>
#include <vector>

#include "innerlab/hypgeo.hpp"

namespace innerlab {

class DedupGrid {
 public:
  explicit DedupGrid(double tol) : tol_(tol) {}

  /// Records p and returns true unless a recorded point lies within the tolerance.
  bool insert(cplx p) {
    const long long cx = std::llround(p.real() / tol_);
    const long long cy = std::llround(p.imag() / tol_);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second)
          if (std::abs(points_[j] - p) < tol_) return false;
      }
    cells_[key(cx, cy)].push_back(points_.size());
    points_.push_back(p);
    return true;
  }

 private:
  static long long key(long long x, long long y) { return x * 4'000'000'003LL + y; }
  double tol_;
  std::vector<cplx> points_;
  std::unordered_map<long long, std::vector<std::size_t>> cells_;
};

}  // namespace innerlab
