#pragma once

// Hyperbolic geometry on the unit disk and the upper half-plane.

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace innerlab {

using cplx = std::complex<double>;

/// Points closer than this to the ideal boundary are rejected at construction.
inline constexpr double kBoundaryGuard = 1e-14;

class DiskPoint {
 public:
  explicit DiskPoint(cplx value);
  cplx value() const noexcept { return value_; }

 private:
  cplx value_;
};

class HalfPlanePoint {
 public:
  explicit HalfPlanePoint(cplx value);
  cplx value() const noexcept { return value_; }

 private:
  cplx value_;
};

using Point = std::variant<DiskPoint, HalfPlanePoint>;

/// A point of the disk stored as w = exp(-height + i*angle).
///
/// Keeps 1 - |w| accurate arbitrarily close to the circle, which plain
/// complex doubles cannot do once 1 - |w| drops below ~1e-16. height = +inf
/// encodes the origin.
struct Polar {
  double height = 0.0;
  double angle = 0.0;

  static Polar from_complex(cplx z);
  cplx to_complex() const;
  cplx direction() const { return std::polar(1.0, angle); }
  /// 1 - |w|^2 without cancellation.
  double one_minus_abs2() const;
  /// d_D(0, w).
  double radius() const;
};

double hyp_distance(const DiskPoint& x, const DiskPoint& y);
double hyp_distance(const HalfPlanePoint& x, const HalfPlanePoint& y);
/// Mixed models throw UsageError.
double hyp_distance(const Point& x, const Point& y);
/// Disk distance without cancellation for points near the circle.
double hyp_distance(const Polar& x, const Polar& y);

/// d_D(0, z) = log((1+|z|)/(1-|z|)).
double disk_radius(cplx z);
/// Euclidean modulus r with d_D(0, r) = rho.
double radius_to_modulus(double rho);

enum class MoebiusKind { DiskAut, HalfPlaneAut, DiskToHalfPlane, HalfPlaneToDisk };

/// z -> (a z + b)/(c z + d), normalized to unit determinant.
class Moebius {
 public:
  /// Validates the kind tag against the matrix; throws UsageError on mismatch.
  Moebius(cplx a, cplx b, cplx c, cplx d, MoebiusKind kind);

  static Moebius identity_disk();
  /// z -> e^{i theta} (z - a)/(1 - conj(a) z).
  static Moebius disk_automorphism(cplx a, double theta = 0.0);
  /// z -> A z + B with A > 0.
  static Moebius halfplane_linear(double scale, double shift);
  /// The standard Cayley map z -> i (1 + z)/(1 - z).
  static Moebius cayley_disk_to_halfplane();
  /// Conformal map H -> D with 0 -> p/|p|, i -> p, infinity -> -p/|p|.
  static Moebius halfplane_to_disk_at(const DiskPoint& p);

  cplx a() const noexcept { return a_; }
  cplx b() const noexcept { return b_; }
  cplx c() const noexcept { return c_; }
  cplx d() const noexcept { return d_; }
  MoebiusKind kind() const noexcept { return kind_; }

  /// Raw evaluation; throws NumericalError at the pole.
  cplx apply(cplx z) const;
  cplx derivative(cplx z) const;
  Point apply(const Point& p) const;

  Moebius inverse() const;
  /// (*this) o other; kinds must chain.
  Moebius compose(const Moebius& other) const;

 private:
  Moebius(cplx a, cplx b, cplx c, cplx d, MoebiusKind kind, bool validate);
  cplx a_, b_, c_, d_;
  MoebiusKind kind_;
};

/// The disk automorphism taking a -> b, a/|a| -> b/|b|, -a/|a| -> -b/|b|.
Moebius straight_moebius(const DiskPoint& a, const DiskPoint& b);

/// Hyperbolic geodesic curvature of a sampled disk path at an interior index.
///
/// The sample at `index` is moved to the origin by a disk automorphism, where
/// the hyperbolic curvature is half the Euclidean one; the Euclidean curvature
/// comes from 5-point finite-difference stencils in the path parameter.
double geodesic_curvature(std::span<const cplx> points, std::span<const double> params,
                          std::size_t index);

/// Same, for a path given as a function of its parameter. The stencil width is
/// halved until the 5-point and 3-point estimates agree to 1e-4.
double geodesic_curvature(const std::function<cplx(double)>& path, double t, double h0 = 1e-2);

}  // namespace innerlab
