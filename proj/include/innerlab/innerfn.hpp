#pragma once

// Finite Blaschke products with optional singular atom factors.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "innerlab/hypgeo.hpp"

namespace innerlab {

/// Singular factor exp(-weight (zeta + z)/(zeta - z)) with zeta = e^{i angle}.
struct Atom {
  double angle = 0.0;
  double weight = 1.0;
};

/// Value and derivative of a holomorphic map at a point.
struct Jet {
  cplx value;
  cplx deriv;
};

/// Value (in polar form) and derivative at a polar point.
struct PolarJet {
  Polar value;
  cplx deriv;
};

/// Wraps an angle into [0, 2 pi).
double canonical_angle(double theta);

class InnerModel {
 public:
  /// F(z) = rotation * prod_i b_{a_i}(z) * prod_k exp(-s_k (zeta_k + z)/(zeta_k - z)),
  /// b_a(z) = (|a|/a)(a - z)/(1 - conj(a) z), b_0(z) = z.
  InnerModel(cplx rotation, std::vector<cplx> zeros, std::vector<Atom> atoms = {});

  static InnerModel power(int d);
  /// Blaschke product with rotation 1.
  static InnerModel blaschke(std::vector<cplx> zeros);

  cplx rotation() const noexcept { return rotation_; }
  const std::vector<cplx>& zeros() const noexcept { return zeros_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  int degree() const noexcept { return static_cast<int>(zeros_.size()); }
  bool centered() const;
  bool is_finite_blaschke() const noexcept { return atoms_.empty(); }
  /// Degree-one centered Blaschke product, i.e. z -> lambda z.
  bool is_rotation() const;

  /// Raw evaluation on the closed disk. Throws NumericalError at an atom base point.
  cplx eval(cplx z) const;
  DiskPoint eval(const DiskPoint& z) const;
  cplx deriv(cplx z) const;
  Jet jet(cplx z) const;
  /// Evaluation keeping 1 - |F|^2 accurate near the circle.
  PolarJet jet(const Polar& w) const;

  /// Lemma-2.2 sum; +inf at an atom base point.
  double boundary_deriv_modulus(double theta) const;
  /// The Carathéodory angular derivative |F'(zeta)|, which equals the sum above.
  double angular_derivative(double theta) const { return boundary_deriv_modulus(theta); }

  /// Numerator N and denominator D with F = N/D, evaluated in product form
  /// together with their derivatives. Finite Blaschke products only.
  void numer_denom(cplx z, cplx& n, cplx& dn, cplx& d, cplx& dd) const;

  std::string serialize() const;
  static InnerModel parse(std::string_view text);

 private:
  cplx rotation_;
  std::vector<cplx> zeros_;
  std::vector<Atom> atoms_;
};

/// Type-erased holomorphic self-map of the disk with accurate polar evaluation.
class DiskMap {
 public:
  using PolarFn = std::function<PolarJet(const Polar&)>;

  explicit DiskMap(PolarFn fn);
  DiskMap(const InnerModel& f);  // NOLINT: implicit by design
  static DiskMap identity();
  static DiskMap moebius(const Moebius& m);

  PolarJet operator()(const Polar& w) const { return fn_(w); }
  Jet operator()(cplx z) const;

 private:
  PolarFn fn_;
};

/// f o g.
DiskMap compose(const DiskMap& f, const DiskMap& g);

/// F_a = (F - a)/(1 - conj(a) F), kept lazy.
DiskMap frostman_shift(const DiskMap& f, cplx a);

/// Default cap on the number of iterations accepted by iterate().
inline constexpr long kDefaultIterateCap = 100000000;

/// n-fold composition F^n(z); n > cap throws ResourceError.
cplx iterate(const InnerModel& f, cplx z, long n, long cap = kDefaultIterateCap);

}  // namespace innerlab
