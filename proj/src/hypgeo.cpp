#include "innerlab/hypgeo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "innerlab/errors.hpp"

namespace innerlab {

namespace {

constexpr double kKindTol = 1e-9;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

DiskPoint::DiskPoint(cplx value) : value_(value) {
  if (!finite(value) || std::abs(value) >= 1.0 - kBoundaryGuard)
    throw PreconditionError("point is not strictly inside the unit disk");
}

HalfPlanePoint::HalfPlanePoint(cplx value) : value_(value) {
  if (!finite(value) || value.imag() <= kBoundaryGuard)
    throw PreconditionError("point is not strictly inside the upper half-plane");
}

Polar Polar::from_complex(cplx z) {
  const double r = std::abs(z);
  if (r >= 1.0) throw PreconditionError("point is not inside the unit disk");
  if (r == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  return {-std::log(r), std::arg(z)};
}

cplx Polar::to_complex() const { return std::polar(std::exp(-height), angle); }

double Polar::one_minus_abs2() const { return -std::expm1(-2.0 * height); }

double Polar::radius() const {
  // log((1+r)/(1-r)) = log(coth(h/2))
  if (std::isinf(height)) return 0.0;
  const double t = -std::expm1(-height);  // 1 - r
  return std::log1p(2.0 * std::exp(-height) / t);
}

double disk_radius(cplx z) {
  const double r = std::abs(z);
  if (r >= 1.0) throw PreconditionError("point is not inside the unit disk");
  return 2.0 * std::atanh(r);
}

double radius_to_modulus(double rho) { return std::tanh(rho / 2.0); }

double hyp_distance(const DiskPoint& x, const DiskPoint& y) {
  const cplx a = x.value(), b = y.value();
  const double q = std::abs((a - b) / (1.0 - std::conj(b) * a));
  return 2.0 * std::atanh(std::min(q, 1.0));
}

double hyp_distance(const HalfPlanePoint& x, const HalfPlanePoint& y) {
  const cplx a = x.value(), b = y.value();
  return 2.0 * std::asinh(std::abs(a - b) / (2.0 * std::sqrt(a.imag() * b.imag())));
}

double hyp_distance(const Point& x, const Point& y) {
  if (x.index() != y.index()) throw UsageError("distance between points of different models");
  if (const auto* dx = std::get_if<DiskPoint>(&x)) return hyp_distance(*dx, std::get<DiskPoint>(y));
  return hyp_distance(std::get<HalfPlanePoint>(x), std::get<HalfPlanePoint>(y));
}

double hyp_distance(const Polar& x, const Polar& y) {
  if (std::isinf(x.height) || std::isinf(y.height)) {
    const Polar& p = std::isinf(x.height) ? y : x;
    return std::isinf(p.height) ? 0.0 : p.radius();
  }
  const double rx = std::exp(-x.height), ry = std::exp(-y.height);
  const double delta = x.angle - y.angle;
  const double s = std::sin(delta / 2.0);
  // |x - y| and |1 - conj(y) x| assembled from well-conditioned pieces.
  const double dr = -rx * std::expm1(x.height - y.height);
  const double b = std::sqrt(dr * dr + 4.0 * rx * ry * s * s);
  const double re = -std::expm1(-(x.height + y.height)) + 2.0 * rx * ry * s * s;
  const double im = rx * ry * std::sin(delta);
  const double a = std::hypot(re, im);
  if (a == 0.0) return 0.0;
  const double q = b / a;
  // 1 - q = (1-|x|^2)(1-|y|^2) / (a (a + b))
  const double one_minus_q = x.one_minus_abs2() * y.one_minus_abs2() / (a * (a + b));
  return std::log1p(q) - std::log(one_minus_q);
}

// ---------------------------------------------------------------- Moebius

Moebius::Moebius(cplx a, cplx b, cplx c, cplx d, MoebiusKind kind) : Moebius(a, b, c, d, kind, true) {}

Moebius::Moebius(cplx a, cplx b, cplx c, cplx d, MoebiusKind kind, bool validate) : kind_(kind) {
  const cplx det = a * d - b * c;
  if (!finite(det) || std::abs(det) == 0.0) throw UsageError("singular Moebius matrix");
  const cplx s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
  if (!validate) return;

  // Check that the boundary of the source lands on the boundary of the target
  // and that one interior point lands inside.
  const bool src_disk = kind == MoebiusKind::DiskAut || kind == MoebiusKind::DiskToHalfPlane;
  const bool dst_disk = kind == MoebiusKind::DiskAut || kind == MoebiusKind::HalfPlaneToDisk;
  const std::array<cplx, 3> bdry = src_disk
                                       ? std::array<cplx, 3>{cplx(0.6, 0.8), cplx(-0.28, 0.96), cplx(0.0, -1.0)}
                                       : std::array<cplx, 3>{cplx(-1.3, 0.0), cplx(0.4, 0.0), cplx(2.7, 0.0)};
  for (cplx z : bdry) {
    const cplx den = c_ * z + d_;
    if (std::abs(den) < 1e-300) continue;  // maps to infinity, on the half-plane boundary
    const cplx w = (a_ * z + b_) / den;
    const double err = dst_disk ? std::abs(std::abs(w) - 1.0) : std::abs(w.imag()) / std::max(1.0, std::abs(w));
    if (dst_disk && std::abs(w) > 1e12) throw UsageError("Moebius matrix does not match its domain tag");
    if (err > kKindTol) throw UsageError("Moebius matrix does not match its domain tag");
  }
  const cplx inner = src_disk ? cplx(0.1, 0.2) : cplx(0.3, 1.1);
  const cplx w = (a_ * inner + b_) / (c_ * inner + d_);
  const bool inside = dst_disk ? std::abs(w) < 1.0 : w.imag() > 0.0;
  if (!inside) throw UsageError("Moebius matrix does not match its domain tag");
}

Moebius Moebius::identity_disk() { return Moebius(1.0, 0.0, 0.0, 1.0, MoebiusKind::DiskAut, false); }

Moebius Moebius::disk_automorphism(cplx a, double theta) {
  if (std::abs(a) >= 1.0) throw PreconditionError("automorphism centre must lie in the disk");
  const cplx e = std::polar(1.0, theta);
  return Moebius(e, -e * a, -std::conj(a), 1.0, MoebiusKind::DiskAut, false);
}

Moebius Moebius::halfplane_linear(double scale, double shift) {
  if (!(scale > 0.0)) throw PreconditionError("half-plane scaling must be positive");
  return Moebius(scale, shift, 0.0, 1.0, MoebiusKind::HalfPlaneAut, false);
}

Moebius Moebius::cayley_disk_to_halfplane() {
  const cplx i(0.0, 1.0);
  return Moebius(i, i, -1.0, 1.0, MoebiusKind::DiskToHalfPlane, false);
}

Moebius Moebius::halfplane_to_disk_at(const DiskPoint& p) {
  const cplx pv = p.value();
  const double r = std::abs(pv);
  if (r == 0.0) throw PreconditionError("direction of the origin is undefined");
  const cplx u = pv / r;
  // w -> u (D - w)/(D + w) with D = i (1+r)/(1-r).
  const cplx D(0.0, (1.0 + r) / (1.0 - r));
  return Moebius(-u, u * D, 1.0, D, MoebiusKind::HalfPlaneToDisk, false);
}

cplx Moebius::apply(cplx z) const {
  if (std::isinf(z.real()) || std::isinf(z.imag())) {
    if (std::abs(c_) == 0.0) throw NumericalError("Moebius map sends infinity to infinity");
    return a_ / c_;
  }
  const cplx den = c_ * z + d_;
  if (std::abs(den) <= 1e-300 * std::max(1.0, std::abs(a_ * z + b_)))
    throw NumericalError("Moebius map evaluated at its pole");
  return (a_ * z + b_) / den;
}

cplx Moebius::derivative(cplx z) const {
  const cplx den = c_ * z + d_;
  if (std::abs(den) == 0.0) throw NumericalError("Moebius map evaluated at its pole");
  return 1.0 / (den * den);
}

Point Moebius::apply(const Point& p) const {
  const bool src_disk = kind_ == MoebiusKind::DiskAut || kind_ == MoebiusKind::DiskToHalfPlane;
  const bool dst_disk = kind_ == MoebiusKind::DiskAut || kind_ == MoebiusKind::HalfPlaneToDisk;
  if (src_disk != std::holds_alternative<DiskPoint>(p)) throw UsageError("point is not in the source model");
  const cplx z = src_disk ? std::get<DiskPoint>(p).value() : std::get<HalfPlanePoint>(p).value();
  const cplx w = apply(z);
  if (dst_disk) return DiskPoint(w);
  return HalfPlanePoint(w);
}

Moebius Moebius::inverse() const {
  MoebiusKind k = kind_;
  if (k == MoebiusKind::DiskToHalfPlane) k = MoebiusKind::HalfPlaneToDisk;
  else if (k == MoebiusKind::HalfPlaneToDisk) k = MoebiusKind::DiskToHalfPlane;
  return Moebius(d_, -b_, -c_, a_, k, false);
}

Moebius Moebius::compose(const Moebius& g) const {
  const bool g_dst_disk = g.kind_ == MoebiusKind::DiskAut || g.kind_ == MoebiusKind::HalfPlaneToDisk;
  const bool f_src_disk = kind_ == MoebiusKind::DiskAut || kind_ == MoebiusKind::DiskToHalfPlane;
  if (g_dst_disk != f_src_disk) throw UsageError("Moebius maps do not chain");
  const bool src_disk = g.kind_ == MoebiusKind::DiskAut || g.kind_ == MoebiusKind::DiskToHalfPlane;
  const bool dst_disk = kind_ == MoebiusKind::DiskAut || kind_ == MoebiusKind::HalfPlaneToDisk;
  const MoebiusKind k = src_disk ? (dst_disk ? MoebiusKind::DiskAut : MoebiusKind::DiskToHalfPlane)
                                 : (dst_disk ? MoebiusKind::HalfPlaneToDisk : MoebiusKind::HalfPlaneAut);
  return Moebius(a_ * g.a_ + b_ * g.c_, a_ * g.b_ + b_ * g.d_, c_ * g.a_ + d_ * g.c_, c_ * g.b_ + d_ * g.d_, k,
                 false);
}

Moebius straight_moebius(const DiskPoint& a, const DiskPoint& b) {
  if (a.value() == 0.0 || b.value() == 0.0) throw PreconditionError("direction of the origin is undefined");
  return Moebius::halfplane_to_disk_at(b).compose(Moebius::halfplane_to_disk_at(a).inverse());
}

// ---------------------------------------------------------------- curvature

namespace {

// Finite-difference weights for derivatives 1 and 2 at x0 (Fornberg's algorithm).
void fd_weights(double x0, std::span<const double> x, std::vector<double>& w1, std::vector<double>& w2) {
  const std::size_t n = x.size();
  const int m = 2;
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      if (c3 == 0.0) throw NumericalError("stencil has repeated parameter values");
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  w1.resize(n);
  w2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w1[i] = c[i][1];
    w2[i] = c[i][2];
  }
}

// Half the Euclidean curvature at the origin of the normalized stencil.
double normalized_curvature(std::span<const cplx> pts, std::span<const double> t, std::size_t center) {
  const cplx z0 = pts[center];
  if (std::abs(z0) >= 1.0) throw PreconditionError("curve point is not inside the disk");
  const Moebius m = Moebius::disk_automorphism(z0);
  std::vector<cplx> w(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) w[i] = m.apply(pts[i]);
  std::vector<double> w1, w2;
  fd_weights(t[center], t, w1, w2);
  cplx d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    d1 += w1[i] * w[i];
    d2 += w2[i] * w[i];
  }
  const double speed = std::abs(d1);
  if (!(speed > 0.0) || !std::isfinite(speed)) throw NumericalError("stencil has zero speed");
  // Rotating the tangent to the positive real axis does not change |Im(conj(d1) d2)|.
  return 0.5 * std::abs(std::imag(std::conj(d1) * d2)) / (speed * speed * speed);
}

}  // namespace

double geodesic_curvature(std::span<const cplx> points, std::span<const double> params, std::size_t index) {
  if (points.size() < 5 || points.size() != params.size()) throw PreconditionError("need at least 5 samples");
  if (index < 2 || index + 2 >= points.size()) throw PreconditionError("index must be strictly interior");
  for (std::size_t i = index - 2; i < index + 2; ++i)
    if (points[i] == points[i + 1] || params[i] == params[i + 1])
      throw NumericalError("stencil has repeated samples");
  return normalized_curvature(points.subspan(index - 2, 5), params.subspan(index - 2, 5), 2);
}

double geodesic_curvature(const std::function<cplx(double)>& path, double t, double h0) {
  double h = h0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 0; iter < 40; ++iter, h *= 0.5) {
    const std::array<double, 5> ts{t - 2 * h, t - h, t, t + h, t + 2 * h};
    std::array<cplx, 5> ps;
    for (int i = 0; i < 5; ++i) ps[i] = path(ts[i]);
    const double k5 = normalized_curvature(ps, ts, 2);
    const double k3 = normalized_curvature(std::span(ps).subspan(1, 3), std::span(ts).subspan(1, 3), 1);
    if (std::abs(k5 - k3) <= 1e-4 * std::max(1.0, k5)) return k5;
    if (std::isfinite(prev) && std::abs(k5 - prev) <= 1e-8 * std::max(1.0, k5)) return k5;
    prev = k5;
  }
  throw NumericalError("curvature stencil did not converge");
}

}  // namespace innerlab
