#include <cmath>
#include <numbers>

#include "doctest.h"
#include "innerlab/errors.hpp"
#include "innerlab/hypgeo.hpp"

using namespace innerlab;

namespace {

// Möbius map through three point pairs, via the cross-ratio normal forms.
cplx three_point(cplx z, cplx z1, cplx z2, cplx z3, cplx w1, cplx w2, cplx w3) {
  auto cr = [](cplx a, cplx b, cplx c, cplx d) { return (a - b) * (c - d) / ((a - d) * (c - b)); };
  const cplx k = cr(z, z1, z2, z3);
  // Solve cr(w, w1, w2, w3) = k for w.
  const cplx A = w2 - w3, B = w2 - w1;
  return (k * w3 * B - w1 * A) / (k * B - A);
}

}  // namespace

TEST_CASE("hyperbolic distance examples") {
  CHECK(hyp_distance(DiskPoint(0.0), DiskPoint(0.0)) == doctest::Approx(0.0));
  CHECK(hyp_distance(DiskPoint(0.0), DiskPoint(0.5)) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(hyp_distance(HalfPlanePoint({0, 1}), HalfPlanePoint({0, 2})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(hyp_distance(Point(DiskPoint(0.1)), Point(HalfPlanePoint({0, 1}))), UsageError);
}

TEST_CASE("polar distance agrees with complex distance") {
  const cplx a{0.3, -0.4}, b{-0.7, 0.2};
  CHECK(hyp_distance(Polar::from_complex(a), Polar::from_complex(b)) ==
        doctest::Approx(hyp_distance(DiskPoint(a), DiskPoint(b))).epsilon(1e-12));
  const Polar near{1e-12, 0.3};
  CHECK(near.radius() == doctest::Approx(std::log(2.0 / 1e-12)).epsilon(1e-9));
}

TEST_CASE("moebius examples") {
  CHECK(std::abs(Moebius::identity_disk().apply({0.3, 0.1}) - cplx(0.3, 0.1)) < 1e-15);
  CHECK(std::abs(Moebius::halfplane_to_disk_at(DiskPoint(0.5)).apply({0, 1}) - cplx(0.5)) < 1e-14);
  CHECK(std::abs(Moebius::disk_automorphism(0.5).apply(0.5)) < 1e-15);
  const Moebius m = Moebius::disk_automorphism({0.2, 0.3}, 0.7);
  CHECK(std::abs(m.inverse().apply(m.apply({0.1, -0.4})) - cplx(0.1, -0.4)) < 1e-14);
  CHECK_THROWS_AS(Moebius(1, 0, 0, 1, MoebiusKind::HalfPlaneToDisk), UsageError);
}

TEST_CASE("straight moebius matches three-point interpolation") {
  for (cplx a : {cplx(0.5), cplx(0, 0.5), cplx(0.3, -0.2)}) {
    const cplx b = 0.5 * a * std::polar(1.0, 0.4);
    const Moebius m = straight_moebius(DiskPoint(a), DiskPoint(b));
    const cplx ua = a / std::abs(a), ub = b / std::abs(b);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.6, 0.3)})
      CHECK(std::abs(m.apply(z) - three_point(z, a, ua, -ua, b, ub, -ub)) < 1e-12);
  }
  const Moebius id = straight_moebius(DiskPoint(0.5), DiskPoint(0.5));
  CHECK(std::abs(id.apply({0.2, 0.7}) - cplx(0.2, 0.7)) < 1e-14);
  CHECK_THROWS(straight_moebius(DiskPoint(0.0), DiskPoint(0.5)));
}

TEST_CASE("geodesic curvature examples") {
  CHECK(geodesic_curvature([](double t) { return cplx(t, 0.0); }, 0.0) == doctest::Approx(0.0).epsilon(1e-6));
  const auto horocycle = [](double t) { return 0.5 + 0.5 * std::polar(1.0, t + std::numbers::pi); };
  CHECK(geodesic_curvature(horocycle, 0.0) == doctest::Approx(1.0).epsilon(1e-3));
  for (double r : {0.3, 0.7}) {
    const auto circle = [r](double t) { return std::polar(r, t); };
    CHECK(geodesic_curvature(circle, 1.1) == doctest::Approx((1 + r * r) / (2 * r)).epsilon(1e-3));
  }
}
