#include <cmath>

#include "doctest.h"
#include "innerlab/distortion.hpp"
#include "innerlab/errors.hpp"
#include "innerlab/rng.hpp"

using namespace innerlab;

TEST_CASE("disk distortion examples") {
  const DistortionSample s = distortion_at_disk(InnerModel::power(2), cplx(0.5));
  CHECK(std::abs(s.p - 0.8) < 1e-14);
  CHECK(s.mu == doctest::Approx(0.2));
  CHECK(s.delta == doctest::Approx(0.2));
  CHECK(s.eta == doctest::Approx(0.2));
  CHECK(s.alpha == doctest::Approx(0.0));
  const DiskMap aut = DiskMap::moebius(Moebius::disk_automorphism({0.3, 0.2}, 0.5));
  CHECK(std::abs(distortion_at_disk(aut, cplx(0.1, -0.4)).mu) < 1e-13);
  const DistortionSample id = distortion_at_disk(DiskMap::identity(), cplx(0.3, 0.4));
  CHECK(std::abs(id.p - 1.0) < 1e-15);
  CHECK_THROWS_AS(distortion_at_disk(InnerModel::power(2), cplx(0.0)), PreconditionError);
}

TEST_CASE("half-plane distortion examples") {
  const HalfPlaneMap f = [](cplx z) { return Jet{z - 1.0 / z, 1.0 + 1.0 / (z * z)}; };
  const DistortionSample s = distortion_at_halfplane(f, {0, 2});
  CHECK(std::abs(s.p - 0.6) < 1e-14);
  CHECK(s.mu == doctest::Approx(0.4));
  CHECK(s.alpha == doctest::Approx(0.0));
  const HalfPlaneMap twice = [](cplx z) { return Jet{2.0 * z, 2.0}; };
  CHECK(std::abs(distortion_at_halfplane(twice, {0.3, 0.7}).p - 1.0) < 1e-15);
  const HalfPlaneMap up = [](cplx z) { return Jet{z + cplx(0, 1), 1.0}; };
  const DistortionSample u = distortion_at_halfplane(up, {0.5, 0.25});
  CHECK(u.mu == doctest::Approx(1 / 1.25));
  CHECK(u.eta == doctest::Approx(1 / 1.25));
  const HalfPlaneMap down = [](cplx z) { return Jet{z - cplx(0, 1), 1.0}; };
  CHECK_THROWS(distortion_at_halfplane(down, {0.0, 0.5}));
}

TEST_CASE("distortion inequalities on random samples") {
  auto g = substream(7, 0);
  const InnerModel f = InnerModel::blaschke({0.0, {0.4, 0.3}, {-0.2, -0.6}});
  for (int i = 0; i < 2000; ++i) {
    const cplx z = std::polar(0.05 + 0.9 * uniform01(g), 6.283 * uniform01(g));
    const DistortionSample s = distortion_at_disk(f, z);
    CHECK(s.mu <= s.eta + 1e-13);
    CHECK(s.delta <= s.alpha + s.eta + 1e-13);
    CHECK(s.mu == doctest::Approx(moebius_distortion(f, Polar::from_complex(z))).epsilon(1e-9));
  }
}

TEST_CASE("radial integrals") {
  const RadialIntegral eta = radial_distortion_integral(InnerModel::power(2), 0.0, Quantity::Eta, 1 - 1e-6);
  CHECK(eta.value <= std::log(2.0) + 1e-6);
  CHECK(eta.value > 0.5);
  CHECK(radial_distortion_integral(InnerModel::power(2), 0.0, Quantity::Alpha, 0.99).value < 1e-12);
  const InnerModel aut(1.0, std::vector<cplx>{cplx(0.3, 0.1)});
  CHECK(radial_distortion_integral(aut, 0.4, Quantity::Mu, 0.999).value < 1e-10);
  const double a = radial_distortion_integral(InnerModel::power(3), 0.2, Quantity::Mu, 0.9).value;
  const double b = radial_distortion_integral(InnerModel::power(3), 0.2, Quantity::Mu, 0.99).value;
  CHECK(b >= a);
}

TEST_CASE("criterion scan examples") {
  const auto rows = angular_derivative_criterion_scan({{"z2", InnerModel::power(2)}, {"z3", InnerModel::power(3)}},
                                                      0.0, {0.999});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.integral_mu));
    CHECK(std::isfinite(r.log_angular_derivative));
  }
  const auto id = angular_derivative_criterion_scan({{"id", InnerModel::power(1)}}, 0.0, {0.99});
  CHECK(id[0].integral_mu == doctest::Approx(0.0));
  CHECK(id[0].log_angular_derivative == doctest::Approx(0.0));
}

TEST_CASE("cumulative orbit distortion") {
  const std::vector<Polar> orbit{Polar::from_complex(0.3), Polar::from_complex(0.5), Polar::from_complex(0.7)};
  CHECK(cumulative_orbit_distortion(InnerModel::power(2), orbit, 0).value == 0.0);
  const double one = distortion_at_disk(InnerModel::power(2), cplx(0.5)).delta;
  CHECK(cumulative_orbit_distortion(InnerModel::power(2), orbit, 1).value == doctest::Approx(one));
}
