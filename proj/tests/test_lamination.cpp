#include <cmath>
#include <numbers>

#include "doctest.h"
#include "innerlab/errors.hpp"
#include "innerlab/lamination.hpp"

using namespace innerlab;

namespace {

const InnerModel kDeg2 = InnerModel::blaschke({0.0, 0.5});

// (1/2pi) int_A log(1/|z|) 4/(1-|z|^2)^2 dA by the midpoint rule in r.
double direct_box_mass(const AnnularBox& b) {
  const int n = 200000;
  const double h = (b.r2 - b.r1) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = b.r1 + (i + 0.5) * h;
    s += -std::log(r) * 4.0 * r / ((1 - r * r) * (1 - r * r));
  }
  return s * h * (b.theta2 - b.theta1) / (2 * std::numbers::pi);
}

}  // namespace

TEST_CASE("backward weights") {
  for (const auto& [theta, w] : backward_weights(InnerModel::power(3), 0.4)) CHECK(w == doctest::Approx(1.0 / 3));
  double total = 0.0;
  for (const auto& pw : backward_weights(kDeg2, 1.3)) total += pw.second;
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("inverse orbits") {
  const InverseOrbit u = sample_backward_orbit(kDeg2, 0, 5, 0.7);
  CHECK(u.length() == 0);
  CHECK(u.coords()[0].angle == doctest::Approx(0.7));
  const InverseOrbit v = sample_backward_orbit(kDeg2, 200, 5);
  CHECK(v.max_residual() < 1e-10);
  InverseOrbit w = InverseOrbit::interior(kDeg2, Polar::from_complex({0.2, 0.3}), BranchPolicy::Uniform, 3);
  w.extend(60);
  CHECK(w.max_residual() < 1e-10);
  for (std::size_t n = 1; n + 1 < w.coords().size(); ++n)
    if (w.coords()[n].radius() >= 1.0) CHECK(w.coords()[n + 1].height <= w.coords()[n].height + 1e-12);
  CHECK_THROWS_AS(InverseOrbit::interior(kDeg2, Polar::from_complex(0.0)), PreconditionError);
  CHECK_THROWS_AS(InverseOrbit::interior(kDeg2, Polar::from_complex(0.3), BranchPolicy::Lebesgue), PreconditionError);
}

TEST_CASE("transverse weights") {
  const cplx z{0.1, 0.2};
  const auto t = transverse_weights(InnerModel::power(2), z, 1);
  REQUIRE(t.size() == 3);
  CHECK(t[1].weight == doctest::Approx(-std::log(std::abs(z)) / 2));
  CHECK(t[2].normalized == doctest::Approx(0.5));
  double leaves = 0.0;
  int count = 0;
  for (const auto& n : transverse_weights(kDeg2, 0.3, 3))
    if (n.generation == 3) {
      leaves += n.weight;
      ++count;
    }
  CHECK(count == 8);
  CHECK(std::abs(leaves - std::log(1 / 0.3)) < 1e-9);
  CHECK_THROWS_AS(transverse_weights(kDeg2, 0.3, 20, 1000), ResourceError);
}

TEST_CASE("exponential map") {
  InverseOrbit fixed = InverseOrbit::boundary(InnerModel::power(2), 0.0, BranchPolicy::Explicit, 1,
                                              std::vector<int>(40, 0));
  fixed.extend(40);
  const ExpMapResult e = exponential_map(fixed, 0.5, 30);
  CHECK(std::abs(std::exp(-e.point.height) - std::exp(-0.5)) < 1e-6);
  const ExpMapResult e0 = exponential_map(fixed, 0.3, 0);
  CHECK(std::exp(-e0.point.height) == doctest::Approx(0.7).epsilon(1e-14));
  InverseOrbit u = sample_backward_orbit(kDeg2, 40, 9);
  for (double t : {1e-2, 1e-3}) {
    const cplx got = exponential_map(u, t, 30).point.to_complex();
    const cplx lin = (1 - t) * u.coords()[0].to_complex();
    CHECK(std::abs(got - lin) < 0.5 * t);
  }
}

TEST_CASE("intertwining") {
  InverseOrbit u = sample_backward_orbit(InnerModel::power(2), 40, 4);
  CHECK(geodesic_intertwining_check(u, 0.3, 0.0, 30) == 0.0);
  CHECK(geodesic_intertwining_check(u, 0.3, -0.5, 30) < 1e-3);
}

TEST_CASE("box masses") {
  const AnnularBox box{0.5, 0.6, 0.1, 0.5};
  const BoxMassEstimate m0 = xi_box_mass(kDeg2, box, 0);
  CHECK(m0.mass == doctest::Approx(direct_box_mass(box)).epsilon(1e-8));
  double prev = m0.mass;
  for (int n = 1; n <= 4; ++n) {
    const BoxMassEstimate m = xi_box_mass(kDeg2, box, n);
    CHECK(m.mass >= prev - m.error - 1e-12);
    prev = m.mass;
  }
}

TEST_CASE("total mass") {
  const TotalMass m = total_mass_check(InnerModel::power(2), 0.9, 400000, 11);
  CHECK(m.chi_reference == doctest::Approx(std::log(2.0)));
  CHECK(std::abs(m.mass - m.chi_reference) < 5 * m.std_error + 0.01);
  CHECK_THROWS_AS(total_mass_check(InnerModel::power(2), 0.9, 1000, 11, 0, 1e-9), ResourceError);
}

TEST_CASE("radial shadowing statistic") {
  InverseOrbit ray = InverseOrbit::interior(InnerModel::power(2), Polar::from_complex(0.5), BranchPolicy::Explicit, 1,
                                            std::vector<int>(60, 0));
  ray.extend(60);
  CHECK(radial_shadowing_stat(ray, 60).statistic < 1e-6);
}

TEST_CASE("shadowing simulation") {
  const ShadowResult none = shadowing_simulation(BadTimes::none(), 100.0, Adversary::UpRight, 0.3, 1.0);
  CHECK(none.average_distance == 0.0);
  CHECK(none.limit_x == doctest::Approx(0.3));
  const BadTimes d = BadTimes::dyadic(100.0);
  CHECK(d.contains(16.5));
  CHECK_FALSE(d.contains(21.0));
  CHECK(BadTimes::all().contains(3.0));
  const ShadowResult all = shadowing_simulation(BadTimes::all(), 100.0, Adversary::UpRight);
  CHECK(all.average_distance > 0.5);
}
