#include <cmath>

#include "doctest.h"
#include "innerlab/errors.hpp"
#include "innerlab/lyapunov.hpp"

using namespace innerlab;

namespace {
const InnerModel kDeg2 = InnerModel::blaschke({0.0, 0.5});
const double kDeg2Chi = std::log(1 + std::sqrt(3.0) / 2);
}  // namespace

TEST_CASE("quadrature") {
  for (int d = 2; d <= 5; ++d) CHECK(std::abs(chi_quadrature(InnerModel::power(d)).value - std::log(d)) < 1e-10);
  CHECK(std::abs(chi_quadrature(kDeg2).value - kDeg2Chi) < 1e-8);
  CHECK(std::abs(chi_quadrature(InnerModel(cplx(0, 1), {0.0})).value) < 1e-14);
}

TEST_CASE("jensen oracle") {
  CHECK(chi_jensen_oracle(InnerModel::power(2)).value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(chi_jensen_oracle(InnerModel::power(3)).value == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  // Critical point 2 - sqrt(3), |F'(0)| = 1/2.
  CHECK(chi_jensen_oracle(kDeg2).value == doctest::Approx(std::log(0.5 / (2 - std::sqrt(3.0)))).epsilon(1e-13));
  const InnerModel f = InnerModel::blaschke({0.0, {0.4, 0.3}, {0.0, -0.5}, {-0.7, 0.1}});
  CHECK(std::abs(chi_quadrature(f).value - chi_jensen_oracle(f).value) < 1e-8);
}

TEST_CASE("birkhoff") {
  const LyapunovEstimate p = chi_birkhoff(InnerModel::power(2), 0.1234567, 1'000'000);
  CHECK(std::abs(p.value - std::log(2.0)) <= 3 * p.error);
  const LyapunovEstimate b = chi_birkhoff(kDeg2, 0.1234567, 1'000'000);
  CHECK(std::abs(b.value - kDeg2Chi) <= 3 * b.error);
  CHECK(chi_birkhoff(kDeg2, 0.4, 1).value == doctest::Approx(std::log(kDeg2.boundary_deriv_modulus(0.4))));
  CHECK_THROWS_AS(chi_birkhoff(InnerModel::blaschke({0.3, 0.5}), 0.1, 10), PreconditionError);
}

TEST_CASE("quadrature refinement") {
  const InnerModel f = InnerModel::blaschke({0.0, {0.9, 0.1}});
  const LyapunovEstimate coarse = chi_quadrature(f, 1e-8);
  const LyapunovEstimate fine = chi_quadrature(f, 5e-9);
  CHECK(std::abs(fine.value - coarse.value) <= std::max(coarse.error, 1e-15));
}
