#include <cmath>
#include <numbers>

#include "doctest.h"
#include "innerlab/errors.hpp"
#include "innerlab/innerfn.hpp"

using namespace innerlab;

namespace {
const InnerModel kDeg2 = InnerModel::blaschke({0.0, 0.5});
}

TEST_CASE("evaluation examples") {
  CHECK(std::abs(InnerModel::power(2).eval(cplx(0.5)) - 0.25) < 1e-15);
  CHECK(std::abs(kDeg2.eval(cplx(0.5))) < 1e-15);
  const InnerModel atom(1.0, {}, {{0.0, 1.0}});
  CHECK(std::abs(atom.eval(cplx(0.0)) - std::exp(-1.0)) < 1e-15);
  CHECK_THROWS_AS(atom.eval(cplx(1.0)), NumericalError);
}

TEST_CASE("derivative examples") {
  CHECK(std::abs(InnerModel::power(2).deriv(0.5) - 1.0) < 1e-14);
  CHECK(std::abs(kDeg2.deriv(0.0) - 0.5) < 1e-14);
  const InnerModel flipped(-1.0, {0.0, 0.5});
  CHECK(std::abs(flipped.deriv(0.0) + 0.5) < 1e-14);
  CHECK(std::abs(InnerModel::power(3).deriv(0.0)) < 1e-15);
  // Central difference as an independent check.
  const cplx z{0.2, -0.3};
  const double h = 1e-6;
  const cplx fd = (kDeg2.eval(z + h) - kDeg2.eval(z - h)) / (2 * h);
  CHECK(std::abs(kDeg2.deriv(z) - fd) < 1e-8);
}

TEST_CASE("boundary derivative examples") {
  CHECK(InnerModel::power(2).boundary_deriv_modulus(0.7) == doctest::Approx(2.0));
  CHECK(kDeg2.boundary_deriv_modulus(0.0) == doctest::Approx(4.0).epsilon(1e-14));
  const InnerModel atom(1.0, {}, {{0.0, 1.0}});
  CHECK(atom.boundary_deriv_modulus(std::numbers::pi) == doctest::Approx(0.5).epsilon(1e-14));
  const InnerModel z_atom(1.0, {0.0}, {{0.0, 1.0}});
  CHECK(z_atom.boundary_deriv_modulus(std::numbers::pi) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(std::isinf(atom.angular_derivative(0.0)));
  // Radial limit of |F'| for the atom model.
  const double r = 1 - 1e-5;
  CHECK(std::abs(atom.deriv(-r)) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("frostman shift and iteration") {
  const DiskMap f = InnerModel::power(2);
  CHECK(std::abs(frostman_shift(f, 0.0)(cplx(0.3, 0.2)).value - cplx(0.3, 0.2) * cplx(0.3, 0.2)) < 1e-15);
  CHECK(std::abs(frostman_shift(f, 0.25)(cplx(0.5)).value) < 1e-15);
  CHECK(std::abs(frostman_shift(f, 0.25)(cplx(0.0)).value + 0.25) < 1e-15);
  CHECK(std::abs(iterate(kDeg2, 0.3, 0) - 0.3) < 1e-16);
  CHECK(std::abs(iterate(InnerModel::power(2), 0.9, 3) - std::pow(0.9, 8)) < 1e-15);
  CHECK(std::abs(iterate(kDeg2, 0.5, 2)) < 1e-15);
  CHECK_THROWS_AS(iterate(kDeg2, 0.5, 10, 5), ResourceError);
}

TEST_CASE("polar evaluation stays accurate near the circle") {
  const Polar w{1e-13, 0.4};
  const PolarJet j = DiskMap(kDeg2)(w);
  // 1 - |F| ~ |F'(zeta)| (1 - |w|) with |F'(zeta)| from the boundary sum.
  CHECK(j.value.height == doctest::Approx(kDeg2.boundary_deriv_modulus(0.4) * 1e-13).epsilon(1e-6));
}

TEST_CASE("model text round trip") {
  const InnerModel f({0.0, 1.0}, {0.0, {0.3, -0.2}}, {{1.0, 0.5}});
  const InnerModel g = InnerModel::parse(f.serialize());
  CHECK(g.serialize() == f.serialize());
  CHECK(std::abs(g.eval({0.1, 0.1}) - f.eval({0.1, 0.1})) < 1e-15);
  CHECK_THROWS_AS(InnerModel::parse("kind=disk\nzero=2,0\n"), Error);
  CHECK_THROWS_AS(InnerModel::parse("kind=disk\nzero=abc\n"), UsageError);
}
