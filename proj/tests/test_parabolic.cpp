#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "innerlab/errors.hpp"
#include "innerlab/parabolic.hpp"
#include "innerlab/rng.hpp"

using namespace innerlab;

namespace {

const HalfPlaneInner kZMinusInv(0.0, {{0.0, 1.0}});

// Roots of w^2 - z w - 1 = 0, the preimages of z under z - 1/z.
std::pair<cplx, cplx> quadratic_oracle(cplx z) {
  const cplx s = std::sqrt(z * z + 4.0);
  return {(z + s) / 2.0, (z - s) / 2.0};
}

}  // namespace

TEST_CASE("evaluation examples") {
  const Jet a = hp_eval_deriv(kZMinusInv, {0, 1});
  CHECK(std::abs(a.value - cplx(0, 2)) < 1e-15);
  CHECK(std::abs(a.deriv) < 1e-15);
  const Jet b = hp_eval_deriv(kZMinusInv, {0, 2});
  CHECK(std::abs(b.value - cplx(0, 2.5)) < 1e-15);
  CHECK(std::abs(b.deriv - 0.75) < 1e-15);
  const Jet c = hp_eval_deriv(HalfPlaneInner(0.7, {}), {0.2, 0.3});
  CHECK(std::abs(c.value - cplx(0.9, 0.3)) < 1e-15);
  CHECK(std::abs(c.deriv - 1.0) < 1e-15);
}

TEST_CASE("preimage examples") {
  for (cplx z : {cplx(0, 2.5), cplx(0, 0.5), cplx(0.7, 0.1)}) {
    const auto w = hp_preimages(kZMinusInv, z);
    REQUIRE(w.size() == 2);
    auto [p, q] = quadratic_oracle(z);
    if (p.imag() < 0) p = -1.0 / p;  // the other root of the same quadratic
    if (q.imag() < 0) q = -1.0 / q;
    const double err = std::min(std::abs(w[0] - p) + std::abs(w[1] - q), std::abs(w[0] - q) + std::abs(w[1] - p));
    CHECK(err < 1e-12);
    CHECK(w[0].imag() + w[1].imag() == doctest::Approx(z.imag()).epsilon(1e-12));
  }
  const auto half = hp_preimages(kZMinusInv, {0, 0.5});
  CHECK(std::abs(half[1] - cplx(std::sqrt(15.0) / 4, 0.25)) < 1e-12);
  const auto shift = hp_preimages(HalfPlaneInner(0.7, {}), {0.2, 0.3});
  REQUIRE(shift.size() == 1);
  CHECK(std::abs(shift[0] - cplx(-0.5, 0.3)) < 1e-15);
}

TEST_CASE("half-plane invariants") {
  const HalfPlaneInner f(0.3, {{-1.0, 0.5}, {2.0, 0.25}, {0.5, 1.0}});
  auto g = substream(5, 0);
  for (int i = 0; i < 500; ++i) {
    const cplx z{8 * uniform01(g) - 4, 0.01 + 2 * uniform01(g)};
    const Jet j = hp_eval_deriv(f, z);
    CHECK(j.value.imag() >= z.imag() - 1e-12);
    CHECK(j.value.imag() / z.imag() == doctest::Approx(f.im_ratio(z)).epsilon(1e-12));
    CHECK(std::abs(j.deriv) <= f.boundary_deriv(z.real()) + 1e-12);
    double sum = 0.0;
    for (cplx w : hp_preimages(f, z)) {
      CHECK(w.imag() <= z.imag() + 1e-12);
      sum += w.imag();
    }
    CHECK(std::abs(sum - z.imag()) <= 1e-9 * z.imag());
  }
  double min_deriv = INFINITY;
  for (int i = 0; i <= 10000; ++i) {
    const double x = -5 + 1e-3 * i;
    if (std::abs(x + 1) > 1e-9 && std::abs(x - 2) > 1e-9 && std::abs(x - 0.5) > 1e-9)
      min_deriv = std::min(min_deriv, f.boundary_deriv(x));
  }
  CHECK(min_deriv > 1.0);
}

TEST_CASE("chi_ell examples") {
  CHECK(std::abs(chi_ell(kZMinusInv) - 2 * std::numbers::pi) < 1e-6);
  CHECK(std::abs(chi_ell(HalfPlaneInner(0.0, {{0.0, 4.0}})) - 4 * std::numbers::pi) < 1e-6);
  CHECK(chi_ell(HalfPlaneInner(1.5, {})) == 0.0);
}

TEST_CASE("height classification") {
  CHECK(height_classify(kZMinusInv, {0, 0.7}).infinite);
  CHECK_FALSE(height_classify(HalfPlaneInner(3.0, {{0.0, 1.0}}), {0, 0.7}).infinite);
  CHECK_FALSE(height_classify(HalfPlaneInner(1.0, {}), {0, 0.7}).infinite);
  const HeightClass asym = height_classify(HalfPlaneInner(0.0, {{1.0, 1.0}, {-3.0, 0.2}}), {0, 0.7});
  CHECK(asym.method == "iterate");
}

TEST_CASE("strip enumeration examples") {
  const StripProfile r0 = enumerate_strip(kZMinusInv, {0, 0.5}, -1, 1, 0.0);
  CHECK(r0.counted.empty());
  const StripProfile r2 = enumerate_strip(kZMinusInv, {0, 0.5}, -1, 1, 2.0);
  // Oracle: every node of the tree with Im >= e^-2, by brute force on the quadratic.
  std::vector<cplx> level{cplx(0, 0.5)};
  long oracle = 1;
  while (!level.empty()) {
    std::vector<cplx> next;
    for (cplx z : level) {
      auto [p, q] = quadratic_oracle(z);
      for (cplx w : {p, q}) {
        if (w.imag() < 0) w = -1.0 / w;
        if (w.imag() < std::exp(-2.0)) continue;
        next.push_back(w);
        if (std::abs(w.real()) <= 1 && w.imag() <= 1) ++oracle;
      }
    }
    level = std::move(next);
  }
  CHECK(static_cast<long>(r2.counted.size()) == oracle);
  CHECK(r2.count(2.0) == oracle);
  const StripProfile empty = enumerate_strip(kZMinusInv, {0, 0.5}, 1, -1, 3.0);
  CHECK(empty.counted.empty());
  CHECK(empty.nodes.size() > 1);
  CHECK_THROWS_AS(enumerate_strip(HalfPlaneInner(3.0, {{0.0, 1.0}}), {0, 0.5}, -1, 1, 2.0), PreconditionError);
}

TEST_CASE("far-field pruning does not change counts") {
  StripOptions tight, loose;
  loose.re_safety = 1e4;
  const StripProfile a = enumerate_strip(kZMinusInv, {0, 0.5}, -1, 1, 7.0, tight);
  const StripProfile b = enumerate_strip(kZMinusInv, {0, 0.5}, -1, 1, 7.0, loose);
  CHECK(a.counted.size() == b.counted.size());
  for (double S : {3.0, 5.0, 7.0}) CHECK(a.cesaro(S) == doctest::Approx(b.cesaro(S)).epsilon(1e-14));
}

TEST_CASE("strip report") {
  const StripProfile p = enumerate_strip(kZMinusInv, {0, 0.5}, -1, 1, 4.0);
  const auto rows = strip_counting_report(p, 2 * std::numbers::pi, {2.0, 4.0});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].target == doctest::Approx(1 / std::numbers::pi));
  CHECK(rows[1].count == p.count(4.0));
}

TEST_CASE("half-plane model text") {
  const HalfPlaneInner f(0.25, {{-1.0, 0.5}, {2.0, 0.125}});
  const HalfPlaneInner g = HalfPlaneInner::parse(f.serialize());
  CHECK(g.serialize() == f.serialize());
  CHECK_THROWS_AS(HalfPlaneInner::parse("beta=0\n"), UsageError);
  CHECK_THROWS(HalfPlaneInner::parse("kind=halfplane\natom=0,-1\n"));
}
