#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "innerlab/counting.hpp"
#include "innerlab/errors.hpp"
#include "innerlab/preimage.hpp"

using namespace innerlab;

namespace {

const InnerModel kDeg2 = InnerModel::blaschke({0.0, 0.5});

// d(0, r) for z^d preimage packets of e^{-1}.
double packet_radius(int d, int n) {
  const double r = std::exp(-1.0 / std::pow(d, n));
  return std::log((1 + r) / (1 - r));
}

}  // namespace

TEST_CASE("preimage examples") {
  auto w = preimages_of(InnerModel::power(2), 0.25);
  REQUIRE(w.size() == 2);
  std::sort(w.begin(), w.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(std::abs(w[0] + 0.5) < 1e-14);
  CHECK(std::abs(w[1] - 0.5) < 1e-14);
  const auto zero = preimages_of(InnerModel::power(2), 0.0);
  REQUIRE(zero.size() == 2);
  CHECK(std::abs(zero[0]) < 1e-12);
  CHECK(std::abs(zero[1]) < 1e-12);
  for (cplx u : preimages_of(kDeg2, {0.1, -0.2})) CHECK(std::abs(kDeg2.eval(u) - cplx(0.1, -0.2)) < 1e-12);
}

TEST_CASE("boundary preimages lie on the circle") {
  const auto th = boundary_preimages(kDeg2, 1.0);
  REQUIRE(th.size() == 2);
  for (double t : th) CHECK(std::abs(std::remainder(std::arg(kDeg2.eval(std::polar(1.0, t))) - 1.0, 2 * M_PI)) < 1e-12);
}

TEST_CASE("enumerate_ball closed-form examples") {
  const cplx z = std::exp(-1.0);
  CHECK(enumerate_ball(InnerModel::power(2), z, 0.5).nodes().empty());
  const PreimageTree t = enumerate_ball(InnerModel::power(2), z, 2.0);
  REQUIRE(t.nodes().size() == 3);
  CHECK(t.nodes()[0].radius == doctest::Approx(packet_radius(2, 0)).epsilon(1e-12));
  CHECK(t.nodes()[1].radius == doctest::Approx(packet_radius(2, 1)).epsilon(1e-12));
  CHECK(packet_radius(2, 2) > 2.0);
  const PreimageTree t3 = enumerate_ball(InnerModel::power(3), z, packet_radius(3, 1) + 1e-6);
  CHECK(t3.nodes().size() == 4);
}

TEST_CASE("sum of heights") {
  const PreimageTree t = enumerate_ball(kDeg2, 0.3, INFINITY, {.max_generation = 4});
  CHECK(verify_sum_of_heights(t, 0) < 1e-15);
  CHECK(verify_sum_of_heights(t, 4) < 1e-8);
  const PreimageTree p = enumerate_ball(InnerModel::power(3), {0.2, 0.4}, INFINITY, {.max_generation = 2});
  CHECK(verify_sum_of_heights(p, 2) < 1e-10);
  const PreimageTree cut = enumerate_ball(kDeg2, 0.3, 3.0);
  CHECK_THROWS_AS(verify_sum_of_heights(cut, cut.generations()), PreconditionError);
}

TEST_CASE("enumeration is independent of the thread count") {
  const PreimageTree a = enumerate_ball(kDeg2, 0.3, 8.0, {.threads = 1});
  const PreimageTree b = enumerate_ball(kDeg2, 0.3, 8.0, {.threads = 4});
  CHECK(a.to_csv() == b.to_csv());
  CHECK_THROWS_AS(enumerate_ball(kDeg2, 0.3, 12.0, {.node_budget = 1000}), ResourceError);
}

TEST_CASE("schwarz property along the tree") {
  const PreimageTree t = enumerate_ball(kDeg2, {0.2, 0.1}, 7.0);
  for (const PreimageNode& n : t.nodes())
    if (n.parent >= 0) CHECK(n.radius >= t.nodes()[static_cast<std::size_t>(n.parent)].radius - 1e-12);
}

TEST_CASE("counting examples") {
  const cplx z = std::exp(-1.0);
  const CountingProfile p = CountingProfile::from_tree(enumerate_ball(InnerModel::power(2), z, 2.0));
  CHECK(p.count(1.0) == 1);
  CHECK(p.count(1.5) == 3);
  CHECK(p.count(0.0) == 0);
  CHECK_THROWS_AS(p.count(2.5), PreconditionError);
  const double d0 = packet_radius(2, 0), d1 = packet_radius(2, 1);
  const double expected = 0.5 * ((std::exp(-d0) - std::exp(-2.0)) + 2 * (std::exp(-d1) - std::exp(-2.0)));
  CHECK(p.cesaro(2.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(CountingProfile(z, {}, 3.0).cesaro(2.0) == 0.0);
  CHECK(CountingProfile(z, {1.3}, 3.0).cesaro(1.3) == doctest::Approx(0.0));
  CHECK(CountingProfile(z, {}, 3.0).apriori_constant() == 0.0);
}

TEST_CASE("target constant") {
  CHECK(target_constant(std::exp(-1.0), std::log(2.0)) == doctest::Approx(1 / (2 * std::log(2.0))));
  CHECK(target_constant(0.3, std::log(1 + std::sqrt(3.0) / 2)) == doctest::Approx(0.9650145250324008).epsilon(1e-12));
  CHECK(target_constant(1 - 1e-12, 1.0) < 1e-11);
  CHECK_THROWS_AS(target_constant(0.3, 0.0), PreconditionError);
}

TEST_CASE("a-priori constant is stable in R") {
  const cplx z = std::exp(-1.0);
  const double c6 = CountingProfile::from_tree(enumerate_ball(InnerModel::power(2), z, 6.0)).apriori_constant();
  const double c8 = CountingProfile::from_tree(enumerate_ball(InnerModel::power(2), z, 8.0)).apriori_constant();
  CHECK(c6 > 0.0);
  CHECK(std::abs(c8 - c6) / c6 < 0.2);
}

TEST_CASE("schwarz gap") {
  const SchwarzGap g = estimate_schwarz_gap(kDeg2, 400, 1);
  CHECK(g.gamma > 0.0);
  CHECK(estimate_schwarz_gap(kDeg2, 400, 2).gamma == doctest::Approx(g.gamma).epsilon(1e-3));
  CHECK(estimate_schwarz_gap(InnerModel::power(2), 400).gamma > 0.0);
  CHECK(estimate_schwarz_gap(InnerModel::power(1), 10).degenerate);
}
