#include <cmath>

#include "doctest.h"
#include "graphnorm/density.hpp"
#include "graphnorm/moduli.hpp"
#include "support.hpp"

using namespace graphnorm;

TEST_CASE("witness kernels normalize to the unit sphere") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto e = convexity_witness(cycle_graph(4), 0.5, 32, seed);
    CHECK(std::abs(weak_norm(cycle_graph(4), scale(e.u1, 1.0 / e.norm_u1)) - 1.0) <= 1e-12);
    CHECK(std::abs(weak_norm(cycle_graph(4), scale(e.u2, 1.0 / e.norm_u2)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("witnesses re-evaluate from their stored kernels") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto c = convexity_witness(cycle_graph(4), 0.5, 24, seed);
    CHECK(std::abs(reevaluate(c, cycle_graph(4)) - c.value) <= 1e-9);
    const auto s = smoothness_witness(star_graph(2), 0.3, 24, seed);
    CHECK(std::abs(reevaluate(s, star_graph(2)) - s.value) <= 1e-9);
    CHECK(c.value >= -1e-9);
    CHECK(std::isfinite(s.value));
  }
}

TEST_CASE("degenerate convexity pair") {
  const StepKernel u = sample_block_random(32, dirac_d1(), 9);
  const auto e = convexity_from(cycle_graph(4), 0.5, u, u);
  // x = y: the midpoint is x itself, up to the rounding of the normalization.
  CHECK(std::abs(e.value) <= 1e-12);
  CHECK(e.separation == 0.0);
}

TEST_CASE("smoothness witness is non-negative") {
  for (double eps : {0.01, 0.1, 0.5, 0.99})
    for (std::uint64_t seed = 0; seed < 3; ++seed)
      CHECK(smoothness_witness(cycle_graph(4), eps, 16, seed).value >= -1e-9);
}

TEST_CASE("triangle inequality on sampled triples") {
  SplitMix64Stream rng(77);
  for (const Graph& h : {cycle_graph(4), star_graph(2)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto mu = testing::random_measures(rng, 2 + rng.below(4));
      const StepKernel x = testing::random_kernel_on(rng, mu, -1, 1);
      const StepKernel y = testing::random_kernel_on(rng, mu, -1, 1);
      CHECK(weak_norm(h, add(x, y)) <= weak_norm(h, x) + weak_norm(h, y) + 1e-9);
    }
  }
}

TEST_CASE("epsilon range and retries") {
  CHECK_THROWS_AS(convexity_witness(cycle_graph(4), 1.5, 16, 0), ModuliError);
  CHECK_THROWS_AS(smoothness_witness(cycle_graph(4), 0.0, 16, 0), ModuliError);
  CHECK_THROWS_AS(convexity_witness(Graph(3), 0.5, 16, 0), ModuliError);
  // n = 2 draws three coins per kernel; all zero forces a resample.
  int resampled = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto e = convexity_witness(named_graph("K2"), 0.5, 2, seed);
    CHECK(e.norm_u1 > 0.0);
    CHECK(e.norm_u2 > 0.0);
    if (e.attempts > 1) ++resampled;
  }
  CHECK(resampled > 0);
}

TEST_CASE("concentration with a single atom is exact") {
  // Dyadic n keeps the part measures exact, so the deviation is exactly 0.
  for (int n : {1, 2, 8, 32}) CHECK(concentration_check(cycle_graph(4), n, dirac(0.3), 5, 1).max == 0.0);
  // Otherwise 1/n is rounded and at most one ulp of 0.3^4 survives.
  const double ulp = std::nextafter(std::pow(0.3, 4), 1.0) - std::pow(0.3, 4);
  for (int n : {3, 7, 20}) CHECK(concentration_check(cycle_graph(4), n, dirac(0.3), 5, 1).max <= ulp);
}

TEST_CASE("concentration statistics") {
  const auto s = summarize(4, {4.0, 1.0, 3.0, 2.0});
  CHECK(s.mean == 2.5);
  CHECK(s.median == 2.5);
  CHECK(s.q90 == 4.0);
  CHECK(s.max == 4.0);
  CHECK(s.samples == std::vector<double>{4.0, 1.0, 3.0, 2.0});
  CHECK_THROWS_AS(concentration_check(Graph(2), 4, dirac_d1(), 3, 0), ModuliError);
  CHECK_THROWS_AS(concentration_scan(cycle_graph(4), {16, 16}, dirac_d1(), 3, 0, 0.1), ModuliError);
}

TEST_CASE("concentration limit for the shifted mixture") {
  const auto r = concentration_scan(cycle_graph(4), {64}, dirac_d4(0.5), 5, 0, 0.02);
  CHECK(r.target == doctest::Approx(std::pow(3.0 / 8.0, 4)));
  CHECK(r.stats.front().median <= 0.02);
}

TEST_CASE("embedding identity for connected graphs") {
  const auto c4 = lp_embedding_check(cycle_graph(4), {1.0, 1.0});
  CHECK(c4.density == doctest::Approx(2.0));
  CHECK(c4.holds);
  const auto single = lp_embedding_check(star_graph(2), {0.7});
  CHECK(testing::rel_close(single.density, std::pow(0.7, 2), 1e-12));
  SplitMix64Stream rng(12);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> a(1 + rng.below(10));
    for (double& x : a) x = rng.uniform();
    CHECK(lp_embedding_check(cycle_graph(6), a).holds);
  }
  const auto contrast = lp_embedding_check(cycle_graph(4), {1.0, 1.0});
  CHECK(contrast.contrast_density == doctest::Approx(4.0));
  CHECK(contrast.contrast_power_sum == doctest::Approx(2.0));
  CHECK_THROWS_WITH_AS(lp_embedding_check(named_graph("2*C4"), {1.0}), doctest::Contains("contrast"), ModuliError);
}

TEST_CASE("scan cells reproduce the witness operations") {
  const auto rows = modulus_scan(cycle_graph(4), ModulusKind::smoothness, {0.25, 0.5}, {8, 16}, {3, 4});
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].epsilon == 0.25);
  CHECK(rows[0].n == 8);
  CHECK(rows[1].seed == 4);
  CHECK(rows[2].n == 16);
  const auto direct = smoothness_witness(cycle_graph(4), 0.5, 16, 4);
  CHECK(rows[7].value == direct.value);
  CHECK_THROWS_AS(modulus_scan(cycle_graph(4), ModulusKind::convexity, {1.2}, {8}, {0}), ModuliError);
}

TEST_CASE("csv layout") {
  const auto rows = modulus_scan(cycle_graph(4), ModulusKind::convexity, {0.5}, {8}, {0, 1});
  const std::string csv = scan_to_csv("K1,2", rows);
  CHECK(csv.rfind("h,kind,epsilon,n,seed,value\n", 0) == 0);
  CHECK(csv.find("\"K1,2\",convexity-upper-bound,0.5,8,0,") != std::string::npos);
  const auto j = estimate_to_json(rows[0], true);
  CHECK(j.contains("witnesses"));
  CHECK(kernel_from_json(j["witnesses"]["u1"]) == rows[0].u1);
  CHECK_FALSE(estimate_to_json(rows[0], false).contains("witnesses"));
}

TEST_CASE("modulus trend record") {
  const auto r = modulus_trend(cycle_graph(4), ModulusKind::convexity, 0.5, {8, 16}, {0, 1, 2}, 1.0);
  REQUIRE(r.stats.size() == 2);
  CHECK(r.stats[0].samples.size() == 3);
  CHECK(r.within_tolerance);
}
