#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "doctest.h"
#include "graphnorm/density.hpp"
#include "graphnorm/step_kernel.hpp"
#include "support.hpp"

using namespace graphnorm;

TEST_CASE("kernel validation") {
  CHECK_NOTHROW(StepKernel({0.5, 0.5}, {1, 2, 2, 3}));
  CHECK_THROWS_AS(StepKernel({0.5, 0.4}, {1, 2, 2, 3}), KernelError);
  CHECK_THROWS_AS(StepKernel({1.0, 0.0}, {1, 2, 2, 3}), KernelError);
  CHECK_THROWS_AS(StepKernel({0.5, 0.5}, {1, 2, 2.5, 3}), KernelError);
  CHECK_THROWS_AS(StepKernel({0.5, 0.5}, {1, 2, 2}), KernelError);
  CHECK_THROWS_AS(StepKernel({}, {}), KernelError);
  CHECK_THROWS_AS(StepKernel({1.0}, {std::nan("")}), KernelError);
  CHECK(StepKernel({0.5, 0.5}, {1, -2, -2, 3}).is_nonnegative() == false);
  CHECK(StepKernel({0.5, 0.5}, {1, 0.2, 0.2, 0}).is_graphon());
  CHECK_FALSE(StepKernel({0.5, 0.5}, {1.5, 0.2, 0.2, 0}).is_graphon());
}

TEST_CASE("dirac mixtures") {
  CHECK(dirac_d1().mean() == 0.5);
  CHECK(dirac_d2().mean() == 0.5);
  CHECK(dirac_d3(0.3).mean() == doctest::Approx(0.5));
  for (double eps : {0.1, 0.5, 0.9}) CHECK(dirac_d4(eps).mean() == doctest::Approx((1 + eps) / 4));
  CHECK(dirac(0.3).quantile(0.99) == 0.3);
  CHECK(dirac_d1().quantile(0.49) == 0.0);
  CHECK(dirac_d1().quantile(0.5) == 1.0);
  CHECK(dirac_d2().quantile(0.3) == 0.5);
  CHECK_THROWS_AS(dirac_d3(0.0), KernelError);
  CHECK_THROWS_AS(dirac_d4(1.0), KernelError);
  CHECK_THROWS_AS(dirac_d3(1.5), KernelError);
  CHECK_THROWS_AS(DiracMixture({{0.5, 0.7}}), KernelError);
}

TEST_CASE("special kernel layout") {
  const StepKernel w = special_kernel({2.0, {1.0, -0.5, 3.0}});
  REQUIRE(w.parts() == 4);
  CHECK(w.measures()[0] == 0.5);
  CHECK(w.measures()[1] == 0.25);
  CHECK(w.measures()[2] == 0.125);
  CHECK(w.measures()[3] == 0.125);
  CHECK(w.value(0, 0) == 4.0);
  CHECK(w.value(1, 1) == -8.0);
  CHECK(w.value(2, 2) == 192.0);
  CHECK(w.value(3, 3) == 0.0);
  CHECK(w.value(0, 1) == 0.0);
  CHECK_THROWS_AS(special_kernel({1.0, {}}), KernelError);
  CHECK_THROWS_AS(special_kernel({0.0, {1.0}}), KernelError);
  CHECK_THROWS_AS(special_kernel({1.0, std::vector<double>(61, 1.0)}), KernelError);
}

TEST_CASE("block-random sampling is a pure function of its seed") {
  const StepKernel a = sample_block_random(16, dirac_d2(), 42);
  const StepKernel b = sample_block_random(16, dirac_d2(), 42);
  const StepKernel c = sample_block_random(16, dirac_d2(), 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  for (double x : a.values()) CHECK((x == 0.0 || x == 0.5 || x == 1.0));
  // Nested: the top-left block of a larger sample matches the smaller one.
  const StepKernel big = sample_block_random(32, dirac_d2(), 42);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) CHECK(big.value(i, j) == a.value(i, j));
}

TEST_CASE("arithmetic requires a shared partition") {
  const StepKernel a({0.5, 0.5}, {1, 2, 2, 3});
  const StepKernel b({0.25, 0.75}, {1, 2, 2, 3});
  CHECK_THROWS_WITH_AS(add(a, b), doctest::Contains("common_refinement"), KernelError);
  CHECK(subtract(a, a).values()[3] == 0.0);
  CHECK(scale(a, 2).value(1, 1) == 6.0);
  CHECK(combine(2, a, -1, a) == a);
  CHECK(complement(StepKernel({1.0}, {0.25})).value(0, 0) == 0.75);
  CHECK(abs(scale(a, -1)) == a);
}

TEST_CASE("common refinement preserves densities") {
  SplitMix64Stream rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const StepKernel a = testing::random_kernel(rng, 1 + rng.below(3), -1, 1);
    const StepKernel b = testing::random_kernel(rng, 1 + rng.below(3), 0, 1);
    const auto [ra, rb] = common_refinement(a, b);
    CHECK(ra.same_partition(rb));
    const Graph h = testing::random_graph(rng, 2, 5, 0.6);
    CHECK(testing::rel_close(density(h, ra), density(h, a), 1e-12));
    CHECK(testing::rel_close(density(h, rb), density(h, b), 1e-12));
  }
}

TEST_CASE("part permutation preserves densities") {
  SplitMix64Stream rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + rng.below(3);
    const StepKernel a = testing::random_kernel(rng, k, -1, 1);
    const StepKernel p = permute_parts(a, testing::random_permutation(rng, k));
    const Graph h = testing::random_graph(rng, 2, 5, 0.6);
    CHECK(testing::rel_close(density(h, p), density(h, a), 1e-12));
  }
}

TEST_CASE("kernel json round trip and errors") {
  SplitMix64Stream rng(2);
  const StepKernel a = testing::random_kernel(rng, 3, -2, 2);
  CHECK(kernel_from_json(kernel_to_json(a)) == a);
  CHECK_THROWS_AS(kernel_from_json(nlohmann::json::parse(R"({"measures":[1]})")), KernelError);
  CHECK_THROWS_AS(kernel_from_json(nlohmann::json::parse(R"({"measures":[0.5,0.5],"values":[[1,0],[1,0]]})")),
                  KernelError);
  CHECK_THROWS_AS(kernel_from_json(nlohmann::json::parse(R"({"measures":[1],"values":[["a"]]})")), KernelError);
}

namespace {

// Pearson chi-square p-value of observed counts against probabilities.
double chi_square_p(const std::map<double, int>& observed, const std::vector<DiracMixture::Atom>& expected) {
  int total = 0;
  for (const auto& [v, c] : observed) total += c;
  double stat = 0.0;
  std::map<double, double> want;
  for (const auto& a : expected) want[a.value] += a.probability;
  for (const auto& [v, c] : observed)
    if (!want.count(v)) return 0.0;
  for (const auto& [v, p] : want) {
    const double e = p * total;
    const double o = observed.count(v) ? observed.at(v) : 0;
    stat += (o - e) * (o - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(want.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("difference and midpoint of coin kernels follow the stated mixtures") {
  // Upper-triangle blocks of |U1 - U2| against the fair coin, of (U1 + U2)/2
  // against {0, 1/2, 1} with weights 1/4, 1/2, 1/4.
  std::map<double, int> diff;
  std::map<double, int> mid;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const StepKernel u1 = sample_block_random(64, dirac_d1(), derive_seed(s, {1}));
    const StepKernel u2 = sample_block_random(64, dirac_d1(), derive_seed(s, {2}));
    const StepKernel d = abs(subtract(u1, u2));
    const StepKernel m = combine(0.5, u1, 0.5, u2);
    for (int i = 0; i < 64; ++i)
      for (int j = i; j < 64; ++j) {
        ++diff[d.value(i, j)];
        ++mid[m.value(i, j)];
      }
  }
  CHECK(chi_square_p(diff, dirac_d1().atoms()) > 0.001);
  CHECK(chi_square_p(mid, dirac_d2().atoms()) > 0.001);
}

TEST_CASE("smoothness combinations follow the shifted mixtures") {
  const double eps = 0.5;
  std::map<double, int> minus;
  std::map<double, int> plus;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const StepKernel u1 = sample_block_random(64, dirac_d1(), derive_seed(s, {1}));
    const StepKernel u2 = sample_block_random(64, dirac_d1(), derive_seed(s, {2}));
    const StepKernel a = abs(combine(1, u1, -eps, u2));
    const StepKernel b = scale(abs(combine(1, u1, eps, u2)), 0.5);
    for (int i = 0; i < 64; ++i)
      for (int j = i; j < 64; ++j) {
        ++minus[a.value(i, j)];
        ++plus[b.value(i, j)];
      }
  }
  CHECK(chi_square_p(minus, dirac_d3(eps).atoms()) > 0.001);
  CHECK(chi_square_p(plus, dirac_d4(eps).atoms()) > 0.001);
}
