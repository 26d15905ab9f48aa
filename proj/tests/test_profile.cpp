#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thinvar/profile.hpp"
#include "thinvar/quadrature.hpp"
#include "thinvar/sampling.hpp"
#include "thinvar/thinning.hpp"

#include "oracles.hpp"

using namespace thinvar;

namespace {

PiecewiseProfile random_profile(const Alphabet& alphabet, SplitMix64& rng) {
  std::size_t R = 1 + rng.next() % 4;
  std::vector<double> breakpoints{0.0};
  for (std::size_t r = 1; r < R; ++r) breakpoints.push_back(rng.uniform());
  breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  for (std::size_t r = 1; r < breakpoints.size(); ++r)
    if (breakpoints[r] - breakpoints[r - 1] < 1e-3) breakpoints[r] = breakpoints[r - 1] + 1e-3;
  for (double& b : breakpoints) b /= breakpoints.back();
  breakpoints.front() = 0.0;
  breakpoints.back() = 1.0;
  std::vector<std::vector<double>> measures;
  for (std::size_t r = 0; r < R; ++r)
    measures.push_back(oracles::random_simplex(alphabet.size(), rng));
  return PiecewiseProfile(alphabet, std::move(breakpoints), std::move(measures));
}

}  // namespace

TEST_CASE("profile validation") {
  Alphabet pm({"-", "+"});
  CHECK_THROWS_AS(PiecewiseProfile(pm, {0.0, 0.5}, {{1.0, 0.0}}), input_error);
  CHECK_THROWS_AS(PiecewiseProfile(pm, {0.0, 0.5, 0.5, 1.0},
                                   {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}}),
                  input_error);
  CHECK_THROWS_AS(PiecewiseProfile(pm, {0.0, 1.0}, {{0.7, 0.7}}), input_error);
  CHECK_THROWS_AS(PiecewiseProfile(pm, {0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}), input_error);
}

TEST_CASE("constant profile builds the i.i.d. array") {
  Alphabet abc({"a", "b", "c"});
  std::vector<double> nu{0.5, 0.2, 0.3};
  PiecewiseProfile profile = PiecewiseProfile::constant(abc, nu);
  for (std::size_t n : {1u, 2u, 4u})
    CHECK(tv_distance(build_joint(profile, n), JointMeasure::product(abc, nu, n)) < 1e-14);
}

TEST_CASE("kink profile at one half, two coordinates") {
  JointMeasure mu = build_joint(kink_profile(0.5), 2);
  CHECK(mu.weight(0) == doctest::Approx(0.25).epsilon(1e-14));  // --
  CHECK(mu.weight(1) == doctest::Approx(0.5).epsilon(1e-14));   // -+
  CHECK(mu.weight(2) == doctest::Approx(0.0).epsilon(1e-14));   // +-
  CHECK(mu.weight(3) == doctest::Approx(0.25).epsilon(1e-14));  // ++
}

TEST_CASE("staircase of deltas is supported on nondecreasing sequences") {
  Alphabet abc({"a", "b", "c"});
  PiecewiseProfile stairs(abc, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0},
                          {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  JointMeasure mu = build_joint(stairs, 4);
  for (std::size_t idx = 0; idx < mu.size(); ++idx) {
    std::vector<std::size_t> config = mu.decode(idx);
    bool nondecreasing = std::is_sorted(config.begin(), config.end());
    if (!nondecreasing) CHECK(mu.weight(idx) == 0.0);
  }
  // and mass actually reaches the monotone configurations
  CHECK(mu.weight(mu.encode({0, 1, 2, 2})) > 0.0);
}

TEST_CASE("beta kernel closed forms and normalization") {
  CHECK(beta_kernel(1, 1, 0.3) == doctest::Approx(1.0));
  CHECK(beta_kernel(2, 2, 0.3) == doctest::Approx(0.6));        // 2t
  CHECK(beta_kernel(1, 2, 0.3) == doctest::Approx(1.4));        // 2(1-t)
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      double total = integrate([&](double t) { return beta_kernel(k, n, t); }, 0.0, 1.0, 32);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  CHECK_THROWS_AS(beta_kernel(0, 3, 0.5), precondition_error);
  CHECK_THROWS_AS(beta_kernel(4, 3, 0.5), precondition_error);
}

TEST_CASE("subset weights") {
  CHECK(subset_weight(7, 7, 7, 7) == doctest::Approx(1.0));
  CHECK(subset_weight(2, 1, 1, 1) == doctest::Approx(0.5));
  double total = 0.0;
  for (std::size_t K = 1; K <= 12; ++K) total += subset_weight(12, K, 4, 2);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  // Vandermonde normalization across several shapes
  for (std::size_t N : {5u, 9u, 16u})
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t K = 1; K <= N; ++K) s += subset_weight(N, K, n, k);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
      }
  CHECK_THROWS_AS(subset_weight(4, 0, 2, 1), precondition_error);
  CHECK_THROWS_AS(subset_weight(4, 1, 5, 1), precondition_error);
}

TEST_CASE("subset weights approach the beta kernel") {
  auto discrepancy = [](std::size_t N) {
    double s = 0.0;
    for (std::size_t K = 1; K <= N; ++K)
      s += std::abs(subset_weight(N, K, 4, 2) -
                    beta_kernel(2, 4, static_cast<double>(K) / static_cast<double>(N)) /
                        static_cast<double>(N));
    return s;
  };
  double coarse = discrepancy(50);
  double fine = discrepancy(800);
  CHECK(fine < coarse);
  CHECK(fine < 0.01);
}

TEST_CASE("coordinate marginal") {
  Alphabet pm({"-", "+"});
  SUBCASE("n = 1 gives the profile mean") {
    PiecewiseProfile profile(pm, {0.0, 0.25, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
    std::vector<double> law = coordinate_marginal(profile, 1, 1);
    CHECK(law[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(law[1] == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("constant profile is unchanged for every coordinate") {
    PiecewiseProfile profile = PiecewiseProfile::constant(pm, {0.6, 0.4});
    for (std::size_t k = 1; k <= 5; ++k) {
      std::vector<double> law = coordinate_marginal(profile, 5, k);
      CHECK(law[0] == doctest::Approx(0.6).epsilon(1e-13));
    }
  }
  SUBCASE("kink, n = 2, second coordinate") {
    std::vector<double> law = coordinate_marginal(kink_profile(0.5), 2, 2);
    CHECK(law[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(law[1] == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("matches the marginal of the built joint") {
    SplitMix64 rng(41);
    Alphabet abc({"a", "b", "c"});
    for (int trial = 0; trial < 5; ++trial) {
      PiecewiseProfile profile = random_profile(abc, rng);
      for (std::size_t n : {2u, 5u, 8u}) {
        JointMeasure mu = build_joint(profile, n);
        for (std::size_t k = 1; k <= n; ++k) {
          std::vector<double> direct = marginal(mu, k);
          std::vector<double> via_beta = coordinate_marginal(profile, n, k);
          for (std::size_t x = 0; x < 3; ++x)
            CHECK(std::abs(direct[x] - via_beta[x]) < 1e-10);
        }
      }
    }
  }
  CHECK_THROWS_AS(coordinate_marginal(kink_profile(0.5), 2, 3), precondition_error);
}

TEST_CASE("profile mean") {
  Alphabet pm({"-", "+"});
  PiecewiseProfile constant = PiecewiseProfile::constant(pm, {0.3, 0.7});
  CHECK(profile_mean(constant)[0] == doctest::Approx(0.3));
  CHECK(profile_mean(kink_profile(0.5))[0] == doctest::Approx(0.5));
  PiecewiseProfile skew(pm, {0.0, 0.25, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK(profile_mean(skew)[0] == doctest::Approx(0.25));
  CHECK(profile_mean(skew)[1] == doctest::Approx(0.75));
}

TEST_CASE("kink profile bounds") {
  CHECK_THROWS_AS(kink_profile(0.0), precondition_error);
  CHECK_THROWS_AS(kink_profile(1.0), precondition_error);
  PiecewiseProfile kink = kink_profile(0.5);
  CHECK(kink.intervals() == 2);
  CHECK(kink.measure(0)[0] == 1.0);
  CHECK(kink.measure(1)[1] == 1.0);
}

TEST_CASE("profile construction is thinning invariant") {
  SplitMix64 rng(43);
  Alphabet abc({"a", "b", "c"});
  for (int trial = 0; trial < 8; ++trial) {
    PiecewiseProfile profile = random_profile(abc, rng);
    std::vector<JointMeasure> family;
    for (std::size_t n = 1; n <= 6; ++n) family.push_back(build_joint(profile, n));
    InvarianceReport report = check_thinning_invariance(family, 1e-12);
    CHECK(report.pass);
  }
}

TEST_CASE("symmetrized array is the i.i.d. array of the profile mean") {
  SplitMix64 rng(47);
  Alphabet pm({"-", "+"});
  for (int trial = 0; trial < 8; ++trial) {
    PiecewiseProfile profile = random_profile(pm, rng);
    std::vector<double> mean = profile_mean(profile);
    for (std::size_t n : {2u, 4u, 6u}) {
      JointMeasure collapsed = symmetrize(build_joint(profile, n));
      JointMeasure iid = JointMeasure::product(pm, mean, n);
      CHECK(tv_distance(collapsed, iid) < 1e-12);
    }
  }
}

TEST_CASE("incomplete beta agrees with kernel quadrature") {
  for (std::size_t n : {3u, 7u, 12u})
    for (std::size_t k = 1; k <= n; ++k)
      for (double x : {0.2, 0.55, 0.9}) {
        double quad = integrate([&](double t) { return beta_kernel(k, n, t); }, 0.0, x, 32);
        CHECK(incomplete_beta_integer(k, n, x) == doctest::Approx(quad).epsilon(1e-12));
      }
}
