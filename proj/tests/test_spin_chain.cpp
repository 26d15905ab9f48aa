#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thinvar/spin_chain.hpp"
#include "thinvar/sampling.hpp"

#include "oracles.hpp"

using namespace thinvar;

namespace {

// spins as +-1 doubles from alphabet indices
double spin(std::size_t idx) { return 2.0 * static_cast<double>(idx) - 1.0; }

// the pair model rewritten as (N-1)^{-1} sum_{j<k} s_j s_k + field sum;
// an independent route to the same Hamiltonian
double cw_hamiltonian_rewritten(double b, const std::vector<std::size_t>& sigma) {
  std::size_t N = sigma.size();
  double pair = 0.0;
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = j + 1; k < N; ++k) pair += spin(sigma[j]) * spin(sigma[k]);
  double field = 0.0;
  for (std::size_t j = 1; j <= N; ++j)
    field += (2.0 * static_cast<double>(j) - static_cast<double>(N) - 1.0) /
             static_cast<double>(N - 1) * spin(sigma[j - 1]);
  return -(pair / static_cast<double>(N - 1) + b * field);
}

bool is_kink(const std::vector<std::size_t>& sigma) {
  // all zeros (down) then all ones (up), either block possibly empty
  bool seen_up = false;
  for (std::size_t s : sigma) {
    if (s == 1) seen_up = true;
    else if (seen_up) return false;
  }
  return true;
}

Interaction random_pair_interaction(SplitMix64& rng) {
  std::vector<double> table(4);
  for (double& v : table) v = 2.0 * rng.uniform() - 1.0;
  return Interaction(Alphabet::spin(), 2, std::move(table));
}

}  // namespace

TEST_CASE("pair interaction table") {
  Interaction phi0 = cw_interaction(0.0);
  Interaction phi1 = cw_interaction(1.0);
  // (+1,+1): field term cancels for any b
  CHECK(phi0({1, 1}) == doctest::Approx(-0.5));
  CHECK(phi1({1, 1}) == doctest::Approx(-0.5));
  CHECK(phi1({1, 0}) == doctest::Approx(0.5 + 1.0));   // 1/2 + b
  CHECK(phi1({0, 1}) == doctest::Approx(0.5 - 1.0));   // 1/2 - b
}

TEST_CASE("hamiltonian basics") {
  SUBCASE("constant interaction gives N times the constant") {
    Interaction phi(Alphabet::spin(), 2, {0.7, 0.7, 0.7, 0.7});
    CHECK(hamiltonian(phi, {0, 1, 0, 1, 1}) == doctest::Approx(5.0 * 0.7).epsilon(1e-14));
  }
  SUBCASE("two aligned spins at zero field") {
    CHECK(hamiltonian(cw_interaction(0.0), {1, 1}) == doctest::Approx(-1.0));
  }
  SUBCASE("three spins at b = 1 against the rewritten form") {
    std::vector<std::size_t> sigma{0, 1, 1};  // (-1, +1, +1)
    CHECK(cw_hamiltonian_rewritten(1.0, sigma) == doctest::Approx(-1.5));
    CHECK(hamiltonian(cw_interaction(1.0), sigma) == doctest::Approx(-1.5).epsilon(1e-13));
  }
  SUBCASE("rewritten form matches the subset average for random configs") {
    SplitMix64 rng(3);
    for (double b : {0.0, 0.7, 1.0, 2.5})
      for (std::size_t N : {2u, 5u, 8u}) {
        std::vector<std::size_t> sigma(N);
        for (std::size_t i = 0; i < N; ++i) sigma[i] = rng.next() % 2;
        CHECK(hamiltonian(cw_interaction(b), sigma) ==
              doctest::Approx(cw_hamiltonian_rewritten(b, sigma)).epsilon(1e-12));
      }
  }
  SUBCASE("system smaller than arity is rejected") {
    CHECK_THROWS_AS(hamiltonian(cw_interaction(0.0), {1}), precondition_error);
  }
}

TEST_CASE("gibbs states") {
  SUBCASE("infinite temperature is uniform with zero potential") {
    GibbsSolution g = gibbs(cw_interaction(1.0), 4, 0.0);
    CHECK(g.log_partition == doctest::Approx(0.0).epsilon(1e-14));
    for (std::size_t i = 0; i < g.measure.size(); ++i)
      CHECK(g.measure.weight(i) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  }
  SUBCASE("two spins, zero field: Z_2 = cosh(beta)") {
    for (double beta : {0.5, 1.0, 2.0}) {
      GibbsSolution g = gibbs(cw_interaction(0.0), 2, beta);
      CHECK(g.log_partition == doctest::Approx(std::log(std::cosh(beta))).epsilon(1e-13));
    }
  }
  SUBCASE("constant interaction: Omega_N = -beta N c") {
    Interaction phi(Alphabet::spin(), 2, {0.3, 0.3, 0.3, 0.3});
    GibbsSolution g = gibbs(phi, 5, 1.5);
    CHECK(g.log_partition == doctest::Approx(-1.5 * 5.0 * 0.3).epsilon(1e-12));
  }
}

TEST_CASE("thinned gibbs marginals") {
  Interaction phi = cw_interaction(0.0);
  SUBCASE("k = N returns the Gibbs measure") {
    GibbsSolution g = gibbs(phi, 4, 1.0);
    CHECK(tv_distance(thinned_gibbs_marginal(phi, 4, 1.0, 4), g.measure) < 1e-15);
  }
  SUBCASE("beta = 0 gives the uniform product") {
    JointMeasure thinned = thinned_gibbs_marginal(phi, 5, 0.0, 2);
    CHECK(tv_distance(thinned, JointMeasure::product(Alphabet::spin(), {0.5, 0.5}, 2)) < 1e-14);
  }
  SUBCASE("matches the definitional subset average") {
    JointMeasure via_thin = thinned_gibbs_marginal(phi, 4, 1.0, 2);
    JointMeasure via_subsets = oracles::thin_to_definition(gibbs(phi, 4, 1.0).measure, 2);
    CHECK(tv_distance(via_thin, via_subsets) < 1e-14);
  }
}

TEST_CASE("energy identity") {
  SUBCASE("beta = 0 gives the uniform interaction average on both sides") {
    Interaction phi = cw_interaction(1.0);
    EnergyIdentity id = energy_identity_check(phi, 5, 0.0);
    double uniform_phi = 0.0;
    for (double v : phi.table()) uniform_phi += v / 4.0;
    CHECK(id.lhs == doctest::Approx(uniform_phi).epsilon(1e-13));
    CHECK(id.gap < 1e-13);
  }
  SUBCASE("two spins, zero field, beta = 1: both sides -tanh(1)/2") {
    EnergyIdentity id = energy_identity_check(cw_interaction(0.0), 2, 1.0);
    CHECK(id.lhs == doctest::Approx(-0.5 * std::tanh(1.0)).epsilon(1e-13));
    CHECK(id.gap < 1e-13);
  }
  SUBCASE("random pair interactions at N = 5") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
      Interaction phi = random_pair_interaction(rng);
      for (double beta : {0.0, 0.5, 1.0, 2.0})
        CHECK(energy_identity_check(phi, 5, beta).gap < 1e-12);
    }
  }
}

TEST_CASE("relative entropy") {
  Alphabet spin_ab = Alphabet::spin();
  SUBCASE("uniform measure has zero entropy") {
    CHECK(relative_entropy(JointMeasure::product(spin_ab, {0.5, 0.5}, 6)) ==
          doctest::Approx(0.0).epsilon(1e-13));
  }
  SUBCASE("point mass on N spins") {
    for (std::size_t N : {1u, 4u, 8u}) {
      JointMeasure point = JointMeasure::delta(spin_ab, std::vector<std::size_t>(N, 1));
      CHECK(relative_entropy(point) ==
            doctest::Approx(-static_cast<double>(N) * std::log(2.0)).epsilon(1e-13));
    }
  }
  SUBCASE("concavity on a random pair") {
    SplitMix64 rng(7);
    JointMeasure a = oracles::random_measure(spin_ab, 4, rng);
    JointMeasure b = oracles::random_measure(spin_ab, 4, rng);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = 0.5 * (a.weight(i) + b.weight(i));
    JointMeasure mixed(spin_ab, 4, std::move(mix));
    CHECK(relative_entropy(mixed) >=
          0.5 * relative_entropy(a) + 0.5 * relative_entropy(b) - 1e-12);
  }
  SUBCASE("always nonpositive") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial)
      CHECK(relative_entropy(oracles::random_measure(spin_ab, 5, rng)) <= 1e-14);
  }
}

TEST_CASE("entropy subadditivity under subset-averaged restriction") {
  SplitMix64 rng(13);
  Alphabet spin_ab = Alphabet::spin();
  for (std::size_t N : {4u, 7u, 10u}) {
    JointMeasure rho = oracles::random_measure(spin_ab, N, rng);
    for (std::size_t k = 1; k < N; ++k)
      CHECK(relative_entropy(rho) <=
            relative_entropy(thin_to(rho, k)) + relative_entropy(thin_to(rho, N - k)) + 1e-11);
  }
}

TEST_CASE("energy splitting identity") {
  SplitMix64 rng(17);
  for (double b : {0.0, 1.0}) {
    Interaction phi = cw_interaction(b);
    for (std::size_t N : {4u, 6u, 9u}) {
      JointMeasure rho = oracles::random_measure(Alphabet::spin(), N, rng);
      double total = expected_energy(phi, rho);
      for (std::size_t k = 2; k + 2 <= N; ++k) {
        double split = expected_energy(phi, thin_to(rho, k)) +
                       expected_energy(phi, thin_to(rho, N - k));
        CHECK(std::abs(total - split) < 1e-12);
      }
    }
  }
}

TEST_CASE("variational principle") {
  Interaction phi = cw_interaction(1.0);
  SUBCASE("zero gap at the Gibbs measure") {
    for (double beta : {0.5, 1.0, 2.0})
      CHECK(std::abs(variational_gap(phi, 5, beta, gibbs(phi, 5, beta).measure)) < 1e-10);
  }
  SUBCASE("uniform trial measure") {
    GibbsSolution g = gibbs(phi, 5, 1.0);
    JointMeasure uniform = JointMeasure::product(Alphabet::spin(), {0.5, 0.5}, 5);
    double gap = variational_gap(phi, 5, 1.0, uniform);
    CHECK(gap >= -1e-12);
    CHECK(gap == doctest::Approx(g.log_partition + expected_energy(phi, uniform)).epsilon(1e-12));
  }
  SUBCASE("point mass at a ground state, large beta") {
    GroundReport ground = ground_states_exhaustive(phi, 5);
    JointMeasure point = JointMeasure::delta(Alphabet::spin(), ground.minimizers.front());
    double beta = 20.0;
    double gap = variational_gap(phi, 5, beta, point);
    double expect = gibbs(phi, 5, beta).log_partition + beta * ground.energy +
                    5.0 * std::log(2.0);
    CHECK(gap == doctest::Approx(expect).epsilon(1e-10));
    CHECK(gap >= -1e-10);
  }
  SUBCASE("nonnegative on random measures") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
      JointMeasure rho = oracles::random_measure(Alphabet::spin(), 4, rng);
      CHECK(variational_gap(phi, 4, 1.0, rho) >= -1e-10);
    }
  }
  SUBCASE("shape mismatch is rejected") {
    JointMeasure rho = JointMeasure::product(Alphabet::spin(), {0.5, 0.5}, 3);
    CHECK_THROWS_AS(variational_gap(phi, 4, 1.0, rho), precondition_error);
  }
}

TEST_CASE("subadditivity sweep") {
  SUBCASE("beta = 0 gives exactly zero gaps") {
    SubadditivityReport report = subadditivity_sweep(cw_interaction(1.0), 0.0, 10);
    for (const auto& e : report.entries) CHECK(e.gap == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("zero field, beta = 1, N_max = 12") {
    SubadditivityReport report = subadditivity_sweep(cw_interaction(0.0), 1.0, 12);
    CHECK(report.max_gap <= 1e-9);
    CHECK(report.max_lower_bound_violation <= 1e-9);
  }
  SUBCASE("constant interaction gives equality") {
    Interaction phi(Alphabet::spin(), 2, {0.4, 0.4, 0.4, 0.4});
    SubadditivityReport report = subadditivity_sweep(phi, 1.0, 10);
    for (const auto& e : report.entries) CHECK(std::abs(e.gap) < 1e-11);
  }
}

TEST_CASE("pressure sequence") {
  SUBCASE("beta = 0 is identically zero") {
    for (const auto& p : pressure_sequence(cw_interaction(1.0), 0.0, 8))
      CHECK(p.omega_over_N == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("constant interaction") {
    Interaction phi(Alphabet::spin(), 2, {0.4, 0.4, 0.4, 0.4});
    for (const auto& p : pressure_sequence(phi, 2.0, 8))
      CHECK(p.omega_over_N == doctest::Approx(-0.8).epsilon(1e-12));
  }
  SUBCASE("zero-field entries are recorded with sizes") {
    auto seq = pressure_sequence(cw_interaction(0.0), 1.0, 10);
    CHECK(seq.size() == 9);
    CHECK(seq.front().N == 2);
    CHECK(seq.back().N == 10);
  }
}

TEST_CASE("exhaustive ground states of the pair model") {
  SUBCASE("b = 0.5: the two aligned configurations") {
    GroundReport report = ground_states_exhaustive(cw_interaction(0.5), 10);
    CHECK(report.degeneracy == 2);
    for (const auto& sigma : report.minimizers) {
      bool all_same = std::all_of(sigma.begin(), sigma.end(),
                                  [&](std::size_t s) { return s == sigma.front(); });
      CHECK(all_same);
    }
  }
  SUBCASE("b = 2: kinks with interface next to the midpoint") {
    GroundReport report = ground_states_exhaustive(cw_interaction(2.0), 10);
    for (const auto& sigma : report.minimizers) {
      CHECK(is_kink(sigma));
      std::size_t downs = std::count(sigma.begin(), sigma.end(), 0u);
      CHECK(std::abs(static_cast<int>(downs) - 5) <= 1);
    }
    CHECK(report.degeneracy >= 1);
  }
  SUBCASE("b = 1: all kinks are minimizers") {
    GroundReport report = ground_states_exhaustive(cw_interaction(1.0), 10);
    std::size_t kinks = 0;
    for (const auto& sigma : report.minimizers)
      if (is_kink(sigma)) ++kinks;
    CHECK(kinks == 11);  // one per interface position including the pure states
  }
}

TEST_CASE("finite-size minimizer profile approaches the step shape") {
  for (std::size_t N : {8u, 10u, 12u}) {
    GroundReport report = ground_states_exhaustive(cw_interaction(2.0), N);
    std::vector<double> magnetization(N, 0.0);
    for (const auto& sigma : report.minimizers)
      for (std::size_t i = 0; i < N; ++i)
        magnetization[i] += spin(sigma[i]) / static_cast<double>(report.degeneracy);
    for (std::size_t i = 0; i < N; ++i) {
      double t = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
      if (t < 0.5) CHECK(magnetization[i] < 0.0);
      if (t > 0.5) CHECK(magnetization[i] > 0.0);
    }
  }
}

TEST_CASE("analytic ground profiles") {
  SUBCASE("b = 0: two constant profiles, value 1/2") {
    GroundProfileReport report = cw_ground_profile(0.0);
    CHECK(report.kind == GroundProfileKind::two_constant);
    CHECK(report.optimal_value == doctest::Approx(0.5));
    CHECK(report.profiles.size() == 2);
  }
  SUBCASE("b = 2: unique kink at one half, value 1") {
    GroundProfileReport report = cw_ground_profile(2.0);
    CHECK(report.kind == GroundProfileKind::unique_kink);
    CHECK(report.optimal_value == doctest::Approx(1.0));
    CHECK(report.profiles.size() == 1);
    CHECK(report.profiles.front().breakpoints()[1] == doctest::Approx(0.5));
  }
  SUBCASE("b = 1: continuum, value 1/2 independent of the magnetization") {
    GroundProfileReport report = cw_ground_profile(1.0);
    CHECK(report.kind == GroundProfileKind::continuum_of_kinks);
    CHECK(report.optimal_value == doctest::Approx(0.5));
    CHECK(report.profiles.size() == report.optimal_magnetizations.size());
  }
  SUBCASE("ground energy density matches the analytic optimum at b = 2") {
    // -H_N/N at the best finite-N kink approaches the analytic value
    GroundReport finite = ground_states_exhaustive(cw_interaction(2.0), 12);
    double density = -finite.energy / 12.0;
    CHECK(density == doctest::Approx(1.0).epsilon(0.15));
  }
}
