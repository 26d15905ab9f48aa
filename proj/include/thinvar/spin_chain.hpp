#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "thinvar/alphabet.hpp"
#include "thinvar/errors.hpp"
#include "thinvar/joint_measure.hpp"
#include "thinvar/profile.hpp"
#include "thinvar/thinning.hpp"

namespace thinvar {

/// Oriented n-body interaction: a dense table over X^n where coordinate
/// order matters.
class Interaction {
 public:
  Interaction(Alphabet alphabet, std::size_t arity, std::vector<double> table)
      : alphabet_(std::move(alphabet)), arity_(arity), table_(std::move(table)) {
    if (arity_ == 0) throw input_error("interaction arity must be positive");
    std::size_t expect = checked_pow(alphabet_.size(), arity_);
    if (table_.size() != expect)
      throw input_error("interaction table has " + std::to_string(table_.size()) +
                        " entries, expected " + std::to_string(expect));
    for (double v : table_)
      if (!std::isfinite(v)) throw input_error("interaction table entry is not finite");
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t arity() const { return arity_; }
  const std::vector<double>& table() const { return table_; }

  double operator()(const std::vector<std::size_t>& config) const {
    std::size_t idx = 0;
    for (std::size_t c : config) idx = idx * alphabet_.size() + c;
    return table_[idx];
  }

 private:
  Alphabet alphabet_;
  std::size_t arity_;
  std::vector<double> table_;
};

/// Inhomogeneous-field pair interaction on spins:
///   -phi_2(s1, s2) = s1 s2 / 2 + (b/2) (s2 - s1).
/// The field strength is normalized so that the subset-average Hamiltonian
/// below rewrites exactly as
///   -H_N = (N-1)^{-1} sum_{j<k} s_j s_k + b sum_j ((2j-N-1)/(N-1)) s_j,
/// putting the ground-state transition at b = 1: two constant profiles below,
/// a unique centered kink above, and a continuum of kinks at b = 1.
inline Interaction cw_interaction(double b) {
  Alphabet alphabet = Alphabet::spin();
  std::vector<double> table(4);
  for (std::size_t i1 = 0; i1 < 2; ++i1)
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      double s1 = 2.0 * static_cast<double>(i1) - 1.0;
      double s2 = 2.0 * static_cast<double>(i2) - 1.0;
      table[i1 * 2 + i2] = -(0.5 * s1 * s2 + 0.5 * b * (s2 - s1));
    }
  return Interaction(std::move(alphabet), 2, std::move(table));
}

namespace detail {

template <typename Visit>
void for_each_subset(std::size_t N, std::size_t k, std::vector<std::size_t>& subset,
                     std::size_t next, std::size_t depth, Visit&& visit) {
  if (depth == k) {
    visit(subset);
    return;
  }
  for (std::size_t i = next; i + (k - depth) <= N; ++i) {
    subset[depth] = i;
    for_each_subset(N, k, subset, i + 1, depth + 1, visit);
  }
}

}  // namespace detail

/// H_N(sigma) = N C(N,n)^{-1} sum over ordered n-subsets of phi_n(sigma|X).
inline double hamiltonian(const Interaction& phi, const std::vector<std::size_t>& sigma) {
  std::size_t N = sigma.size();
  std::size_t n = phi.arity();
  if (N < n) throw precondition_error("system size below interaction arity");
  std::size_t m = phi.alphabet().size();
  double sum = 0.0;
  std::vector<std::size_t> subset(n);
  detail::for_each_subset(N, n, subset, 0, 0, [&](const std::vector<std::size_t>& X) {
    std::size_t idx = 0;
    for (std::size_t pos : X) idx = idx * m + sigma[pos];
    sum += phi.table()[idx];
  });
  return static_cast<double>(N) / binomial(N, n) * sum;
}

/// All Hamiltonian values over X^N, indexed like a JointMeasure.
inline std::vector<double> energy_table(const Interaction& phi, std::size_t N) {
  std::size_t m = phi.alphabet().size();
  std::size_t sz = checked_pow(m, N);
  std::vector<double> energies(sz);
  std::vector<std::size_t> sigma(N, 0);
  for (std::size_t idx = 0; idx < sz; ++idx) {
    energies[idx] = hamiltonian(phi, sigma);
    // increment mixed-radix counter, last coordinate fastest
    for (std::size_t k = N; k-- > 0;) {
      if (++sigma[k] < m) break;
      sigma[k] = 0;
    }
  }
  return energies;
}

struct GibbsSolution {
  std::size_t N;
  double beta;
  double log_partition;  // Omega_N(beta) = log Z_N(beta)
  JointMeasure measure;
};

/// Exact Gibbs state for beta H_N with the normalized (counting) reference
/// measure; log-sum-exp stabilized.
inline GibbsSolution gibbs(const Interaction& phi, std::size_t N, double beta) {
  if (beta < 0.0) throw precondition_error("inverse temperature must be nonnegative");
  std::vector<double> energies = energy_table(phi, N);
  double m_log = std::log(static_cast<double>(phi.alphabet().size()));
  double shift = -std::numeric_limits<double>::infinity();
  for (double e : energies) shift = std::max(shift, -beta * e);
  double z = 0.0;
  std::vector<double> weights(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    weights[i] = std::exp(-beta * energies[i] - shift);
    z += weights[i];
  }
  for (double& w : weights) w /= z;
  double omega = shift + std::log(z) - static_cast<double>(N) * m_log;
  return GibbsSolution{N, beta, omega,
                       JointMeasure(phi.alphabet(), N, std::move(weights))};
}

inline JointMeasure thinned_gibbs_marginal(const Interaction& phi, std::size_t N, double beta,
                                           std::size_t k) {
  return thin_to(gibbs(phi, N, beta).measure, k);
}

inline double expected_energy(const Interaction& phi, const JointMeasure& rho) {
  std::vector<double> energies = energy_table(phi, rho.n());
  double e = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) e += rho.weight(i) * energies[i];
  return e;
}

struct EnergyIdentity {
  double lhs;  // N^{-1} rho(H_N)
  double rhs;  // (thinned n-marginal)(phi_n)
  double gap;
};

/// N^{-1} rho_{N,beta}(H_N) = rho^{(N)}_n(phi_n): the per-site energy is the
/// interaction averaged over the thinned n-coordinate marginal. (Immediate
/// from H_N / N = C(N,n)^{-1} sum over subsets.)
inline EnergyIdentity energy_identity_check(const Interaction& phi, std::size_t N, double beta) {
  GibbsSolution g = gibbs(phi, N, beta);
  double lhs = expected_energy(phi, g.measure) / static_cast<double>(N);
  JointMeasure thinned = thin_to(g.measure, phi.arity());
  double rhs = 0.0;
  for (std::size_t i = 0; i < thinned.size(); ++i) rhs += thinned.weight(i) * phi.table()[i];
  return EnergyIdentity{lhs, rhs, std::abs(lhs - rhs)};
}

/// Entropy relative to the uniform distribution: sum g(d rho / d rho0) rho0
/// with g(x) = -x log x. Always <= 0, zero only at the uniform measure.
inline double relative_entropy(const JointMeasure& rho) {
  double log_ref = static_cast<double>(rho.n()) * std::log(static_cast<double>(rho.m()));
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double p = rho.weight(i);
    if (p > 0.0) s -= p * (std::log(p) + log_ref);
  }
  return s;
}

/// Omega_N(beta) - (S_N(rho) - beta rho(H_N)); nonnegative, zero iff rho is
/// the Gibbs state.
inline double variational_gap(const Interaction& phi, std::size_t N, double beta,
                              const JointMeasure& rho) {
  if (rho.n() != N || rho.alphabet() != phi.alphabet())
    throw precondition_error("trial measure shape does not match the system");
  GibbsSolution g = gibbs(phi, N, beta);
  return g.log_partition - (relative_entropy(rho) - beta * expected_energy(phi, rho));
}

struct SubadditivityEntry {
  std::size_t N1, N2;
  double gap;  // Omega_{N1+N2} - Omega_{N1} - Omega_{N2}
};

struct SubadditivityReport {
  std::vector<SubadditivityEntry> entries;
  double max_gap = -std::numeric_limits<double>::infinity();
  // Omega_N >= -beta rho0(H_N); the worst violation (positive means broken).
  double max_lower_bound_violation = -std::numeric_limits<double>::infinity();
};

inline std::vector<double> omega_sequence(const Interaction& phi, double beta,
                                          std::size_t N_max) {
  std::vector<double> omega(N_max + 1, 0.0);
  for (std::size_t N = phi.arity(); N <= N_max; ++N)
    omega[N] = gibbs(phi, N, beta).log_partition;
  return omega;
}

inline SubadditivityReport subadditivity_sweep(const Interaction& phi, double beta,
                                               std::size_t N_max) {
  std::size_t n = phi.arity();
  if (N_max < 2 * n) throw precondition_error("sweep needs N_max >= twice the arity");
  std::vector<double> omega = omega_sequence(phi, beta, N_max);
  SubadditivityReport report;
  for (std::size_t N1 = n; N1 <= N_max - n; ++N1)
    for (std::size_t N2 = N1; N1 + N2 <= N_max; ++N2) {
      double gap = omega[N1 + N2] - omega[N1] - omega[N2];
      report.entries.push_back({N1, N2, gap});
      report.max_gap = std::max(report.max_gap, gap);
    }
  for (std::size_t N = n; N <= N_max; ++N) {
    std::vector<double> energies = energy_table(phi, N);
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= static_cast<double>(energies.size());
    report.max_lower_bound_violation =
        std::max(report.max_lower_bound_violation, -beta * mean - omega[N]);
  }
  return report;
}

struct PressurePoint {
  std::size_t N;
  double omega;
  double omega_over_N;
};

inline std::vector<PressurePoint> pressure_sequence(const Interaction& phi, double beta,
                                                    std::size_t N_max) {
  std::vector<PressurePoint> out;
  for (std::size_t N = phi.arity(); N <= N_max; ++N) {
    double omega = gibbs(phi, N, beta).log_partition;
    out.push_back({N, omega, omega / static_cast<double>(N)});
  }
  return out;
}

struct GroundReport {
  double energy;
  std::vector<std::vector<std::size_t>> minimizers;
  std::size_t degeneracy;
};

inline GroundReport ground_states_exhaustive(const Interaction& phi, std::size_t N,
                                             double tie_tol = 1e-9) {
  std::vector<double> energies = energy_table(phi, N);
  double best = *std::min_element(energies.begin(), energies.end());
  GroundReport report;
  report.energy = best;
  JointMeasure indexer = JointMeasure::delta(phi.alphabet(), std::vector<std::size_t>(N, 0));
  for (std::size_t idx = 0; idx < energies.size(); ++idx)
    if (energies[idx] <= best + tie_tol) report.minimizers.push_back(indexer.decode(idx));
  report.degeneracy = report.minimizers.size();
  return report;
}

enum class GroundProfileKind { two_constant, unique_kink, continuum_of_kinks };

/// Analytic ground-state profiles of the inhomogeneous-field pair model.
/// The optimal energy functional value is b/2 + (1-b)/2 * mbar^2, maximized
/// over the mean magnetization mbar; the step-profile optimizer has its
/// interface at t0 = (1 - mbar)/2.
struct GroundProfileReport {
  GroundProfileKind kind;
  std::vector<double> optimal_magnetizations;  // representative set for the continuum case
  std::vector<PiecewiseProfile> profiles;
  double optimal_value;  // maximal -mu_2(phi_2)
};

inline GroundProfileReport cw_ground_profile(double b) {
  if (b < 0.0) throw precondition_error("field strength must be nonnegative");
  Alphabet spin = Alphabet::spin();
  GroundProfileReport report{GroundProfileKind::two_constant, {}, {}, 0.0};
  if (b < 1.0) {
    report.kind = GroundProfileKind::two_constant;
    report.optimal_magnetizations = {-1.0, 1.0};
    report.profiles.push_back(PiecewiseProfile::constant(spin, {1.0, 0.0}));
    report.profiles.push_back(PiecewiseProfile::constant(spin, {0.0, 1.0}));
    report.optimal_value = 0.5;
  } else if (b > 1.0) {
    report.kind = GroundProfileKind::unique_kink;
    report.optimal_magnetizations = {0.0};
    report.profiles.push_back(kink_profile(0.5, spin));
    report.optimal_value = 0.5 * b;
  } else {
    report.kind = GroundProfileKind::continuum_of_kinks;
    for (double mbar : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      report.optimal_magnetizations.push_back(mbar);
      double t0 = (1.0 - mbar) / 2.0;
      if (t0 > 0.0 && t0 < 1.0)
        report.profiles.push_back(kink_profile(t0, spin));
      else
        report.profiles.push_back(
            PiecewiseProfile::constant(spin, t0 <= 0.0 ? std::vector<double>{0.0, 1.0}
                                                       : std::vector<double>{1.0, 0.0}));
    }
    report.optimal_value = 0.5;
  }
  return report;
}

}  // namespace thinvar
