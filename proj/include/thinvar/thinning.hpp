#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "thinvar/joint_measure.hpp"

namespace thinvar {

/// Average over the n+1 order-preserving deletions of one coordinate,
/// marginalizing the deleted one.
inline JointMeasure thin_once(const JointMeasure& mu) {
  if (mu.n() < 2) throw precondition_error("cannot thin below one coordinate");
  std::size_t m = mu.m();
  std::size_t n = mu.n() - 1;  // output coordinates
  std::size_t out_size = 1;
  for (std::size_t i = 0; i < n; ++i) out_size *= m;
  std::vector<double> out(out_size, 0.0);

  // Deleting position j (0-based) splits an input index into a prefix of j
  // digits, the deleted digit, and a suffix of n-j digits.
  for (std::size_t j = 0; j <= n; ++j) {
    std::size_t suffix = 1;
    for (std::size_t i = 0; i < n - j; ++i) suffix *= m;
    for (std::size_t idx = 0; idx < mu.size(); ++idx) {
      std::size_t lo = idx % suffix;
      std::size_t hi = idx / (suffix * m);
      out[hi * suffix + lo] += mu.weight(idx);
    }
  }
  double inv = 1.0 / static_cast<double>(n + 1);
  for (double& w : out) w *= inv;
  return JointMeasure(mu.alphabet(), n, std::move(out));
}

/// Thinning transition to k coordinates, as the (n-k)-fold composition of
/// single-coordinate deletions. Agrees with the direct average over all
/// order-preserving k-subsets by the semigroup identity.
inline JointMeasure thin_to(const JointMeasure& mu, std::size_t k) {
  if (k < 1 || k > mu.n())
    throw precondition_error("thinning target " + std::to_string(k) + " out of range 1.." +
                             std::to_string(mu.n()));
  JointMeasure out = mu;
  while (out.n() > k) out = thin_once(out);
  return out;
}

namespace detail {

inline double ln_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Number of distinct rearrangements of the digit multiset of a configuration.
inline double permutation_count(const std::vector<std::size_t>& config, std::size_t m) {
  std::vector<std::size_t> counts(m, 0);
  for (std::size_t c : config) ++counts[c];
  double ln = ln_factorial(config.size());
  for (std::size_t c : counts) ln -= ln_factorial(c);
  return std::round(std::exp(ln));
}

}  // namespace detail

/// Average over the uniform permutation of coordinates. Computed per orbit:
/// every configuration with the same digit multiset receives the orbit mass
/// divided by the orbit size.
inline JointMeasure symmetrize(const JointMeasure& mu) {
  std::size_t m = mu.m();
  // orbit key = index of the sorted configuration
  std::vector<double> orbit_mass(mu.size(), 0.0);
  std::vector<std::size_t> key(mu.size());
  for (std::size_t idx = 0; idx < mu.size(); ++idx) {
    std::vector<std::size_t> config = mu.decode(idx);
    std::sort(config.begin(), config.end());
    std::size_t k = 0;
    for (std::size_t c : config) k = k * m + c;
    key[idx] = k;
    orbit_mass[k] += mu.weight(idx);
  }
  std::vector<double> out(mu.size());
  for (std::size_t idx = 0; idx < mu.size(); ++idx)
    out[idx] = orbit_mass[key[idx]] / detail::permutation_count(mu.decode(idx), m);
  return JointMeasure(mu.alphabet(), mu.n(), std::move(out));
}

/// Exchangeable transition: thin, then shuffle uniformly.
inline JointMeasure exchange_thin(const JointMeasure& mu, std::size_t k) {
  return symmetrize(thin_to(mu, k));
}

struct InvarianceReport {
  double max_tv_error = 0.0;
  std::vector<std::pair<std::size_t, double>> per_level_errors;  // (k, max tv over n > k)
  bool pass = false;
};

/// Checks mu_k = T^n_k mu_n over all 1 <= k < n <= K for a family indexed so
/// that family[i] has i+1 coordinates.
inline InvarianceReport check_thinning_invariance(const std::vector<JointMeasure>& family,
                                                  double tol) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i].n() != i + 1)
      throw input_error("family entry " + std::to_string(i) + " has " +
                        std::to_string(family[i].n()) + " coordinates, expected " +
                        std::to_string(i + 1));
    if (family[i].alphabet() != family[0].alphabet())
      throw input_error("family mixes alphabets");
  }
  InvarianceReport report;
  for (std::size_t k = 1; k < family.size(); ++k) {
    double worst = 0.0;
    for (std::size_t n = k + 1; n <= family.size(); ++n)
      worst = std::max(worst, tv_distance(thin_to(family[n - 1], k), family[k - 1]));
    report.per_level_errors.emplace_back(k, worst);
    report.max_tv_error = std::max(report.max_tv_error, worst);
  }
  report.pass = report.max_tv_error <= tol;
  return report;
}

}  // namespace thinvar
