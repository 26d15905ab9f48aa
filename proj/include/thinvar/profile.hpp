#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "thinvar/alphabet.hpp"
#include "thinvar/errors.hpp"
#include "thinvar/joint_measure.hpp"

namespace thinvar {

/// Piecewise-constant measure-valued function t -> mu(.,t) on [0,1]:
/// breakpoints 0 = s_0 < ... < s_R = 1 and one distribution per interval.
class PiecewiseProfile {
 public:
  PiecewiseProfile(Alphabet alphabet, std::vector<double> breakpoints,
                   std::vector<std::vector<double>> interval_measures)
      : alphabet_(std::move(alphabet)),
        breakpoints_(std::move(breakpoints)),
        measures_(std::move(interval_measures)) {
    if (breakpoints_.size() < 2 || breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
      throw input_error("breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
      if (!(breakpoints_[i] > breakpoints_[i - 1]))
        throw input_error("breakpoints must be strictly increasing");
    if (measures_.size() != breakpoints_.size() - 1)
      throw input_error("need exactly one distribution per interval, got " +
                        std::to_string(measures_.size()));
    for (const auto& nu : measures_) {
      if (nu.size() != alphabet_.size())
        throw input_error("interval distribution has wrong length");
      double total = 0.0;
      for (double w : nu) {
        if (w < 0.0) throw input_error("negative interval weight");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw input_error("interval distribution sums to " + std::to_string(total));
    }
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t intervals() const { return measures_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& measure(std::size_t r) const { return measures_[r]; }
  double length(std::size_t r) const { return breakpoints_[r + 1] - breakpoints_[r]; }

  /// Distribution in force at time t.
  const std::vector<double>& at(double t) const {
    for (std::size_t r = 0; r + 1 < measures_.size(); ++r)
      if (t < breakpoints_[r + 1]) return measures_[r];
    return measures_.back();
  }

  static PiecewiseProfile constant(Alphabet alphabet, std::vector<double> nu) {
    std::vector<std::vector<double>> ms{std::move(nu)};
    return PiecewiseProfile(std::move(alphabet), {0.0, 1.0}, std::move(ms));
  }

 private:
  Alphabet alphabet_;
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> measures_;
};

/// Profile -1 on (0,s), +1 on (s,1). Symbol 0 of the alphabet plays the
/// role of -1, symbol 1 of +1.
inline PiecewiseProfile kink_profile(double s, const Alphabet& alphabet = Alphabet::pm()) {
  if (!(s > 0.0 && s < 1.0))
    throw precondition_error("kink position must lie strictly inside (0,1)");
  if (alphabet.size() != 2) throw precondition_error("kink profile needs a two-symbol alphabet");
  return PiecewiseProfile(alphabet, {0.0, s, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
}

/// Length-weighted average sum_r l_r nu_r.
inline std::vector<double> profile_mean(const PiecewiseProfile& profile) {
  std::vector<double> mean(profile.alphabet().size(), 0.0);
  for (std::size_t r = 0; r < profile.intervals(); ++r)
    for (std::size_t x = 0; x < mean.size(); ++x)
      mean[x] += profile.length(r) * profile.measure(r)[x];
  return mean;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  double b = 1.0;
  for (std::size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / i;
  return b;
}

/// Beta-kernel: density of the k-th of n uniform order statistics,
/// t^(k-1) (1-t)^(n-k) / B(k, n-k+1) with B(k, n-k+1) = 1 / (k C(n,k)).
inline double beta_kernel(std::size_t k, std::size_t n, double t) {
  if (k < 1 || k > n) throw precondition_error("beta kernel needs 1 <= k <= n");
  if (t < 0.0 || t > 1.0) throw precondition_error("beta kernel argument outside [0,1]");
  double norm = static_cast<double>(k) * binomial(n, k);
  return norm * std::pow(t, static_cast<double>(k - 1)) *
         std::pow(1.0 - t, static_cast<double>(n - k));
}

/// Regularized incomplete Beta I_x(k, n-k+1) for integer parameters,
/// via the exact binomial tail sum.
inline double incomplete_beta_integer(std::size_t k, std::size_t n, double x) {
  double s = 0.0;
  for (std::size_t j = k; j <= n; ++j)
    s += binomial(n, j) * std::pow(x, static_cast<double>(j)) *
         std::pow(1.0 - x, static_cast<double>(n - j));
  return s;
}

/// Probability that the k-th of n retained coordinates came from original
/// position K out of N: C(K-1,k-1) C(N-K,n-k) / C(N,n).
inline double subset_weight(std::size_t N, std::size_t K, std::size_t n, std::size_t k) {
  if (k < 1 || n < k || N < n || K < 1 || K > N)
    throw precondition_error("subset weight needs 1 <= k <= n <= N and 1 <= K <= N");
  return binomial(K - 1, k - 1) * binomial(N - K, n - k) / binomial(N, n);
}

/// Law of the k-th coordinate of the n-row array built from the profile:
/// sum_r nu_r * integral of the Beta-kernel over interval r.
inline std::vector<double> coordinate_marginal(const PiecewiseProfile& profile, std::size_t n,
                                               std::size_t k) {
  if (k < 1 || k > n) throw precondition_error("coordinate index out of range");
  std::vector<double> out(profile.alphabet().size(), 0.0);
  for (std::size_t r = 0; r < profile.intervals(); ++r) {
    double mass = incomplete_beta_integer(k, n, profile.breakpoints()[r + 1]) -
                  incomplete_beta_integer(k, n, profile.breakpoints()[r]);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += mass * profile.measure(r)[x];
  }
  return out;
}

namespace detail {

template <typename Visit>
void for_each_composition(std::size_t n, std::size_t parts, std::vector<std::size_t>& counts,
                          std::size_t pos, Visit&& visit) {
  if (pos + 1 == parts) {
    counts[pos] = n;
    visit(counts);
    return;
  }
  for (std::size_t c = 0; c <= n; ++c) {
    counts[pos] = c;
    for_each_composition(n - c, parts, counts, pos + 1, visit);
  }
}

}  // namespace detail

/// Exact row measure of the array built from the profile. Conditional on the
/// interval occupation counts (k_1,...,k_R) of the ordered latent times, the
/// coordinates fill intervals left to right and are i.i.d. within each:
///   mu_n = sum over compositions  [n!/(k_1!...k_R!)] prod_r l_r^{k_r}
///          times nu_1^(k_1) x ... x nu_R^(k_R)  (ordered blocks).
/// Compositions are enumerated in lexicographic order of (k_1,...,k_R).
inline JointMeasure build_joint(const PiecewiseProfile& profile, std::size_t n) {
  std::size_t m = profile.alphabet().size();
  std::size_t sz = checked_pow(m, n);
  std::size_t R = profile.intervals();
  std::vector<double> out(sz, 0.0);

  std::vector<std::size_t> counts(R, 0);
  std::vector<std::size_t> block_of(n);
  detail::for_each_composition(n, R, counts, 0, [&](const std::vector<std::size_t>& ks) {
    double w = 1.0;
    {  // multinomial coefficient times interval length powers
      std::size_t assigned = 0;
      for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t i = 1; i <= ks[r]; ++i) {
          ++assigned;
          w *= static_cast<double>(assigned) / static_cast<double>(i);
        }
        w *= std::pow(profile.length(r), static_cast<double>(ks[r]));
      }
    }
    if (w == 0.0) return;
    std::size_t pos = 0;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t i = 0; i < ks[r]; ++i) block_of[pos++] = r;
    for (std::size_t idx = 0; idx < sz; ++idx) {
      double p = w;
      std::size_t rest = idx;
      for (std::size_t c = n; c-- > 0;) {
        p *= profile.measure(block_of[c])[rest % m];
        rest /= m;
      }
      out[idx] += p;
    }
  });

  // remove accumulated rounding in the total mass
  double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& w : out) w /= total;
  return JointMeasure(profile.alphabet(), n, std::move(out));
}

}  // namespace thinvar
