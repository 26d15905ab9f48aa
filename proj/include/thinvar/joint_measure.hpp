#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "thinvar/alphabet.hpp"
#include "thinvar/errors.hpp"

namespace thinvar {

/// Largest dense weight vector we will allocate. Overridable through the
/// THINVAR_MAX_DENSE environment variable.
inline std::size_t dense_cap() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("THINVAR_MAX_DENSE")) {
      long long v = std::atoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(1) << 24;
  }();
  return cap;
}

inline std::size_t checked_pow(std::size_t m, std::size_t n) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (p > dense_cap() / m)
      throw precondition_error("state space size " + std::to_string(m) + "^" +
                               std::to_string(n) + " exceeds dense cap " +
                               std::to_string(dense_cap()));
    p *= m;
  }
  return p;
}

/// Probability measure on X^n, stored densely. Configuration (x_1,...,x_n)
/// maps to sum_k index(x_k) * m^(n-k), first coordinate most significant.
class JointMeasure {
 public:
  JointMeasure(Alphabet alphabet, std::size_t n, std::vector<double> weights)
      : alphabet_(std::move(alphabet)), n_(n), weights_(std::move(weights)) {
    if (n_ == 0) throw precondition_error("joint measure needs at least one coordinate");
    std::size_t expect = checked_pow(alphabet_.size(), n_);
    if (weights_.size() != expect)
      throw input_error("weight vector has length " + std::to_string(weights_.size()) +
                        ", expected " + std::to_string(expect));
    double total = 0.0;
    for (double w : weights_) {
      if (w < 0.0) throw input_error("negative weight in joint measure");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw input_error("joint measure weights sum to " + std::to_string(total) +
                        ", expected 1");
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return alphabet_.size(); }
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t idx) const { return weights_[idx]; }

  std::size_t encode(const std::vector<std::size_t>& config) const {
    std::size_t idx = 0;
    for (std::size_t c : config) idx = idx * m() + c;
    return idx;
  }

  std::vector<std::size_t> decode(std::size_t idx) const {
    std::vector<std::size_t> config(n_);
    for (std::size_t k = n_; k-- > 0;) {
      config[k] = idx % m();
      idx /= m();
    }
    return config;
  }

  /// Point mass at the given configuration (symbol indices).
  static JointMeasure delta(const Alphabet& alphabet, const std::vector<std::size_t>& config) {
    std::size_t n = config.size();
    std::vector<double> w(checked_pow(alphabet.size(), n), 0.0);
    std::size_t idx = 0;
    for (std::size_t c : config) idx = idx * alphabet.size() + c;
    w[idx] = 1.0;
    return JointMeasure(alphabet, n, std::move(w));
  }

  /// n-fold i.i.d. product of a single-site distribution.
  static JointMeasure product(const Alphabet& alphabet, const std::vector<double>& nu,
                              std::size_t n) {
    if (nu.size() != alphabet.size()) throw input_error("site distribution has wrong length");
    std::size_t m = alphabet.size();
    std::size_t sz = checked_pow(m, n);
    std::vector<double> w(sz);
    for (std::size_t idx = 0; idx < sz; ++idx) {
      double p = 1.0;
      std::size_t rest = idx;
      for (std::size_t k = 0; k < n; ++k) {
        p *= nu[rest % m];
        rest /= m;
      }
      w[idx] = p;
    }
    // normalize away rounding in the input distribution
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return JointMeasure(alphabet, n, std::move(w));
  }

 private:
  Alphabet alphabet_;
  std::size_t n_;
  std::vector<double> weights_;
};

/// Law of the k-th coordinate, k in 1..n.
inline std::vector<double> marginal(const JointMeasure& mu, std::size_t k) {
  if (k < 1 || k > mu.n())
    throw precondition_error("coordinate index " + std::to_string(k) + " out of range 1.." +
                             std::to_string(mu.n()));
  std::size_t m = mu.m();
  std::size_t lower = 1;  // m^(n-k), block size of the k-th digit
  for (std::size_t i = 0; i < mu.n() - k; ++i) lower *= m;
  std::vector<double> out(m, 0.0);
  for (std::size_t idx = 0; idx < mu.size(); ++idx) out[(idx / lower) % m] += mu.weight(idx);
  return out;
}

inline double tv_distance(const JointMeasure& mu, const JointMeasure& nu) {
  if (mu.alphabet() != nu.alphabet() || mu.n() != nu.n())
    throw precondition_error("total-variation distance requires identical shapes");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += std::abs(mu.weight(i) - nu.weight(i));
  return 0.5 * s;
}

}  // namespace thinvar
