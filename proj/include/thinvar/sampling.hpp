#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "thinvar/errors.hpp"
#include "thinvar/profile.hpp"
#include "thinvar/quadrature.hpp"

namespace thinvar {

/// Counter-based 64-bit generator (splitmix64). Streams are derived per
/// (seed, sample index), so outputs are identical under any parallel
/// execution order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent stream for one sample of a run.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t sample_index) {
    SplitMix64 mixer(seed);
    mixer.next();
    SplitMix64 out(mixer.next() ^ (sample_index * 0x9e3779b97f4a7c15ULL));
    out.next();
    return out;
  }

 private:
  std::uint64_t state_;
};

/// n i.i.d. uniforms on (0,1), sorted ascending.
inline std::vector<double> sample_ordered_uniforms(std::size_t n, SplitMix64& rng) {
  if (n < 1) throw precondition_error("need at least one order statistic");
  std::vector<double> ts(n);
  for (double& t : ts) t = rng.uniform();
  std::stable_sort(ts.begin(), ts.end());
  return ts;
}

inline std::vector<double> sample_ordered_uniforms(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  return sample_ordered_uniforms(n, rng);
}

inline std::size_t sample_from(const std::vector<double>& dist, SplitMix64& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist[i];
    if (u < acc) return i;
  }
  return dist.size() - 1;
}

/// One row of the array: latent ordered times, then X_k ~ mu(., t_k).
inline std::vector<std::size_t> sample_config(const PiecewiseProfile& profile, std::size_t n,
                                              SplitMix64& rng) {
  std::vector<double> ts = sample_ordered_uniforms(n, rng);
  std::vector<std::size_t> config(n);
  for (std::size_t k = 0; k < n; ++k) config[k] = sample_from(profile.at(ts[k]), rng);
  return config;
}

/// Piecewise-constant vector-valued function on [0,1), right-open pieces.
struct StepFunction {
  std::vector<double> breakpoints;          // size P+1, starts at 0, ends at 1
  std::vector<std::vector<double>> values;  // one vector per piece

  const std::vector<double>& at(double t) const {
    for (std::size_t r = 0; r + 1 < values.size(); ++r)
      if (t < breakpoints[r + 1]) return values[r];
    return values.back();
  }
};

/// Empirical profile of one configuration: piece k of n carries the
/// partition-class indicator vector of X_k, a vertex of the simplex.
inline StepFunction empirical_profile(const std::vector<std::size_t>& config,
                                      const std::vector<std::size_t>& class_of_symbol,
                                      std::size_t num_classes) {
  std::size_t n = config.size();
  StepFunction out;
  out.breakpoints.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    out.breakpoints[k] = static_cast<double>(k) / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (config[k] >= class_of_symbol.size())
      throw input_error("symbol index outside the partition");
    std::vector<double> v(num_classes, 0.0);
    std::size_t cls = class_of_symbol[config[k]];
    if (cls >= num_classes) throw input_error("partition class out of range");
    v[cls] = 1.0;
    out.values.push_back(std::move(v));
  }
  return out;
}

struct BlockMeasure {
  std::vector<double> atoms;  // latent times t_k with (k/n) in the interval
  double mass;                // atom count / n
};

/// nu^(r) = n^{-1} sum_k 1[(k/n) in I_r] delta_{t_k}, per interval.
inline std::vector<BlockMeasure> empirical_block_measures(
    const std::vector<double>& ordered_times,
    const std::vector<std::pair<double, double>>& intervals) {
  std::size_t n = ordered_times.size();
  std::vector<BlockMeasure> out(intervals.size());
  for (std::size_t r = 0; r < intervals.size(); ++r) {
    for (std::size_t k = 1; k <= n; ++k) {
      double pos = static_cast<double>(k) / static_cast<double>(n);
      if (pos > intervals[r].first && pos < intervals[r].second)
        out[r].atoms.push_back(ordered_times[k - 1]);
    }
    out[r].mass = static_cast<double>(out[r].atoms.size()) / static_cast<double>(n);
  }
  return out;
}

struct LlnRow {
  std::size_t n;
  double estimate;
  double stderr_;
  double closed_form;
  double gap;  // |estimate - closed_form|
};

namespace detail {

inline double interval_overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

}  // namespace detail

/// Closed-form limit of the block-product statistic for a single-profile
/// family: prod_r int_{I_r} f_r^T mu(., t) dt.
inline double lln_closed_form(const PiecewiseProfile& profile,
                              const std::vector<std::pair<double, double>>& intervals,
                              const std::vector<std::vector<double>>& functions) {
  double prod = 1.0;
  for (std::size_t r = 0; r < intervals.size(); ++r) {
    double block = 0.0;
    for (std::size_t piece = 0; piece < profile.intervals(); ++piece) {
      double len = detail::interval_overlap(profile.breakpoints()[piece],
                                            profile.breakpoints()[piece + 1],
                                            intervals[r].first, intervals[r].second);
      double fmu = 0.0;
      for (std::size_t x = 0; x < functions[r].size(); ++x)
        fmu += functions[r][x] * profile.measure(piece)[x];
      block += len * fmu;
    }
    prod *= block;
  }
  return prod;
}

/// Monte Carlo check of the block-product law of large numbers. Standard
/// errors by batch means over 100 batches.
inline std::vector<LlnRow> lln_check(const PiecewiseProfile& profile,
                                     const std::vector<std::pair<double, double>>& intervals,
                                     const std::vector<std::vector<double>>& functions,
                                     const std::vector<std::size_t>& n_list,
                                     std::size_t samples, std::uint64_t seed) {
  if (intervals.size() != functions.size())
    throw precondition_error("need one test function per interval");
  for (const auto& iv : intervals)
    if (!(iv.first >= 0.0 && iv.second <= 1.0 && iv.first < iv.second))
      throw precondition_error("intervals must be nonempty subintervals of (0,1)");
  for (const auto& f : functions)
    if (f.size() != profile.alphabet().size())
      throw precondition_error("test function has wrong length");

  const std::size_t batches = 100;
  double target = lln_closed_form(profile, intervals, functions);
  std::vector<LlnRow> rows;
  for (std::size_t row_idx = 0; row_idx < n_list.size(); ++row_idx) {
    std::size_t n = n_list[row_idx];
    std::vector<double> batch_means(batches, 0.0);
    std::size_t per_batch = samples / batches;
    for (std::size_t b = 0; b < batches; ++b) {
      double acc = 0.0;
      for (std::size_t s = 0; s < per_batch; ++s) {
        std::uint64_t index = (row_idx << 40) | (b * per_batch + s);
        SplitMix64 rng = SplitMix64::stream(seed, index);
        std::vector<std::size_t> config = sample_config(profile, n, rng);
        double prod = 1.0;
        for (std::size_t r = 0; r < intervals.size(); ++r) {
          double block = 0.0;
          for (std::size_t k = 1; k <= n; ++k) {
            double pos = static_cast<double>(k) / static_cast<double>(n);
            if (pos > intervals[r].first && pos < intervals[r].second)
              block += functions[r][config[k - 1]];
          }
          prod *= block / static_cast<double>(n);
        }
        acc += prod;
      }
      batch_means[b] = acc / static_cast<double>(per_batch);
    }
    double mean = 0.0;
    for (double bm : batch_means) mean += bm;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double bm : batch_means) var += (bm - mean) * (bm - mean);
    var /= static_cast<double>(batches - 1);
    double se = std::sqrt(var / static_cast<double>(batches));
    rows.push_back({n, mean, se, target, std::abs(mean - target)});
  }
  return rows;
}

struct MomentRow {
  std::size_t j, k;     // coordinate pair; j == k for first moments
  double empirical;
  double stderr_;
  double exact;         // independent quadrature over the ordered simplex
  double z_score;
};

/// Exact E[t_j t_k] (j <= k) for n uniform order statistics, by quadrature
/// of the two-coordinate order-statistic density. Exact for the polynomial
/// integrand at the orders used here.
inline double order_stat_product_moment(std::size_t n, std::size_t j, std::size_t k) {
  if (j < 1 || k < j || k > n) throw precondition_error("moment indices out of range");
  if (j == k) {
    // E[t_k^2]: fourth argument of the single-coordinate Beta density
    auto f = [&](double t) { return t * t * beta_kernel(k, n, t); };
    return integrate(f, 0.0, 1.0, 48);
  }
  // density of (t_j, t_k): n! / ((j-1)!(k-j-1)!(n-k)!) s^(j-1)(t-s)^(k-j-1)(1-t)^(n-k)
  auto lf = [](std::size_t v) { return std::lgamma(static_cast<double>(v) + 1.0); };
  double ln_norm = lf(n) - lf(j - 1) - lf(k - j - 1) - lf(n - k);
  double norm = std::exp(ln_norm);
  auto outer = [&](double t) {
    auto inner = [&](double s) {
      return s * std::pow(s, static_cast<double>(j - 1)) *
             std::pow(t - s, static_cast<double>(k - j - 1));
    };
    return t * std::pow(1.0 - t, static_cast<double>(n - k)) * integrate(inner, 0.0, t, 48);
  };
  return norm * integrate(outer, 0.0, 1.0, 48);
}

/// First and second order-statistic moments against their exact values.
inline std::vector<MomentRow> moment_report(std::size_t n, std::size_t samples,
                                            std::uint64_t seed) {
  const std::size_t batches = 100;
  std::size_t per_batch = samples / batches;
  std::vector<std::vector<double>> first(batches, std::vector<double>(n, 0.0));
  std::vector<double> pair_batch(batches, 0.0);  // E[t_1 t_n] as the pair probe
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t s = 0; s < per_batch; ++s) {
      SplitMix64 rng = SplitMix64::stream(seed, b * per_batch + s);
      std::vector<double> ts = sample_ordered_uniforms(n, rng);
      for (std::size_t k = 0; k < n; ++k) first[b][k] += ts[k];
      pair_batch[b] += ts.front() * ts.back();
    }
    for (double& v : first[b]) v /= static_cast<double>(per_batch);
    pair_batch[b] /= static_cast<double>(per_batch);
  }

  auto summarize = [&](auto value_of_batch, double exact, std::size_t j, std::size_t k) {
    double mean = 0.0;
    for (std::size_t b = 0; b < batches; ++b) mean += value_of_batch(b);
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      double d = value_of_batch(b) - mean;
      var += d * d;
    }
    var /= static_cast<double>(batches - 1);
    double se = std::sqrt(var / static_cast<double>(batches));
    double z = se > 0.0 ? (mean - exact) / se : 0.0;
    return MomentRow{j, k, mean, se, exact, z};
  };

  std::vector<MomentRow> rows;
  for (std::size_t k = 1; k <= n; ++k) {
    double exact = static_cast<double>(k) / static_cast<double>(n + 1);
    rows.push_back(summarize([&](std::size_t b) { return first[b][k - 1]; }, exact, k, k));
  }
  if (n >= 2)
    rows.push_back(summarize([&](std::size_t b) { return pair_batch[b]; },
                             order_stat_product_moment(n, 1, n), 1, n));
  return rows;
}

}  // namespace thinvar
