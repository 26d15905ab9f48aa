#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "thinvar/alphabet.hpp"
#include "thinvar/errors.hpp"
#include "thinvar/joint_measure.hpp"
#include "thinvar/quadrature.hpp"
#include "thinvar/thinning.hpp"

namespace thinvar {

/// Mean-field exclusion on sites 1..N: a particle at x jumps to an empty y
/// at rate q/(N-1) if x < y and (1-q)/(N-1) if y < x. Only 1/2 < q <= 1 is
/// admitted; the symmetric point q = 1/2 has the classical flat profile and
/// is rejected here.
struct AsepModel {
  std::size_t N;
  double q;

  AsepModel(std::size_t sites, double bias) : N(sites), q(bias) {
    if (N < 2) throw precondition_error("exclusion model needs at least two sites");
    if (!(q > 0.5 && q <= 1.0))
      throw precondition_error("bias q must lie in (1/2, 1]; got " + std::to_string(q));
  }

  double rate(std::size_t x, std::size_t y) const {
    return (x < y ? q : 1.0 - q) / static_cast<double>(N - 1);
  }
};

/// Fixed-particle-number sector of {0,1}^N. Site x corresponds to bit x-1.
class Sector {
 public:
  Sector(std::size_t N, std::size_t n) : N_(N), n_(n) {
    if (n > N) throw precondition_error("particle count exceeds site count");
    if (N > 30) throw precondition_error("sector enumeration capped at 30 sites");
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask)
      if (static_cast<std::size_t>(__builtin_popcount(mask)) == n) {
        rank_.emplace(mask, configs_.size());
        configs_.push_back(mask);
      }
  }

  std::size_t N() const { return N_; }
  std::size_t particles() const { return n_; }
  std::size_t size() const { return configs_.size(); }
  std::uint32_t config(std::size_t i) const { return configs_[i]; }
  std::size_t rank(std::uint32_t mask) const { return rank_.at(mask); }

 private:
  std::size_t N_, n_;
  std::vector<std::uint32_t> configs_;
  std::unordered_map<std::uint32_t, std::size_t> rank_;
};

/// Applies the exclusion generator to a function on the sector:
///   (Omega f)(eta) = sum over occupied x, empty y of (f(eta_xy) - f(eta)) p(x,y).
inline std::vector<double> generator_apply(const AsepModel& model, const Sector& sector,
                                           const std::vector<double>& f) {
  if (f.size() != sector.size())
    throw precondition_error("function vector does not match sector dimension");
  std::vector<double> out(sector.size(), 0.0);
  for (std::size_t i = 0; i < sector.size(); ++i) {
    std::uint32_t eta = sector.config(i);
    double acc = 0.0;
    for (std::size_t x = 1; x <= model.N; ++x) {
      if (!(eta >> (x - 1) & 1u)) continue;
      for (std::size_t y = 1; y <= model.N; ++y) {
        if (eta >> (y - 1) & 1u) continue;
        std::uint32_t swapped = eta ^ (1u << (x - 1)) ^ (1u << (y - 1));
        acc += (f[sector.rank(swapped)] - f[i]) * model.rate(x, y);
      }
    }
    out[i] = acc;
  }
  return out;
}

/// Dense generator matrix L with L(i,j) the rate i -> j and zero row sums.
inline Eigen::MatrixXd generator_matrix(const AsepModel& model, const Sector& sector) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(sector.size(), sector.size());
  for (std::size_t i = 0; i < sector.size(); ++i) {
    std::uint32_t eta = sector.config(i);
    for (std::size_t x = 1; x <= model.N; ++x) {
      if (!(eta >> (x - 1) & 1u)) continue;
      for (std::size_t y = 1; y <= model.N; ++y) {
        if (eta >> (y - 1) & 1u) continue;
        std::uint32_t swapped = eta ^ (1u << (x - 1)) ^ (1u << (y - 1));
        double r = model.rate(x, y);
        L(i, sector.rank(swapped)) += r;
        L(i, i) -= r;
      }
    }
  }
  return L;
}

struct SectorMeasure {
  std::size_t N;
  std::size_t particles;
  std::vector<std::uint32_t> configs;
  std::vector<double> weights;
  double residual_inf;  // max |mu^T L| over coordinates
};

/// Stationary distribution of the sector: strictly positive left null vector
/// of the generator. Dense LU with a normalization row for small sectors,
/// power iteration on I + eps L^T above 20000 states.
inline SectorMeasure stationary_measure(const AsepModel& model, std::size_t n,
                                        double tol = 1e-12) {
  Sector sector(model.N, n);
  std::size_t D = sector.size();
  SectorMeasure out;
  out.N = model.N;
  out.particles = n;
  for (std::size_t i = 0; i < D; ++i) out.configs.push_back(sector.config(i));

  if (D == 1) {  // frozen sector
    out.weights = {1.0};
    out.residual_inf = 0.0;
    return out;
  }

  Eigen::MatrixXd L = generator_matrix(model, sector);
  Eigen::VectorXd mu;
  if (D <= 20000) {
    Eigen::MatrixXd A = L.transpose();
    A.row(D - 1).setOnes();  // replace one redundant equation with normalization
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(D);
    rhs(D - 1) = 1.0;
    mu = A.partialPivLu().solve(rhs);
  } else {
    double max_diag = L.diagonal().cwiseAbs().maxCoeff();
    double eps = 0.5 / max_diag;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(D, D) + eps * L.transpose();
    mu = Eigen::VectorXd::Constant(D, 1.0 / static_cast<double>(D));
    bool converged = false;
    for (std::size_t iter = 0; iter < 1000000; ++iter) {
      Eigen::VectorXd next = P * mu;
      next /= next.sum();
      double delta = (next - mu).cwiseAbs().maxCoeff();
      mu = next;
      if (delta < tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw solver_error("power iteration did not converge on sector N=" +
                         std::to_string(model.N) + " n=" + std::to_string(n));
  }

  double residual = (L.transpose() * mu).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw solver_error("stationary solve residual " + std::to_string(residual) +
                       " exceeds 1e-10 on sector N=" + std::to_string(model.N) +
                       " n=" + std::to_string(n));
  mu /= mu.sum();
  out.weights.assign(mu.data(), mu.data() + D);
  out.residual_inf = residual;
  return out;
}

/// E[eta_x] for x = 1..N; sums to the particle number.
inline std::vector<double> site_density(const SectorMeasure& sm) {
  std::vector<double> density(sm.N, 0.0);
  for (std::size_t i = 0; i < sm.configs.size(); ++i)
    for (std::size_t x = 0; x < sm.N; ++x)
      if (sm.configs[i] >> x & 1u) density[x] += sm.weights[i];
  return density;
}

/// Re-expresses a sector measure on the dense {0,1}^N cube. Site 1 is the
/// first (most significant) coordinate of the joint encoding.
inline JointMeasure to_joint(const SectorMeasure& sm) {
  std::size_t sz = checked_pow(2, sm.N);
  std::vector<double> weights(sz, 0.0);
  for (std::size_t i = 0; i < sm.configs.size(); ++i) {
    std::uint32_t mask = sm.configs[i];
    std::size_t idx = 0;
    for (std::size_t x = 1; x <= sm.N; ++x) idx = idx * 2 + (mask >> (x - 1) & 1u);
    weights[idx] += sm.weights[i];
  }
  return JointMeasure(Alphabet::binary(), sm.N, std::move(weights));
}

/// Thinned k-site marginal of a sector measure (uniform random site subset).
inline JointMeasure thinned_marginal(const SectorMeasure& sm, std::size_t k) {
  return thin_to(to_joint(sm), k);
}

/// Closed-form antiderivative of the limiting density profile:
///   2u(t) = -(a - t) + sqrt((a - t)^2 + rho (rho + (2t - 2q)/(2q - 1))),
/// a = q/(2q-1). Boundary values are u(0) = -rho/2, u(1) = rho/2.
inline double closed_form_u(double t, double q, double rho) {
  if (t < 0.0 || t > 1.0) throw precondition_error("profile argument outside [0,1]");
  if (!(q > 0.5 && q <= 1.0)) throw precondition_error("bias q must lie in (1/2, 1]");
  if (rho < 0.0 || rho > 1.0) throw precondition_error("density outside [0,1]");
  double a = q / (2.0 * q - 1.0);
  double disc = (a - t) * (a - t) + rho * (rho + (2.0 * t - 2.0 * q) / (2.0 * q - 1.0));
  if (disc < 0.0) {
    if (disc < -1e-14)
      throw precondition_error("negative discriminant in profile solution: invalid parameters");
    disc = 0.0;
  }
  return 0.5 * (-(a - t) + std::sqrt(disc));
}

/// Limiting particle density:
///   2 phi(t) = (rho/2 + (2q-1) u(t)) / ((1/2)[(1-q)t + q(1-t)] + (2q-1) u(t)).
inline double closed_form_phi(double t, double q, double rho) {
  double u = closed_form_u(t, q, rho);
  double num = 0.5 * rho + (2.0 * q - 1.0) * u;
  double den = 0.5 * ((1.0 - q) * t + q * (1.0 - t)) + (2.0 * q - 1.0) * u;
  if (std::abs(den) < 1e-300)
    throw solver_error("vanishing denominator in density profile");
  return 0.5 * num / den;
}

/// Residual of the stationarity integral equation at the closed-form profile:
///   0 = int_0^t ((1-q) phi(t)[1-phi(s)] - q phi(s)[1-phi(t)]) ds
///     + int_t^1 (q phi(t)[1-phi(s)] - (1-q) phi(s)[1-phi(t)]) ds.
inline double integral_equation_residual(double q, double rho, double t,
                                         std::size_t quadrature_order = 32) {
  if (quadrature_order < 16) throw precondition_error("quadrature order must be >= 16");
  double pt = closed_form_phi(t, q, rho);
  auto left = [&](double s) {
    double ps = closed_form_phi(s, q, rho);
    return (1.0 - q) * pt * (1.0 - ps) - q * ps * (1.0 - pt);
  };
  auto right = [&](double s) {
    double ps = closed_form_phi(s, q, rho);
    return q * pt * (1.0 - ps) - (1.0 - q) * ps * (1.0 - pt);
  };
  return integrate(left, 0.0, t, quadrature_order) + integrate(right, t, 1.0, quadrature_order);
}

struct ProfileComparison {
  std::size_t N;
  std::size_t particles;
  std::vector<double> empirical;    // site densities
  std::vector<double> closed_form;  // phi at cell midpoints (x - 1/2)/N
  double l1_error;                  // N^{-1} sum |empirical - closed_form|
};

/// Finite-N stationary site densities against the limiting profile, with
/// round(rho N) particles per system.
inline std::vector<ProfileComparison> finite_n_profile_comparison(
    double q, double rho, const std::vector<std::size_t>& N_list) {
  std::vector<ProfileComparison> out;
  for (std::size_t N : N_list) {
    AsepModel model(N, q);
    std::size_t n = static_cast<std::size_t>(std::lround(rho * static_cast<double>(N)));
    SectorMeasure sm = stationary_measure(model, n);
    ProfileComparison cmp;
    cmp.N = N;
    cmp.particles = n;
    cmp.empirical = site_density(sm);
    double err = 0.0;
    for (std::size_t x = 1; x <= N; ++x) {
      double phi = closed_form_phi((static_cast<double>(x) - 0.5) / static_cast<double>(N), q,
                                   rho);
      cmp.closed_form.push_back(phi);
      err += std::abs(cmp.empirical[x - 1] - phi);
    }
    cmp.l1_error = err / static_cast<double>(N);
    out.push_back(std::move(cmp));
  }
  return out;
}

}  // namespace thinvar
