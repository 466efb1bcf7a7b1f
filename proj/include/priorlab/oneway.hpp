// Copyright 2026 The priorlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// One-way normal layout with known unit variance. Model 1 puts independent
// N(0, tau^2) priors on the k group means; Model 2 pins all means at zero.
// The Bayes factor F = f2/f1 is oriented in favor of the null submodel and
// depends on the data only through the group sums T_i. Everything here is
// log-space; F itself overflows doubles long before k reaches 200.

#ifndef PRIORLAB_ONEWAY_HPP_
#define PRIORLAB_ONEWAY_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "priorlab/numerics.hpp"

namespace priorlab::oneway {

using numerics::RngStream;

struct OneWayConfig {
  std::vector<int> group_sizes;    // n_1..n_k, all >= 1
  double tau2 = 1.0;               // prior variance of each mean, >= 0
  double prior_model1 = 0.5;       // pi_1
  double prior_model2 = 0.5;       // pi_2

  int k() const { return static_cast<int>(group_sizes.size()); }

  int total_obs() const {
    int n = 0;
    for (int ni : group_sizes) n += ni;
    return n;
  }

  bool balanced() const {
    for (int ni : group_sizes) {
      if (ni != group_sizes.front()) return false;
    }
    return true;
  }

  void validate() const {
    if (group_sizes.empty()) throw std::domain_error("OneWayConfig: need k >= 1 groups");
    for (int ni : group_sizes) {
      if (ni < 1) throw std::domain_error("OneWayConfig: every group size must be >= 1");
    }
    if (!(tau2 >= 0.0)) throw std::domain_error("OneWayConfig: tau2 must be >= 0");
    if (!(prior_model1 >= 0.0) || !(prior_model2 >= 0.0) ||
        std::fabs(prior_model1 + prior_model2 - 1.0) > 1e-12) {
      throw std::domain_error("OneWayConfig: model priors must be in [0,1] and sum to 1");
    }
  }
};

inline OneWayConfig balanced_config(int k, int n, double tau2) {
  OneWayConfig cfg;
  cfg.group_sizes.assign(static_cast<std::size_t>(k), n);
  cfg.tau2 = tau2;
  return cfg;
}

/// True group means fixed at a given vector.
struct FixedEffects {
  std::vector<double> mu;
};

/// True group means drawn iid N(0, epsilon^2), fresh per dataset.
struct IidNormalEffects {
  double epsilon2 = 0.0;
};

using EffectSpec = std::variant<FixedEffects, IidNormalEffects>;

/// Sufficient statistics: group sums T_i, plus the total sum of squares
/// (needed only for marginal density evaluation, not for log F).
struct OneWaySufficient {
  std::vector<double> group_sums;
  double sum_sq = 0.0;
};

/// Balanced-design large-k quantities: a = n*tau^2 and sigma^2 = n^2 eps^2 + n,
/// the variance of each T_i when the means are iid N(0, eps^2).
struct BalancedAsymptotics {
  int n = 1;
  double a = 0.0;
  double sigma2 = 1.0;
};

inline BalancedAsymptotics balanced_asymptotics(int n, double tau2, double epsilon2) {
  if (n < 1) throw std::domain_error("balanced_asymptotics: n must be >= 1");
  if (!(tau2 >= 0.0) || !(epsilon2 >= 0.0)) {
    throw std::domain_error("balanced_asymptotics: tau2 and epsilon2 must be >= 0");
  }
  BalancedAsymptotics asym;
  asym.n = n;
  asym.a = n * tau2;
  asym.sigma2 = static_cast<double>(n) * n * epsilon2 + n;
  return asym;
}

/// Realize the group means for one dataset. IidNormal draws k fresh values;
/// Fixed echoes the stored vector (length must match cfg).
inline std::vector<double> draw_means(RngStream& rng, const OneWayConfig& cfg,
                                      const EffectSpec& eff) {
  const int k = cfg.k();
  if (const auto* fixed = std::get_if<FixedEffects>(&eff)) {
    if (static_cast<int>(fixed->mu.size()) != k) {
      throw std::invalid_argument("draw_means: fixed mu length does not match group count");
    }
    return fixed->mu;
  }
  const auto& iid = std::get<IidNormalEffects>(eff);
  if (!(iid.epsilon2 >= 0.0)) throw std::domain_error("draw_means: epsilon2 must be >= 0");
  const double eps = std::sqrt(iid.epsilon2);
  std::vector<double> mu(static_cast<std::size_t>(k));
  for (auto& m : mu) m = rng.normal(0.0, eps);
  return mu;
}

/// Draw X_ij ~ N(mu_i, 1) and reduce to sufficient statistics.
inline OneWaySufficient simulate_dataset(RngStream& rng, const OneWayConfig& cfg,
                                         const EffectSpec& eff) {
  cfg.validate();
  const std::vector<double> mu = draw_means(rng, cfg, eff);
  OneWaySufficient data;
  data.group_sums.resize(cfg.group_sizes.size());
  for (std::size_t i = 0; i < cfg.group_sizes.size(); ++i) {
    double ti = 0.0;
    for (int j = 0; j < cfg.group_sizes[i]; ++j) {
      const double x = rng.normal(mu[i], 1.0);
      ti += x;
      data.sum_sq += x * x;
    }
    data.group_sums[i] = ti;
  }
  return data;
}

/// log F = -sum_i tau^2 T_i^2 / (2(1+n_i tau^2)) + (1/2) sum_i log(1+n_i tau^2).
/// Positive values favor the null submodel.
inline double log_bayes_factor(const OneWaySufficient& data, const OneWayConfig& cfg) {
  if (data.group_sums.size() != cfg.group_sizes.size()) {
    throw std::invalid_argument("log_bayes_factor: data/config group count mismatch");
  }
  double quad = 0.0;
  double logdet = 0.0;
  for (std::size_t i = 0; i < cfg.group_sizes.size(); ++i) {
    const double nt = cfg.group_sizes[i] * cfg.tau2;
    const double t = data.group_sums[i];
    quad += cfg.tau2 * t * t / (2.0 * (1.0 + nt));
    logdet += 0.5 * numerics::log1p_stable(nt);
  }
  return logdet - quad;
}

/// log of the iid standard normal joint density (Model 2).
inline double log_density_model2(const OneWaySufficient& data, const OneWayConfig& cfg) {
  const double n = cfg.total_obs();
  return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * data.sum_sq;
}

/// log f1, the Model-1 marginal density with the means integrated against
/// their N(0, tau^2) prior. Requires sum_sq.
inline double log_marginal_density_model1(const OneWaySufficient& data,
                                          const OneWayConfig& cfg) {
  if (data.group_sums.size() != cfg.group_sizes.size()) {
    throw std::invalid_argument("log_marginal_density_model1: group count mismatch");
  }
  double value = log_density_model2(data, cfg);
  for (std::size_t i = 0; i < cfg.group_sizes.size(); ++i) {
    const double nt = cfg.group_sizes[i] * cfg.tau2;
    const double t = data.group_sums[i];
    value += cfg.tau2 * t * t / (2.0 * (1.0 + nt)) - 0.5 * numerics::log1p_stable(nt);
  }
  return value;
}

/// P(Model 2 | data) = pi_2 F / (pi_1 + pi_2 F), evaluated stably in log space.
inline double posterior_prob_model2(double log_f, const OneWayConfig& cfg) {
  if (cfg.prior_model2 <= 0.0) return 0.0;
  if (cfg.prior_model1 <= 0.0) return 1.0;
  const double l = log_f + std::log(cfg.prior_model2) - std::log(cfg.prior_model1);
  if (l >= 0.0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

/// E[log F] for a balanced design and fixed means:
/// -tau^2 (nk + n^2 sum mu_i^2) / (2(1+n tau^2)) + (k/2) log(1+n tau^2).
inline double expected_log_bf(const OneWayConfig& cfg, const FixedEffects& eff) {
  cfg.validate();
  if (!cfg.balanced()) {
    throw std::invalid_argument("expected_log_bf: requires a balanced design");
  }
  const int k = cfg.k();
  if (static_cast<int>(eff.mu.size()) != k) {
    throw std::invalid_argument("expected_log_bf: mu length does not match group count");
  }
  const double n = cfg.group_sizes.front();
  double sum_mu2 = 0.0;
  for (double m : eff.mu) sum_mu2 += m * m;
  const double a = n * cfg.tau2;
  return -cfg.tau2 * (n * k + n * n * sum_mu2) / (2.0 * (1.0 + a)) +
         0.5 * k * numerics::log1p_stable(a);
}

/// Limit of 2 log(F) / k as k -> infinity:
/// log(1+a) - a(1+n eps^2)/(1+a), with 1+n eps^2 recovered as sigma^2/n.
inline double asymptotic_slope(const BalancedAsymptotics& asym) {
  if (asym.n < 1 || !(asym.a >= 0.0) || !(asym.sigma2 >= asym.n)) {
    throw std::domain_error("asymptotic_slope: invalid BalancedAsymptotics");
  }
  return numerics::log1p_stable(asym.a) -
         asym.a * asym.sigma2 / (asym.n * (1.0 + asym.a));
}

/// The unique eps* >= 0 where the slope changes sign: the submodel is
/// exponentially favored iff eps < eps*. Bracketed bisection on the slope.
inline double critical_epsilon(int n, double tau2) {
  if (n < 1) throw std::domain_error("critical_epsilon: n must be >= 1");
  if (!(tau2 >= 0.0)) throw std::domain_error("critical_epsilon: tau2 must be >= 0");
  if (tau2 == 0.0) return 0.0;  // slope is identically <= 0
  const auto slope_at = [&](double eps) {
    return asymptotic_slope(balanced_asymptotics(n, tau2, eps * eps));
  };
  double lo = 0.0;
  double hi = 1.0;
  while (slope_at(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("critical_epsilon: bracket expansion failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope_at(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Exact tail law of log F under iid N(0, eps^2) means. Since
/// log F = (k/2) log(1+a) - tau^2 sigma^2 Q / (2(1+a)) with Q ~ chi^2_k,
/// P(log F > kt) = P(Q < k(1+a)(log(1+a) - 2t) / (tau^2 sigma^2)).
inline double tail_prob_log_bf(double t, int k, const BalancedAsymptotics& asym,
                               double tau2) {
  if (k < 1) throw std::domain_error("tail_prob_log_bf: k must be >= 1");
  if (!(tau2 > 0.0)) throw std::domain_error("tail_prob_log_bf: tau2 must be > 0");
  const double arg =
      k * (1.0 + asym.a) * (numerics::log1p_stable(asym.a) - 2.0 * t) /
      (tau2 * asym.sigma2);
  if (arg <= 0.0) return 0.0;
  return numerics::chisq_cdf(arg, k);
}

/// Exact median of log F: the monotone decreasing map of the chi^2_k median.
inline double median_log_bf(int k, const BalancedAsymptotics& asym, double tau2) {
  if (k < 1) throw std::domain_error("median_log_bf: k must be >= 1");
  if (!(tau2 > 0.0)) throw std::domain_error("median_log_bf: tau2 must be > 0");
  const double q = numerics::chisq_quantile(0.5, k);
  return 0.5 * k * numerics::log1p_stable(asym.a) -
         tau2 * asym.sigma2 * q / (2.0 * (1.0 + asym.a));
}

struct MedianPoint {
  int k = 0;
  double median_log_f = 0.0;
};

/// Per-k exact medians of log F for k in [k_min, k_max].
inline std::vector<MedianPoint> median_curve(int k_min, int k_max,
                                             const BalancedAsymptotics& asym,
                                             double tau2) {
  if (k_min < 1 || k_max < k_min) {
    throw std::domain_error("median_curve: need 1 <= k_min <= k_max");
  }
  std::vector<MedianPoint> curve;
  curve.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    curve.push_back({k, median_log_bf(k, asym, tau2)});
  }
  return curve;
}

}  // namespace priorlab::oneway

#endif  // PRIORLAB_ONEWAY_HPP_
