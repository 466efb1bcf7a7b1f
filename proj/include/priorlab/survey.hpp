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
// Hierarchical beta-binomial survey model. B units carry success
// probabilities theta_j, iid Beta(alpha, beta) given hyperparameters; the
// Beta is reparametrized by its mean psi and variance eta, with a
// Beta(alpha0, beta0) hyperprior on psi and eta uniform on its feasible
// interval (0, psi(1-psi)) given psi. A sample J is drawn by a
// non-informative design and Y_j ~ Bernoulli(theta_j) observed for j in J.

#ifndef PRIORLAB_SURVEY_HPP_
#define PRIORLAB_SURVEY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "priorlab/numerics.hpp"

namespace priorlab::survey {

using numerics::RngStream;

enum class EtaPrior { UniformOnFeasible };

/// Hyperprior on (psi, eta). The improper limit alpha0, beta0 -> 0 (which
/// yields the Horvitz-Thompson estimator) is a flag, never stored zeros.
struct HyperPrior {
  double alpha0 = 1.0;
  double beta0 = 1.0;
  EtaPrior eta_prior = EtaPrior::UniformOnFeasible;
  bool improper_limit = false;

  void validate() const {
    if (!(alpha0 > 0.0) || !(beta0 > 0.0)) {
      throw std::domain_error("HyperPrior: alpha0 and beta0 must be > 0");
    }
  }

  double effective_alpha0() const { return improper_limit ? 0.0 : alpha0; }
  double effective_beta0() const { return improper_limit ? 0.0 : beta0; }
};

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Beta distribution in mean/variance coordinates; feasibility requires
/// 0 < eta < psi(1-psi), strictly, so alpha and beta stay finite positive.
struct BetaMeanVar {
  double psi = 0.5;
  double eta = 1.0 / 12.0;

  void validate() const {
    if (!(psi > 0.0) || !(psi < 1.0)) {
      throw std::domain_error("BetaMeanVar: psi must be in (0,1)");
    }
    if (!(eta > 0.0) || !(eta < psi * (1.0 - psi))) {
      throw std::domain_error("BetaMeanVar: eta must be in (0, psi(1-psi))");
    }
  }
};

/// (alpha, beta) from (psi, eta):
/// alpha+beta = psi(1-psi)/eta - 1, alpha = (alpha+beta) psi.
inline BetaParams beta_from_mean_var(const BetaMeanVar& mv) {
  mv.validate();
  const double total = mv.psi * (1.0 - mv.psi) / mv.eta - 1.0;
  return {total * mv.psi, total * (1.0 - mv.psi)};
}

inline BetaMeanVar mean_var_from_beta(const BetaParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
    throw std::domain_error("mean_var_from_beta: parameters must be positive");
  }
  const double total = p.alpha + p.beta;
  const double psi = p.alpha / total;
  return {psi, psi * (1.0 - psi) / (total + 1.0)};
}

/// P(Y_j = y | psi, eta) with theta_j integrated out: the Beta(alpha,beta)
/// mixture of a Bernoulli collapses to psi^y (1-psi)^(1-y).
inline double marginal_y_given_hyper(int y, const BetaMeanVar& mv) {
  if (y != 0 && y != 1) throw std::domain_error("marginal_y_given_hyper: y must be 0 or 1");
  mv.validate();
  return y == 1 ? mv.psi : 1.0 - mv.psi;
}

/// Observed sample: population size B, distinct sampled indices in 1..B
/// (kept sorted), their 0/1 outcomes, and the recorded design probability.
/// Estimators never consult design_prob; the design is non-informative.
struct SurveyData {
  int population = 0;                // B
  std::vector<int> indices;          // J, sorted ascending
  std::vector<int> outcomes;         // Y_j aligned with indices
  double design_prob = 1.0;          // pi_J, metadata only

  int sample_size() const { return static_cast<int>(indices.size()); }

  int successes() const { return std::accumulate(outcomes.begin(), outcomes.end(), 0); }

  std::optional<int> outcome_of(int j) const {
    const auto it = std::lower_bound(indices.begin(), indices.end(), j);
    if (it == indices.end() || *it != j) return std::nullopt;
    return outcomes[static_cast<std::size_t>(it - indices.begin())];
  }

  void validate() const {
    if (population < 1) throw std::domain_error("SurveyData: population must be >= 1");
    if (indices.empty()) throw std::domain_error("SurveyData: sample must be nonempty");
    if (indices.size() != outcomes.size()) {
      throw std::domain_error("SurveyData: indices/outcomes length mismatch");
    }
    if (!(design_prob > 0.0) || !(design_prob <= 1.0)) {
      throw std::domain_error("SurveyData: design_prob must be in (0,1]");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 1 || indices[i] > population) {
        throw std::domain_error("SurveyData: index " + std::to_string(indices[i]) +
                                " outside 1.." + std::to_string(population));
      }
      if (i > 0 && indices[i] <= indices[i - 1]) {
        throw std::domain_error("SurveyData: duplicate or unsorted index " +
                                std::to_string(indices[i]));
      }
      if (outcomes[i] != 0 && outcomes[i] != 1) {
        throw std::domain_error("SurveyData: outcomes must be 0 or 1");
      }
    }
  }
};

/// Posterior of psi given (Y,J) is Beta(S + alpha0, |J| - S + beta0).
/// Under the improper limit the parameters are (S, |J|-S), proper only when
/// 0 < S < |J|.
inline BetaParams psi_posterior_params(const SurveyData& data, const HyperPrior& hp) {
  data.validate();
  hp.validate();
  const double s = data.successes();
  return {s + hp.effective_alpha0(),
          data.sample_size() - s + hp.effective_beta0()};
}

inline bool psi_posterior_proper(const SurveyData& data, const HyperPrior& hp) {
  const BetaParams post = psi_posterior_params(data, hp);
  return post.alpha > 0.0 && post.beta > 0.0;
}

/// Bayes estimate of psi: (S + alpha0) / (|J| + alpha0 + beta0).
/// The improper limit gives S/|J| for any S.
inline double psi_hat(const SurveyData& data, const HyperPrior& hp) {
  data.validate();
  hp.validate();
  const double s = data.successes();
  return (s + hp.effective_alpha0()) /
         (data.sample_size() + hp.effective_alpha0() + hp.effective_beta0());
}

/// Horvitz-Thompson estimator S/|J|.
inline double ht_estimator(const SurveyData& data) {
  data.validate();
  return static_cast<double>(data.successes()) / data.sample_size();
}

/// E(theta_j | Y, J): psi_hat for unsampled units; the midpoint of psi_hat
/// and Y_j for sampled ones (uniform eta prior).
inline double posterior_theta_mean(int j, const SurveyData& data, const HyperPrior& hp) {
  if (j < 1 || j > data.population) {
    throw std::domain_error("posterior_theta_mean: unit index outside 1..B");
  }
  const double hat = psi_hat(data, hp);
  const std::optional<int> y = data.outcome_of(j);
  if (!y) return hat;
  return hat + (*y - hat) / 2.0;
}

/// Bayes estimate of psi_B = sum_j theta_j / B:
/// psi_hat + (|J|/B)(psi_hat_HT - psi_hat)/2, the mean over units of
/// posterior_theta_mean. Equals the HT estimator exactly in the improper limit.
inline double bayes_psi_b(const SurveyData& data, const HyperPrior& hp) {
  const double hat = psi_hat(data, hp);
  const double ht = ht_estimator(data);
  const double frac = static_cast<double>(data.sample_size()) / data.population;
  return hat + frac * (ht - hat) / 2.0;
}

/// Bound on |bayes_psi_b - psi_hat|: alpha0/(2B) + (alpha0+beta0)/(2B).
inline double correction_bound(const HyperPrior& hp, int population) {
  hp.validate();
  if (population < 1) throw std::domain_error("correction_bound: population must be >= 1");
  const double a0 = hp.effective_alpha0();
  const double b0 = hp.effective_beta0();
  return a0 / (2.0 * population) + (a0 + b0) / (2.0 * population);
}

/// Unit success probabilities, one per population member.
struct ThetaVector {
  std::vector<double> theta;

  int population() const { return static_cast<int>(theta.size()); }

  double psi_b() const {
    return std::accumulate(theta.begin(), theta.end(), 0.0) / theta.size();
  }

  void validate() const {
    if (theta.empty()) throw std::domain_error("ThetaVector: population must be >= 1");
    for (double t : theta) {
      if (!(t >= 0.0) || !(t <= 1.0)) {
        throw std::domain_error("ThetaVector: every theta must be in [0,1]");
      }
    }
  }
};

/// Design-based variance of the HT estimator for fixed theta and fixed J:
/// sum_{j in J} theta_j (1-theta_j) / |J|^2.
inline double ht_variance(const ThetaVector& theta, const std::vector<int>& sample) {
  theta.validate();
  if (sample.empty()) throw std::domain_error("ht_variance: sample must be nonempty");
  double var = 0.0;
  for (int j : sample) {
    if (j < 1 || j > theta.population()) {
      throw std::domain_error("ht_variance: sample index outside 1..B");
    }
    const double t = theta.theta[static_cast<std::size_t>(j - 1)];
    var += t * (1.0 - t);
  }
  const double m = static_cast<double>(sample.size());
  return var / (m * m);
}

/// Simple random sample without replacement of the requested size; then
/// Y_j ~ Bernoulli(theta_j), drawn in ascending index order.
/// design_prob is recorded as 1/C(B,n).
inline SurveyData simulate_survey(RngStream& rng, const ThetaVector& theta,
                                  int sample_size) {
  theta.validate();
  const int b = theta.population();
  if (sample_size < 1 || sample_size > b) {
    throw std::domain_error("simulate_survey: sample size must be in 1..B");
  }
  // Partial Fisher-Yates over 1..B, then canonicalize to sorted order.
  std::vector<int> pool(static_cast<std::size_t>(b));
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < sample_size; ++i) {
    const auto pick = i + static_cast<int>(rng.uniform_below(
                              static_cast<std::uint64_t>(b - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
  }
  SurveyData data;
  data.population = b;
  data.indices.assign(pool.begin(), pool.begin() + sample_size);
  std::sort(data.indices.begin(), data.indices.end());
  data.outcomes.reserve(data.indices.size());
  for (int j : data.indices) {
    data.outcomes.push_back(rng.bernoulli(theta.theta[static_cast<std::size_t>(j - 1)]));
  }
  const double log_choose = numerics::ln_gamma(b + 1.0) -
                            numerics::ln_gamma(sample_size + 1.0) -
                            numerics::ln_gamma(b - sample_size + 1.0);
  data.design_prob = std::exp(-log_choose);
  return data;
}

/// B iid Beta(alpha, beta) draws with (alpha, beta) taken from (psi, eta).
inline ThetaVector simulate_hierarchical(RngStream& rng, int population,
                                         const BetaMeanVar& mv) {
  if (population < 1) throw std::domain_error("simulate_hierarchical: population must be >= 1");
  const BetaParams p = beta_from_mean_var(mv);
  ThetaVector theta;
  theta.theta.resize(static_cast<std::size_t>(population));
  for (auto& t : theta.theta) t = rng.beta(p.alpha, p.beta);
  return theta;
}

}  // namespace priorlab::survey

#endif  // PRIORLAB_SURVEY_HPP_
