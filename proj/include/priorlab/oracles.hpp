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
// Brute-force reference computations: quadrature and Monte Carlo oracles
// that validate the closed forms in oneway.hpp and survey.hpp. Deliberately
// slow and structurally unrelated to the expressions they check; the oracles
// never call the operations they validate.

#ifndef PRIORLAB_ORACLES_HPP_
#define PRIORLAB_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "priorlab/numerics.hpp"
#include "priorlab/oneway.hpp"
#include "priorlab/survey.hpp"

namespace priorlab::oracle {

using numerics::RngStream;
using numerics::Seed;

// ---------------------------------------------------------------------------
// Quadrature rules
// ---------------------------------------------------------------------------

enum class Scheme { Simpson, GaussLegendre, TanhSinh };

struct QuadratureSpec {
  int grid_points = 201;
  Scheme scheme = Scheme::GaussLegendre;

  void validate() const {
    if (grid_points < 17) throw std::domain_error("QuadratureSpec: need >= 17 grid points");
    if (scheme == Scheme::Simpson && grid_points % 2 == 0) {
      throw std::domain_error("QuadratureSpec: Simpson needs an odd point count");
    }
  }
};

/// One abscissa with its distances to both interval ends. The distances are
/// built directly from the rule's own parametrization, so they stay accurate
/// where x itself would round to an endpoint.
struct QuadNode {
  double x = 0.0;
  double from_lo = 0.0;  // x - a
  double from_hi = 0.0;  // b - x
  double w = 0.0;
};

inline std::vector<QuadNode> simpson_rule(int n, double a, double b) {
  if (n < 3 || n % 2 == 0) throw std::domain_error("simpson_rule: need odd n >= 3");
  const double h = (b - a) / (n - 1);
  std::vector<QuadNode> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double coeff = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    nodes[static_cast<std::size_t>(i)] = {a + i * h, i * h, (n - 1 - i) * h, coeff * h / 3.0};
  }
  return nodes;
}

/// Gauss-Legendre abscissas by Newton iteration on the Legendre recurrence.
inline std::vector<QuadNode> gauss_legendre_rule(int n, double a, double b) {
  if (n < 2) throw std::domain_error("gauss_legendre_rule: need n >= 2");
  std::vector<QuadNode> nodes(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-15) break;
    }
    const double w = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    nodes[static_cast<std::size_t>(i)] = {xm - xl * z, xl * (1.0 - z), xl * (1.0 + z), w};
    nodes[static_cast<std::size_t>(n - 1 - i)] = {xm + xl * z, xl * (1.0 + z), xl * (1.0 - z), w};
  }
  return nodes;
}

/// Tanh-sinh (double exponential) rule. Open at both ends; node distances to
/// the endpoints decay double-exponentially, which integrates kernels with
/// integrable endpoint singularities (e.g. Beta kernels with exponents in
/// (-1,0)) to near machine precision. The default truncation |t| <= 4.8 puts
/// the nearest node ~2.5e-83 from each end: the omitted mass of x^(c-1) is
/// below 1e-12 for any c >= 0.15. Raising t_max (up to ~6) reaches kernels
/// with even smaller exponents at the cost of denormal-range node distances.
inline std::vector<QuadNode> tanh_sinh_rule(int n, double a, double b,
                                            double t_max = 4.8) {
  if (n < 3) throw std::domain_error("tanh_sinh_rule: need n >= 3");
  if (!(t_max > 0.0) || t_max > 6.1) {
    throw std::domain_error("tanh_sinh_rule: t_max must be in (0, 6.1]");
  }
  const double h = 2.0 * t_max / (n - 1);
  const double half = 0.5 * (b - a);
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<QuadNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = -t_max + i * h;
    const double u = half_pi * std::sinh(t);
    // 1 +/- tanh(u) without cancellation: 2 / (exp(-/+2u) + 1).
    const double one_minus = 2.0 / (std::exp(2.0 * u) + 1.0);
    const double one_plus = 2.0 / (std::exp(-2.0 * u) + 1.0);
    const double sech = 2.0 / (std::exp(u) + std::exp(-u));
    const double w = half * half_pi * std::cosh(t) * sech * sech * h;
    if (!(w > 0.0) || one_minus == 0.0 || one_plus == 0.0) continue;
    QuadNode nd;
    nd.from_lo = half * one_plus;   // x - a = half (1 + tanh u)
    nd.from_hi = half * one_minus;  // b - x = half (1 - tanh u)
    nd.x = a + nd.from_lo;
    nd.w = w;
    nodes.push_back(nd);
  }
  return nodes;
}

inline std::vector<QuadNode> make_rule(const QuadratureSpec& spec, double a, double b) {
  spec.validate();
  switch (spec.scheme) {
    case Scheme::Simpson:
      return simpson_rule(spec.grid_points, a, b);
    case Scheme::GaussLegendre:
      return gauss_legendre_rule(spec.grid_points, a, b);
    case Scheme::TanhSinh:
      return tanh_sinh_rule(spec.grid_points, a, b);
  }
  throw std::logic_error("make_rule: unknown scheme");
}

template <class F>
double integrate(const std::vector<QuadNode>& rule, F&& f) {
  double sum = 0.0;
  for (const QuadNode& nd : rule) sum += nd.w * f(nd);
  return sum;
}

// ---------------------------------------------------------------------------
// Deterministic replicate-parallel loop
// ---------------------------------------------------------------------------

/// Runs body(i) for i in [0, count). Each invocation may touch only its own
/// output slot, so thread count and scheduling cannot change the result.
template <class Body>
void for_each_replicate(long count, int threads, Body&& body) {
  if (threads <= 1 || count < 2) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  const int nt = static_cast<int>(std::min<long>(threads, count));
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (long i = t; i < count; i += nt) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// One-way layout oracles
// ---------------------------------------------------------------------------

/// log f1 by per-group 1-D quadrature of exp(mu T_i - n_i mu^2/2) against the
/// N(0, tau^2) prior, over a data-shifted window of half-width 12 tau.
/// Small instances only: k <= 6, n_i <= 10.
inline double oneway_marginal_oracle(const oneway::OneWaySufficient& data,
                                     const oneway::OneWayConfig& cfg,
                                     const QuadratureSpec& spec) {
  cfg.validate();
  spec.validate();
  if (cfg.k() > 6) throw std::invalid_argument("oneway_marginal_oracle: k exceeds oracle scale");
  for (int ni : cfg.group_sizes) {
    if (ni > 10) throw std::invalid_argument("oneway_marginal_oracle: n_i exceeds oracle scale");
  }
  if (data.group_sums.size() != cfg.group_sizes.size()) {
    throw std::invalid_argument("oneway_marginal_oracle: group count mismatch");
  }
  const double total = cfg.total_obs();
  double value = -0.5 * total * std::log(2.0 * std::numbers::pi) - 0.5 * data.sum_sq;
  if (cfg.tau2 == 0.0) return value;  // prior degenerate at 0: iid standard normal
  const double tau = std::sqrt(cfg.tau2);
  for (std::size_t i = 0; i < cfg.group_sizes.size(); ++i) {
    const double t = data.group_sums[i];
    const double ni = cfg.group_sizes[i];
    const double center = cfg.tau2 * t / (1.0 + ni * cfg.tau2);
    const auto rule = make_rule(spec, center - 12.0 * tau, center + 12.0 * tau);
    // log integrand of exp(mu T - n mu^2 / 2) N(mu; 0, tau^2)
    std::vector<double> logs(rule.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double mu = rule[q].x;
      logs[q] = mu * t - 0.5 * ni * mu * mu - 0.5 * mu * mu / cfg.tau2 -
                0.5 * std::log(2.0 * std::numbers::pi * cfg.tau2);
      peak = std::max(peak, logs[q]);
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) sum += rule[q].w * std::exp(logs[q] - peak);
    value += peak + std::log(sum);
  }
  return value;
}

// ---------------------------------------------------------------------------
// Survey oracles
// ---------------------------------------------------------------------------

/// E(theta_j | Y, J) by 2-D quadrature of the inner conditional mean against
/// the (psi, eta) posterior. The triangular region {0 < eta < psi(1-psi)} is
/// mapped to the unit square by eta = u psi(1-psi); the psi axis always uses
/// tanh-sinh (the Beta kernel is singular at the ends whenever S+alpha0 < 1
/// or |J|-S+beta0 < 1), the u axis uses the requested scheme.
/// Small instances only: B <= 50, |J| <= 10.
inline double survey_posterior_oracle(int j, const survey::SurveyData& data,
                                      const survey::HyperPrior& hp,
                                      const QuadratureSpec& spec) {
  data.validate();
  hp.validate();
  spec.validate();
  if (data.population > 50) {
    throw std::invalid_argument("survey_posterior_oracle: B exceeds oracle scale");
  }
  if (data.sample_size() > 10) {
    throw std::invalid_argument("survey_posterior_oracle: |J| exceeds oracle scale");
  }
  if (j < 1 || j > data.population) {
    throw std::domain_error("survey_posterior_oracle: unit index outside 1..B");
  }
  const double s = data.successes();
  const double c = s + hp.effective_alpha0();
  const double d = data.sample_size() - s + hp.effective_beta0();
  if (!(c > 0.0) || !(d > 0.0)) {
    throw std::domain_error("survey_posterior_oracle: improper posterior (S=0 or S=|J|)");
  }
  const auto psi_rule = tanh_sinh_rule(spec.grid_points, 0.0, 1.0);
  const auto u_rule = spec.scheme == Scheme::Simpson
                          ? simpson_rule(spec.grid_points, 0.0, 1.0)
                          : gauss_legendre_rule(spec.grid_points, 0.0, 1.0);
  const std::optional<int> y = data.outcome_of(j);

  // Shift the Beta kernel by its peak log so extreme exponents stay in range.
  std::vector<double> log_kern(psi_rule.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < psi_rule.size(); ++q) {
    log_kern[q] = (c - 1.0) * std::log(psi_rule[q].from_lo) +
                  (d - 1.0) * std::log(psi_rule[q].from_hi);
    peak = std::max(peak, log_kern[q]);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t q = 0; q < psi_rule.size(); ++q) {
    const double psi = psi_rule[q].from_lo;  // distance from 0 is psi itself
    const double kern = psi_rule[q].w * std::exp(log_kern[q] - peak);
    double inner = 0.0;
    for (const QuadNode& un : u_rule) {
      // E(theta_j | Y,J,psi,eta) with eta = u psi(1-psi):
      // psi - eta/(1-psi) + Y_j eta/(psi(1-psi)) = psi(1-u) + Y_j u.
      const double mean = y ? psi * (1.0 - un.x) + *y * un.x : psi;
      inner += un.w * mean;
    }
    num += kern * inner;
    den += kern;
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Monte Carlo oracles
// ---------------------------------------------------------------------------

struct McTailEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long reps = 0;
};

/// Empirical P(log F > kt) over fresh simulated datasets (new means each
/// replicate under an IidNormal effect spec). Validates tail_prob_log_bf,
/// which it never calls.
inline McTailEstimate mc_tail_oracle(Seed seed, double t, const oneway::OneWayConfig& cfg,
                                     const oneway::EffectSpec& eff, long reps,
                                     int threads = 1) {
  if (reps < 10000) throw std::domain_error("mc_tail_oracle: need reps >= 1e4");
  cfg.validate();
  const int k = cfg.k();
  std::vector<unsigned char> exceed(static_cast<std::size_t>(reps));
  for_each_replicate(reps, threads, [&](long r) {
    RngStream rng = RngStream::derive(seed, static_cast<std::uint64_t>(r));
    const auto data = oneway::simulate_dataset(rng, cfg, eff);
    exceed[static_cast<std::size_t>(r)] =
        oneway::log_bayes_factor(data, cfg) > k * t ? 1 : 0;
  });
  long hits = 0;
  for (unsigned char e : exceed) hits += e;
  McTailEstimate out;
  out.reps = reps;
  out.estimate = static_cast<double>(hits) / reps;
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / reps);
  return out;
}

struct ErrorStats {
  double bias = 0.0;
  double rmse = 0.0;
};

struct McEstimatorSummary {
  long reps = 0;
  double psi = 0.0;  // hyper-mean targeted by the bias columns
  ErrorStats psi_hat_vs_psi, ht_vs_psi, bayes_vs_psi;
  ErrorStats psi_hat_vs_psi_b, ht_vs_psi_b, bayes_vs_psi_b;
  double mean_realized_psi_b = 0.0;
  double mean_ht_variance = 0.0;
};

/// Frequentist behavior of the estimators: fresh theta ~ Beta hierarchy and
/// fresh SRS sample every replicate; bias and RMSE reported against the
/// hyper-mean psi and against each replicate's realized psi_B.
inline McEstimatorSummary mc_estimator_oracle(Seed seed, int population,
                                              const survey::BetaMeanVar& mv,
                                              int sample_size, const survey::HyperPrior& hp,
                                              long reps, int threads = 1) {
  if (reps < 1000) throw std::domain_error("mc_estimator_oracle: need reps >= 1e3");
  mv.validate();
  hp.validate();
  if (population < 1 || sample_size < 1 || sample_size > population) {
    throw std::domain_error("mc_estimator_oracle: need 1 <= sample_size <= population");
  }
  struct Row {
    double psi_hat, ht, bayes, psi_b, ht_var;
  };
  std::vector<Row> rows(static_cast<std::size_t>(reps));
  for_each_replicate(reps, threads, [&](long r) {
    RngStream rng = RngStream::derive(seed, static_cast<std::uint64_t>(r));
    const auto theta = survey::simulate_hierarchical(rng, population, mv);
    const auto data = survey::simulate_survey(rng, theta, sample_size);
    rows[static_cast<std::size_t>(r)] = {survey::psi_hat(data, hp),
                                         survey::ht_estimator(data),
                                         survey::bayes_psi_b(data, hp), theta.psi_b(),
                                         survey::ht_variance(theta, data.indices)};
  });
  const auto reduce = [&](auto estimate_of, auto target_of) {
    double bias = 0.0, mse = 0.0;
    for (const Row& row : rows) {
      const double err = estimate_of(row) - target_of(row);
      bias += err;
      mse += err * err;
    }
    return ErrorStats{bias / reps, std::sqrt(mse / reps)};
  };
  McEstimatorSummary out;
  out.reps = reps;
  out.psi = mv.psi;
  const auto vs_psi = [&](const Row&) { return mv.psi; };
  const auto vs_psi_b = [](const Row& row) { return row.psi_b; };
  out.psi_hat_vs_psi = reduce([](const Row& r) { return r.psi_hat; }, vs_psi);
  out.ht_vs_psi = reduce([](const Row& r) { return r.ht; }, vs_psi);
  out.bayes_vs_psi = reduce([](const Row& r) { return r.bayes; }, vs_psi);
  out.psi_hat_vs_psi_b = reduce([](const Row& r) { return r.psi_hat; }, vs_psi_b);
  out.ht_vs_psi_b = reduce([](const Row& r) { return r.ht; }, vs_psi_b);
  out.bayes_vs_psi_b = reduce([](const Row& r) { return r.bayes; }, vs_psi_b);
  for (const Row& row : rows) {
    out.mean_realized_psi_b += row.psi_b;
    out.mean_ht_variance += row.ht_var;
  }
  out.mean_realized_psi_b /= reps;
  out.mean_ht_variance /= reps;
  return out;
}

}  // namespace priorlab::oracle

#endif  // PRIORLAB_ORACLES_HPP_
