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
// Oracle agreement suites behind `verify`. Every check pits a closed form
// against an independent route (quadrature, Monte Carlo, direct summation,
// or a frozen high-precision value) and reports its worst deviation against
// a fixed tolerance. Quick keeps replicate counts small; full runs the
// complete grids.

#ifndef PRIORLAB_VERIFY_HPP_
#define PRIORLAB_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "priorlab/numerics.hpp"
#include "priorlab/oneway.hpp"
#include "priorlab/oracles.hpp"
#include "priorlab/survey.hpp"

namespace priorlab::verify {

using numerics::RngStream;
using numerics::Seed;

enum class Level { Quick, Full };

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;  // worst instance, or a one-line summary
};

namespace detail {

struct Worst {
  double deviation = 0.0;
  std::string where;

  void consider(double dev, const std::string& where_) {
    if (dev > deviation) {
      deviation = dev;
      where = where_;
    }
  }
};

inline CheckResult finish(std::string name, const Worst& worst, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.max_deviation = worst.deviation;
  r.tolerance = tol;
  r.pass = worst.deviation <= tol;
  r.detail = worst.where;
  return r;
}

inline std::string describe(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

inline oneway::OneWayConfig fuzz_oneway_config(RngStream& rng) {
  oneway::OneWayConfig cfg;
  const int k = 1 + static_cast<int>(rng.uniform_below(5));
  for (int i = 0; i < k; ++i) {
    cfg.group_sizes.push_back(1 + static_cast<int>(rng.uniform_below(5)));
  }
  cfg.tau2 = 0.05 + 3.95 * rng.next_double();
  return cfg;
}

inline survey::SurveyData fuzz_survey_data(RngStream& rng, int max_population,
                                           int max_sample) {
  const int b = 2 + static_cast<int>(rng.uniform_below(
                        static_cast<std::uint64_t>(max_population - 1)));
  const int n = 1 + static_cast<int>(rng.uniform_below(
                        static_cast<std::uint64_t>(std::min(b, max_sample))));
  survey::ThetaVector theta;
  theta.theta.assign(static_cast<std::size_t>(b), 0.5);
  return survey::simulate_survey(rng, theta, n);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One-way suite
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_oneway_suite(Seed seed, Level level, int threads = 1) {
  std::vector<CheckResult> results;
  const bool full = level == Level::Full;

  {  // log F = log f2 - log f1 on fuzzed instances
    detail::Worst worst;
    RngStream rng(seed, 101);
    const int instances = full ? 400 : 100;
    for (int i = 0; i < instances; ++i) {
      const auto cfg = detail::fuzz_oneway_config(rng);
      const auto data =
          oneway::simulate_dataset(rng, cfg, oneway::IidNormalEffects{0.5});
      const double dev = std::fabs(
          oneway::log_bayes_factor(data, cfg) -
          (oneway::log_density_model2(data, cfg) -
           oneway::log_marginal_density_model1(data, cfg)));
      worst.consider(dev, detail::describe("instance %d, k=%d, tau2=%.6f, seed=%llu", i,
                                           cfg.k(), cfg.tau2,
                                           static_cast<unsigned long long>(seed.value)));
    }
    results.push_back(detail::finish("oneway/logbf-density-identity", worst, 1e-10));
  }

  {  // closed-form marginal vs quadrature oracle
    detail::Worst worst;
    RngStream rng(seed, 102);
    const int instances = full ? 100 : 30;
    const oracle::QuadratureSpec spec{513, oracle::Scheme::GaussLegendre};
    for (int i = 0; i < instances; ++i) {
      const auto cfg = detail::fuzz_oneway_config(rng);
      const auto data =
          oneway::simulate_dataset(rng, cfg, oneway::IidNormalEffects{0.5});
      const double dev =
          std::fabs(oneway::log_marginal_density_model1(data, cfg) -
                    oracle::oneway_marginal_oracle(data, cfg, spec));
      worst.consider(dev, detail::describe("instance %d, k=%d, tau2=%.6f, seed=%llu", i,
                                           cfg.k(), cfg.tau2,
                                           static_cast<unsigned long long>(seed.value)));
    }
    results.push_back(detail::finish("oneway/marginal-vs-quadrature", worst, 1e-6));
  }

  {  // posterior model probability vs the direct two-density ratio
    detail::Worst worst;
    RngStream rng(seed, 103);
    const int instances = full ? 200 : 60;
    for (int i = 0; i < instances; ++i) {
      auto cfg = detail::fuzz_oneway_config(rng);
      cfg.prior_model1 = 0.2 + 0.6 * rng.next_double();
      cfg.prior_model2 = 1.0 - cfg.prior_model1;
      const auto data =
          oneway::simulate_dataset(rng, cfg, oneway::IidNormalEffects{0.5});
      const double lf1 = oneway::log_marginal_density_model1(data, cfg);
      const double lf2 = oneway::log_density_model2(data, cfg);
      const double shift = std::max(lf1, lf2);
      const double direct =
          cfg.prior_model2 * std::exp(lf2 - shift) /
          (cfg.prior_model1 * std::exp(lf1 - shift) + cfg.prior_model2 * std::exp(lf2 - shift));
      const double dev = std::fabs(
          oneway::posterior_prob_model2(oneway::log_bayes_factor(data, cfg), cfg) - direct);
      worst.consider(dev, detail::describe("instance %d, pi1=%.4f, seed=%llu", i,
                                           cfg.prior_model1,
                                           static_cast<unsigned long long>(seed.value)));
    }
    results.push_back(detail::finish("oneway/posterior-prob-identity", worst, 1e-10));
  }

  {  // exact tail law vs Monte Carlo frequency, in standard-error units
    detail::Worst worst;
    const long reps = full ? 100000 : 20000;
    const auto cfg = oneway::balanced_config(50, 10, 1.0);
    const auto asym = oneway::balanced_asymptotics(10, 1.0, 0.09);
    const oneway::EffectSpec eff{oneway::IidNormalEffects{0.09}};
    int salt = 0;
    for (double t : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      const Seed point_seed{seed.value + 1000 + static_cast<std::uint64_t>(salt++)};
      const auto mc = oracle::mc_tail_oracle(point_seed, t, cfg, eff, reps, threads);
      const double exact = oneway::tail_prob_log_bf(t, 50, asym, 1.0);
      const double dev = std::fabs(mc.estimate - exact) / mc.std_error;
      worst.consider(dev,
                     detail::describe("t=%.1f, exact=%.6f, mc=%.6f, reps=%ld, seed=%llu", t,
                                      exact, mc.estimate, reps,
                                      static_cast<unsigned long long>(point_seed.value)));
    }
    results.push_back(detail::finish("oneway/tail-vs-monte-carlo (SE units)", worst, 3.0));
  }

  {  // tail probability at the median equals one half
    detail::Worst worst;
    const auto asym = oneway::balanced_asymptotics(10, 1.0, 0.09);
    for (int k : {1, 2, 10, 50, 200}) {
      const double med = oneway::median_log_bf(k, asym, 1.0);
      const double dev = std::fabs(oneway::tail_prob_log_bf(med / k, k, asym, 1.0) - 0.5);
      worst.consider(dev, detail::describe("k=%d", k));
    }
    results.push_back(detail::finish("oneway/median-consistency", worst, 1e-9));
  }

  {  // median curve: slope near half the limit, near-perfect linearity
    const auto asym = oneway::balanced_asymptotics(10, 1.0, 0.09);
    const auto curve = oneway::median_curve(1, 200, asym, 1.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    long m = 0;
    for (const auto& pt : curve) {
      if (pt.k < 50) continue;
      sx += pt.k;
      sy += pt.median_log_f;
      sxx += static_cast<double>(pt.k) * pt.k;
      sxy += pt.k * pt.median_log_f;
      syy += pt.median_log_f * pt.median_log_f;
      ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double r2 = (m * sxy - sx * sy) * (m * sxy - sx * sy) /
                      ((m * sxx - sx * sx) * (m * syy - sy * sy));
    const double half_limit = 0.5 * oneway::asymptotic_slope(asym);
    detail::Worst slope_worst;
    slope_worst.consider(std::fabs(slope / half_limit - 1.0),
                         detail::describe("slope=%.6f, half-limit=%.6f", slope, half_limit));
    results.push_back(detail::finish("oneway/median-slope (relative)", slope_worst, 0.05));
    detail::Worst lin_worst;
    lin_worst.consider(1.0 - r2, detail::describe("R^2=%.12f", r2));
    results.push_back(detail::finish("oneway/median-linearity (1-R^2)", lin_worst, 1e-3));
  }

  {  // expected log F vs Monte Carlo mean
    const long reps = full ? 100000 : 20000;
    const auto cfg = oneway::balanced_config(4, 10, 1.0);
    const oneway::FixedEffects eff{{0.3, -0.2, 0.0, 0.5}};
    const double expected = oneway::expected_log_bf(cfg, eff);
    std::vector<double> lf(static_cast<std::size_t>(reps));
    oracle::for_each_replicate(reps, threads, [&](long r) {
      RngStream rng = RngStream::derive(Seed{seed.value + 2000}, static_cast<std::uint64_t>(r));
      lf[static_cast<std::size_t>(r)] = oneway::log_bayes_factor(
          oneway::simulate_dataset(rng, cfg, oneway::EffectSpec{eff}), cfg);
    });
    double sum = 0, sumsq = 0;
    for (double v : lf) {
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
    detail::Worst worst;
    worst.consider(std::fabs(mean - expected) / se,
                   detail::describe("expected=%.6f, mc=%.6f, reps=%ld, seed=%llu", expected,
                                    mean, reps, static_cast<unsigned long long>(seed.value + 2000)));
    results.push_back(detail::finish("oneway/expected-logbf-mc (SE units)", worst, 3.0));
  }

  {  // critical epsilon: root property plus the worked anchors
    detail::Worst root_worst;
    for (auto [n, tau2] : std::vector<std::pair<int, double>>{{10, 1.0}, {3, 0.5}, {25, 2.0}}) {
      const double eps = oneway::critical_epsilon(n, tau2);
      const double dev = std::fabs(
          oneway::asymptotic_slope(oneway::balanced_asymptotics(n, tau2, eps * eps)));
      root_worst.consider(dev, detail::describe("n=%d, tau2=%.2f", n, tau2));
    }
    results.push_back(detail::finish("oneway/critical-epsilon-root", root_worst, 1e-10));

    detail::Worst anchors;
    anchors.consider(std::fabs(oneway::asymptotic_slope(
                         oneway::balanced_asymptotics(10, 1.0, 0.09)) - 0.6706225455),
                     "slope(n=10, tau=1, eps=0.3)");
    anchors.consider(std::fabs(oneway::critical_epsilon(10, 1.0) - 0.4046831847),
                     "critical epsilon(n=10, tau=1)");
    anchors.consider(std::fabs(oneway::median_log_bf(
                         200, oneway::balanced_asymptotics(10, 1.0, 0.09), 1.0) -
                         67.6376696919),
                     "median log F at k=200");
    results.push_back(detail::finish("oneway/derived-anchors", anchors, 1e-6));
  }

  {  // simulated group sums reproduce their variance
    const long reps = full ? 100000 : 20000;
    oneway::OneWayConfig cfg;
    cfg.group_sizes = {2, 5, 9};
    cfg.tau2 = 1.0;
    std::vector<double> t0(static_cast<std::size_t>(reps)), t1(t0), t2(t0);
    oracle::for_each_replicate(reps, threads, [&](long r) {
      RngStream rng = RngStream::derive(Seed{seed.value + 3000}, static_cast<std::uint64_t>(r));
      const auto data =
          oneway::simulate_dataset(rng, cfg, oneway::IidNormalEffects{0.0});
      t0[static_cast<std::size_t>(r)] = data.group_sums[0];
      t1[static_cast<std::size_t>(r)] = data.group_sums[1];
      t2[static_cast<std::size_t>(r)] = data.group_sums[2];
    });
    detail::Worst worst;
    const std::vector<std::vector<double>*> groups{&t0, &t1, &t2};
    for (int i = 0; i < 3; ++i) {
      double sum = 0, sumsq = 0;
      for (double v : *groups[static_cast<std::size_t>(i)]) {
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / reps;
      const double var = sumsq / reps - mean * mean;
      worst.consider(std::fabs(var / cfg.group_sizes[static_cast<std::size_t>(i)] - 1.0),
                     detail::describe("group %d, n_i=%d, seed=%llu", i,
                                      cfg.group_sizes[static_cast<std::size_t>(i)],
                                      static_cast<unsigned long long>(seed.value + 3000)));
    }
    results.push_back(detail::finish("oneway/simulate-variance (relative)", worst, 0.05));
  }

  return results;
}

// ---------------------------------------------------------------------------
// Survey suite
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_survey_suite(Seed seed, Level level, int threads = 1) {
  std::vector<CheckResult> results;
  const bool full = level == Level::Full;

  {  // mean/variance parametrization round trip
    detail::Worst worst;
    RngStream rng(seed, 201);
    const int instances = full ? 500 : 150;
    for (int i = 0; i < instances; ++i) {
      survey::BetaMeanVar mv;
      mv.psi = 0.02 + 0.96 * rng.next_double();
      mv.eta = mv.psi * (1.0 - mv.psi) * (0.01 + 0.98 * rng.next_double());
      const auto back = survey::mean_var_from_beta(survey::beta_from_mean_var(mv));
      const double dev = std::max(std::fabs(back.psi - mv.psi), std::fabs(back.eta - mv.eta));
      worst.consider(dev, detail::describe("psi=%.6f, eta=%.6f", mv.psi, mv.eta));
    }
    results.push_back(detail::finish("survey/mean-var-round-trip", worst, 1e-12));
  }

  {  // collapsed one-observation marginal vs quadrature
    detail::Worst worst;
    for (const survey::BetaMeanVar mv : {survey::BetaMeanVar{0.5, 1.0 / 12.0},
                                         survey::BetaMeanVar{0.3, 0.01},
                                         survey::BetaMeanVar{0.5, 0.125}}) {
      const auto p = survey::beta_from_mean_var(mv);
      const auto rule = oracle::tanh_sinh_rule(257, 0.0, 1.0);
      for (int y : {0, 1}) {
        double integral = 0.0;
        for (const auto& nd : rule) {
          integral += nd.w * std::exp((p.alpha + y - 1.0) * std::log(nd.from_lo) +
                                      (p.beta - y) * std::log(nd.from_hi) -
                                      numerics::ln_beta(p.alpha, p.beta));
        }
        worst.consider(std::fabs(integral - survey::marginal_y_given_hyper(y, mv)),
                       detail::describe("psi=%.4f, eta=%.4f, y=%d", mv.psi, mv.eta, y));
      }
    }
    results.push_back(detail::finish("survey/marginal-y-quadrature", worst, 1e-8));
  }

  {  // psi posterior mean vs 1-D quadrature of the reduced kernel
    detail::Worst worst;
    struct Case {
      int s, m;
      double a0, b0;
    };
    for (const Case c : {Case{3, 10, 1.0, 1.0}, Case{0, 4, 0.3, 2.0}, Case{5, 5, 2.0, 0.4},
                         Case{2, 7, 4.5, 0.2}}) {
      const auto rule = oracle::tanh_sinh_rule(257, 0.0, 1.0);
      double num_ = 0.0, den = 0.0;
      const double a = c.s + c.a0, b = c.m - c.s + c.b0;
      for (const auto& nd : rule) {
        const double kern =
            std::exp((a - 1.0) * std::log(nd.from_lo) + (b - 1.0) * std::log(nd.from_hi));
        num_ += nd.w * nd.from_lo * kern;
        den += nd.w * kern;
      }
      const double closed = a / (a + b);
      worst.consider(std::fabs(num_ / den - closed),
                     detail::describe("S=%d, |J|=%d, a0=%.2f, b0=%.2f", c.s, c.m, c.a0, c.b0));
    }
    results.push_back(detail::finish("survey/psi-posterior-quadrature", worst, 1e-8));
  }

  {  // posterior mean of theta_j vs the 2-D oracle
    detail::Worst worst;
    RngStream rng(seed, 202);
    const int instances = full ? 50 : 15;
    const oracle::QuadratureSpec spec{201, oracle::Scheme::GaussLegendre};
    for (int i = 0; i < instances; ++i) {
      const auto data = detail::fuzz_survey_data(rng, 50, 10);
      const survey::HyperPrior hp{0.2 + 4.8 * rng.next_double(),
                                  0.2 + 4.8 * rng.next_double()};
      for (int j : {1, data.population}) {
        const double dev = std::fabs(oracle::survey_posterior_oracle(j, data, hp, spec) -
                                     survey::posterior_theta_mean(j, data, hp));
        worst.consider(dev, detail::describe("instance %d, B=%d, |J|=%d, S=%d, j=%d, seed=%llu",
                                             i, data.population, data.sample_size(),
                                             data.successes(), j,
                                             static_cast<unsigned long long>(seed.value)));
      }
    }
    results.push_back(detail::finish("survey/theta-mean-vs-oracle", worst, 1e-6));
  }

  {  // Bayes psi_B: summation identity and oracle agreement
    detail::Worst sum_worst;
    RngStream rng(seed, 203);
    const int instances = full ? 200 : 50;
    for (int i = 0; i < instances; ++i) {
      const auto data = detail::fuzz_survey_data(rng, 60, 12);
      const survey::HyperPrior hp{0.2 + 4.8 * rng.next_double(),
                                  0.2 + 4.8 * rng.next_double()};
      double mean = 0.0;
      for (int j = 1; j <= data.population; ++j) {
        mean += survey::posterior_theta_mean(j, data, hp);
      }
      mean /= data.population;
      sum_worst.consider(std::fabs(survey::bayes_psi_b(data, hp) - mean),
                         detail::describe("instance %d, B=%d, |J|=%d", i, data.population,
                                          data.sample_size()));
    }
    results.push_back(detail::finish("survey/bayes-psib-summation", sum_worst, 1e-12));

    detail::Worst oracle_worst;
    RngStream rng2(seed, 204);
    const oracle::QuadratureSpec spec{201, oracle::Scheme::GaussLegendre};
    const int oracle_instances = full ? 20 : 6;
    for (int i = 0; i < oracle_instances; ++i) {
      const auto data = detail::fuzz_survey_data(rng2, 40, 8);
      const survey::HyperPrior hp{0.2 + 4.8 * rng2.next_double(),
                                  0.2 + 4.8 * rng2.next_double()};
      double total = 0.0;
      for (int j = 1; j <= data.population; ++j) {
        total += oracle::survey_posterior_oracle(j, data, hp, spec);
      }
      oracle_worst.consider(std::fabs(survey::bayes_psi_b(data, hp) - total / data.population),
                            detail::describe("instance %d, B=%d, |J|=%d, S=%d", i,
                                             data.population, data.sample_size(),
                                             data.successes()));
    }
    results.push_back(detail::finish("survey/bayes-psib-vs-oracle", oracle_worst, 1e-6));
  }

  {  // the improper limit collapses to Horvitz-Thompson exactly
    detail::Worst worst;
    RngStream rng(seed, 205);
    survey::HyperPrior hp;
    hp.improper_limit = true;
    const int instances = full ? 500 : 150;
    for (int i = 0; i < instances; ++i) {
      const auto data = detail::fuzz_survey_data(rng, 50, 12);
      const int s = data.successes();
      if (s == 0 || s == data.sample_size()) continue;
      worst.consider(std::fabs(survey::bayes_psi_b(data, hp) - survey::ht_estimator(data)),
                     detail::describe("instance %d, B=%d, S=%d", i, data.population, s));
      worst.consider(std::fabs(survey::psi_hat(data, hp) - survey::ht_estimator(data)),
                     detail::describe("psi_hat, instance %d", i));
    }
    results.push_back(detail::finish("survey/improper-ht-exact", worst, 0.0));
  }

  {  // correction bound holds with room to spare
    detail::Worst worst;
    RngStream rng(seed, 206);
    const int instances = full ? 10000 : 2000;
    for (int i = 0; i < instances; ++i) {
      const auto data = detail::fuzz_survey_data(rng, 50, 12);
      const survey::HyperPrior hp{0.2 + 4.8 * rng.next_double(),
                                  0.2 + 4.8 * rng.next_double()};
      const double gap = std::fabs(survey::bayes_psi_b(data, hp) - survey::psi_hat(data, hp));
      const double excess = gap - survey::correction_bound(hp, data.population);
      worst.consider(std::max(0.0, excess),
                     detail::describe("instance %d, B=%d, |J|=%d", i, data.population,
                                      data.sample_size()));
    }
    results.push_back(detail::finish("survey/correction-bound", worst, 1e-15));
  }

  {  // HT variance formula vs Monte Carlo at fixed theta and J
    const long reps = full ? 100000 : 20000;
    survey::ThetaVector theta;
    for (int i = 0; i < 20; ++i) theta.theta.push_back(0.2 + 0.03 * i);
    const std::vector<int> sample{1, 3, 5, 7, 9, 11, 13, 15, 17, 19};
    const double predicted = survey::ht_variance(theta, sample);
    std::vector<double> ht(static_cast<std::size_t>(reps));
    oracle::for_each_replicate(reps, threads, [&](long r) {
      RngStream rng = RngStream::derive(Seed{seed.value + 4000}, static_cast<std::uint64_t>(r));
      int s = 0;
      for (int j : sample) s += rng.bernoulli(theta.theta[static_cast<std::size_t>(j - 1)]);
      ht[static_cast<std::size_t>(r)] = static_cast<double>(s) / sample.size();
    });
    double sum = 0, sumsq = 0;
    for (double v : ht) {
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / reps;
    const double var = sumsq / reps - mean * mean;
    detail::Worst worst;
    worst.consider(std::fabs(var / predicted - 1.0),
                   detail::describe("formula=%.6g, mc=%.6g, reps=%ld, seed=%llu", predicted,
                                    var, reps, static_cast<unsigned long long>(seed.value + 4000)));
    results.push_back(detail::finish("survey/ht-variance-mc (relative)", worst, 0.05));
  }

  {  // estimator Monte Carlo: census identity and the RMSE formula
    const long reps = full ? 10000 : 2000;
    const survey::BetaMeanVar mv{0.3, 0.01};
    const survey::HyperPrior hp{1.0, 1.0};
    const auto census =
        oracle::mc_estimator_oracle(Seed{seed.value + 5000}, 100, mv, 100, hp, reps, threads);
    detail::Worst worst;
    worst.consider(std::fabs(census.ht_vs_psi_b.rmse / std::sqrt((0.3 * 0.7 - 0.01) / 100.0) - 1.0),
                   detail::describe("census RMSE vs Bernoulli envelope, reps=%ld", reps));
    const auto srs =
        oracle::mc_estimator_oracle(Seed{seed.value + 5001}, 1000, mv, 50, hp, reps, threads);
    worst.consider(std::fabs(srs.ht_vs_psi_b.rmse / std::sqrt(srs.mean_ht_variance) - 1.0),
                   detail::describe("B=1000, n=50 RMSE vs design variance, reps=%ld", reps));
    results.push_back(detail::finish("survey/estimator-mc (relative)", worst, 0.10));
  }

  {  // worked anchor: B=1000, |J|=10, S=3, uniform hyperprior
    survey::SurveyData data;
    data.population = 1000;
    for (int i = 0; i < 10; ++i) {
      data.indices.push_back(i + 1);
      data.outcomes.push_back(i < 3 ? 1 : 0);
    }
    const survey::HyperPrior hp{1.0, 1.0};
    detail::Worst worst;
    worst.consider(std::fabs(survey::psi_hat(data, hp) - 1.0 / 3.0), "psi_hat");
    worst.consider(std::fabs(survey::bayes_psi_b(data, hp) - 0.3331666666666667),
                   "bayes psi_B");
    worst.consider(std::fabs(survey::correction_bound(survey::HyperPrior{1.0, 1.0}, 100) - 0.015),
                   "correction bound");
    results.push_back(detail::finish("survey/derived-anchors", worst, 1e-12));
  }

  return results;
}

}  // namespace priorlab::verify

#endif  // PRIORLAB_VERIFY_HPP_
