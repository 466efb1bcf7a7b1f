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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "priorlab/numerics.hpp"
#include "priorlab/oneway.hpp"

namespace num = priorlab::numerics;
namespace ow = priorlab::oneway;

namespace {

// Random small instance for identity fuzzing.
ow::OneWayConfig fuzz_config(num::RngStream& rng) {
  ow::OneWayConfig cfg;
  const int k = 1 + static_cast<int>(rng.uniform_below(5));
  for (int i = 0; i < k; ++i) {
    cfg.group_sizes.push_back(1 + static_cast<int>(rng.uniform_below(5)));
  }
  cfg.tau2 = 4.0 * rng.next_double();
  return cfg;
}

ow::OneWaySufficient fuzz_dataset(num::RngStream& rng, const ow::OneWayConfig& cfg) {
  ow::IidNormalEffects eff{0.5};
  return ow::simulate_dataset(rng, cfg, ow::EffectSpec{eff});
}

}  // namespace

TEST_CASE("simulate_dataset matches its definition for k=1, n=1") {
  ow::OneWayConfig cfg = ow::balanced_config(1, 1, 1.0);
  const double mu = 5.0;
  num::RngStream rng(num::Seed{11});
  const auto data =
      ow::simulate_dataset(rng, cfg, ow::EffectSpec{ow::FixedEffects{{mu}}});
  num::RngStream replay(num::Seed{11});
  const double x = replay.normal(mu, 1.0);
  REQUIRE(data.group_sums.size() == 1);
  REQUIRE(data.group_sums[0] == x);
  REQUIRE(data.sum_sq == x * x);
}

TEST_CASE("simulate_dataset is deterministic under a fixed Seed") {
  ow::OneWayConfig cfg = ow::balanced_config(4, 7, 0.8);
  const ow::EffectSpec eff{ow::IidNormalEffects{0.25}};
  num::RngStream a(num::Seed{99}), b(num::Seed{99});
  const auto da = ow::simulate_dataset(a, cfg, eff);
  const auto db = ow::simulate_dataset(b, cfg, eff);
  REQUIRE(da.group_sums == db.group_sums);
  REQUIRE(da.sum_sq == db.sum_sq);
}

TEST_CASE("simulate_dataset group sums have variance n_i under the null") {
  ow::OneWayConfig cfg;
  cfg.group_sizes = {2, 5, 9};
  cfg.tau2 = 1.0;
  const ow::EffectSpec eff{ow::IidNormalEffects{0.0}};  // all means exactly 0
  const long reps = 100000;
  std::vector<double> sum(3, 0.0), sumsq(3, 0.0);
  for (long r = 0; r < reps; ++r) {
    num::RngStream rng = num::RngStream::derive(num::Seed{314}, static_cast<std::uint64_t>(r));
    const auto data = ow::simulate_dataset(rng, cfg, eff);
    for (int i = 0; i < 3; ++i) {
      sum[i] += data.group_sums[i];
      sumsq[i] += data.group_sums[i] * data.group_sums[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = sum[i] / reps;
    const double var = sumsq[i] / reps - mean * mean;
    REQUIRE(var == Catch::Approx(cfg.group_sizes[i]).epsilon(0.05));
  }
}

TEST_CASE("simulate_dataset rejects mismatched fixed means") {
  ow::OneWayConfig cfg = ow::balanced_config(3, 2, 1.0);
  num::RngStream rng(num::Seed{5});
  REQUIRE_THROWS_AS(
      ow::simulate_dataset(rng, cfg, ow::EffectSpec{ow::FixedEffects{{0.0, 0.0}}}),
      std::invalid_argument);
}

TEST_CASE("log_bayes_factor closed form") {
  SECTION("tau2 = 0 gives exactly zero for any data") {
    ow::OneWayConfig cfg = ow::balanced_config(3, 4, 0.0);
    ow::OneWaySufficient data{{1.5, -2.0, 0.7}, 10.0};
    REQUIRE(ow::log_bayes_factor(data, cfg) == 0.0);
  }
  SECTION("all-zero data, balanced k=5, n=10, tau2=1") {
    ow::OneWayConfig cfg = ow::balanced_config(5, 10, 1.0);
    ow::OneWaySufficient data{{0, 0, 0, 0, 0}, 0.0};
    // (5/2) ln 11
    REQUIRE(ow::log_bayes_factor(data, cfg) ==
            Catch::Approx(5.99473818199592636).epsilon(1e-13));
  }
  SECTION("single group, n=1, tau2=1, T=2") {
    ow::OneWayConfig cfg = ow::balanced_config(1, 1, 1.0);
    ow::OneWaySufficient data{{2.0}, 4.0};
    // (1/2) ln 2 - 1
    REQUIRE(ow::log_bayes_factor(data, cfg) ==
            Catch::Approx(-0.653426409720027345).epsilon(1e-13));
  }
}

TEST_CASE("marginal density: tau2 = 0 reduces to the iid standard normal") {
  ow::OneWayConfig cfg = ow::balanced_config(2, 3, 0.0);
  ow::OneWaySufficient data{{0.4, -1.1}, 5.3};
  REQUIRE(ow::log_marginal_density_model1(data, cfg) ==
          Catch::Approx(ow::log_density_model2(data, cfg)).epsilon(1e-15));
}

TEST_CASE("marginal density at k=1, n=1, x=0, tau2=1") {
  ow::OneWayConfig cfg = ow::balanced_config(1, 1, 1.0);
  ow::OneWaySufficient data{{0.0}, 0.0};
  // -(1/2) ln(2 pi) - (1/2) ln 2
  REQUIRE(ow::log_marginal_density_model1(data, cfg) ==
          Catch::Approx(-1.26551212348464540).epsilon(1e-13));
}

TEST_CASE("log F equals log f2 - log f1 on fuzzed instances") {
  num::RngStream rng(num::Seed{2718});
  for (int i = 0; i < 200; ++i) {
    const auto cfg = fuzz_config(rng);
    const auto data = fuzz_dataset(rng, cfg);
    const double lhs = ow::log_bayes_factor(data, cfg);
    const double rhs =
        ow::log_density_model2(data, cfg) - ow::log_marginal_density_model1(data, cfg);
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-10));
  }
}

TEST_CASE("posterior probability of the submodel") {
  ow::OneWayConfig cfg = ow::balanced_config(1, 1, 1.0);
  SECTION("symmetric prior, log F = 0") {
    REQUIRE(ow::posterior_prob_model2(0.0, cfg) == Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("limits") {
    REQUIRE(ow::posterior_prob_model2(1000.0, cfg) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(ow::posterior_prob_model2(-1000.0, cfg) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("degenerate model priors") {
    ow::OneWayConfig only1 = cfg;
    only1.prior_model1 = 1.0;
    only1.prior_model2 = 0.0;
    REQUIRE(ow::posterior_prob_model2(3.0, only1) == 0.0);
    ow::OneWayConfig only2 = cfg;
    only2.prior_model1 = 0.0;
    only2.prior_model2 = 1.0;
    REQUIRE(ow::posterior_prob_model2(-3.0, only2) == 1.0);
  }
  SECTION("monotone in log F and inside [0,1]") {
    double prev = -1.0;
    for (double lf = -80.0; lf <= 80.0; lf += 0.5) {
      const double p = ow::posterior_prob_model2(lf, cfg);
      REQUIRE(p >= 0.0);
      REQUIRE(p <= 1.0);
      REQUIRE(p >= prev);
      // Strictly increasing wherever doubles can still resolve the change.
      if (std::fabs(lf) <= 30.0) REQUIRE(p > prev);
      prev = p;
    }
  }
  SECTION("matches the direct two-density computation") {
    num::RngStream rng(num::Seed{1234});
    for (int i = 0; i < 100; ++i) {
      auto cfg2 = fuzz_config(rng);
      cfg2.prior_model1 = 0.25 + 0.5 * rng.next_double();
      cfg2.prior_model2 = 1.0 - cfg2.prior_model1;
      const auto data = fuzz_dataset(rng, cfg2);
      const double lf1 = ow::log_marginal_density_model1(data, cfg2);
      const double lf2 = ow::log_density_model2(data, cfg2);
      // pi_2 f_2 / (pi_1 f_1 + pi_2 f_2), shifted by the larger exponent
      const double shift = std::max(lf1, lf2);
      const double direct = cfg2.prior_model2 * std::exp(lf2 - shift) /
                            (cfg2.prior_model1 * std::exp(lf1 - shift) +
                             cfg2.prior_model2 * std::exp(lf2 - shift));
      const double logf = ow::log_bayes_factor(data, cfg2);
      REQUIRE(ow::posterior_prob_model2(logf, cfg2) ==
              Catch::Approx(direct).margin(1e-10));
    }
  }
}

TEST_CASE("expected log Bayes factor, balanced fixed means") {
  SECTION("tau2 = 0 gives zero") {
    ow::OneWayConfig cfg = ow::balanced_config(3, 5, 0.0);
    REQUIRE(ow::expected_log_bf(cfg, ow::FixedEffects{{0.1, -0.2, 0.3}}) == 0.0);
  }
  SECTION("n=10, tau2=1, k=1, mu=0") {
    ow::OneWayConfig cfg = ow::balanced_config(1, 10, 1.0);
    REQUIRE(ow::expected_log_bf(cfg, ow::FixedEffects{{0.0}}) ==
            Catch::Approx(0.744402181853730727).epsilon(1e-13));
  }
  SECTION("large mean spread drives the expectation negative") {
    ow::OneWayConfig cfg = ow::balanced_config(2, 10, 1.0);
    REQUIRE(ow::expected_log_bf(cfg, ow::FixedEffects{{10.0, -10.0}}) < 0.0);
  }
  SECTION("unbalanced designs are rejected") {
    ow::OneWayConfig cfg;
    cfg.group_sizes = {2, 3};
    cfg.tau2 = 1.0;
    REQUIRE_THROWS_AS(ow::expected_log_bf(cfg, ow::FixedEffects{{0.0, 0.0}}),
                      std::invalid_argument);
  }
  SECTION("Monte Carlo mean agrees within 3 standard errors") {
    ow::OneWayConfig cfg = ow::balanced_config(4, 10, 1.0);
    const ow::FixedEffects eff{{0.3, -0.2, 0.0, 0.5}};
    const double expected = ow::expected_log_bf(cfg, eff);
    const long reps = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (long r = 0; r < reps; ++r) {
      num::RngStream rng = num::RngStream::derive(num::Seed{777}, static_cast<std::uint64_t>(r));
      const auto data = ow::simulate_dataset(rng, cfg, ow::EffectSpec{eff});
      const double lf = ow::log_bayes_factor(data, cfg);
      sum += lf;
      sumsq += lf * lf;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt(sumsq / reps - mean * mean);
    REQUIRE(std::fabs(mean - expected) < 3.0 * sd / std::sqrt(static_cast<double>(reps)));
  }
}

TEST_CASE("asymptotic slope of 2 log F / k") {
  SECTION("a = 0 gives zero slope") {
    REQUIRE(ow::asymptotic_slope(ow::balanced_asymptotics(5, 0.0, 0.0)) == 0.0);
  }
  SECTION("n=10, tau=1, eps=0.3") {
    const auto asym = ow::balanced_asymptotics(10, 1.0, 0.09);
    REQUIRE(asym.a == 10.0);
    REQUIRE(asym.sigma2 == 19.0);
    REQUIRE(ow::asymptotic_slope(asym) ==
            Catch::Approx(0.670622545525643271).epsilon(1e-13));
  }
  SECTION("eps = 0 evaluates f(a)") {
    REQUIRE(ow::asymptotic_slope(ow::balanced_asymptotics(10, 1.0, 0.0)) ==
            Catch::Approx(1.48880436370746148).epsilon(1e-13));
  }
  SECTION("f is strictly increasing in a") {
    double prev = 0.0;
    for (double a = 0.5; a <= 100.0; a += 0.5) {
      // n=1, tau2=a gives the pure f(a) curve
      const double f = ow::asymptotic_slope(ow::balanced_asymptotics(1, a, 0.0));
      REQUIRE(f > prev);
      prev = f;
    }
  }
  SECTION("expected value with the iid variance folded in equals the limit") {
    // mu_i = eps for all i makes sum mu_i^2 = k eps^2, so E[2 log F / k]
    // reproduces the displayed limit exactly.
    const int k = 7, n = 10;
    const double tau2 = 1.0, eps = 0.3;
    ow::OneWayConfig cfg = ow::balanced_config(k, n, tau2);
    const ow::FixedEffects eff{std::vector<double>(k, eps)};
    const double folded = 2.0 * ow::expected_log_bf(cfg, eff) / k;
    REQUIRE(folded == Catch::Approx(ow::asymptotic_slope(
                          ow::balanced_asymptotics(n, tau2, eps * eps)))
                          .margin(1e-12));
  }
}

TEST_CASE("critical epsilon") {
  SECTION("n=10, tau2=1") {
    // Root of ln 11 = 10 (1 + 10 eps^2) / 11; closed form below is the oracle.
    const double eps = ow::critical_epsilon(10, 1.0);
    REQUIRE(eps == Catch::Approx(0.404683184735690198).margin(1e-9));
  }
  SECTION("tau2 = 0 gives zero") { REQUIRE(ow::critical_epsilon(4, 0.0) == 0.0); }
  SECTION("defining property and sign change") {
    for (auto [n, tau2] : std::vector<std::pair<int, double>>{{10, 1.0}, {3, 0.5}, {25, 2.0}}) {
      const double eps = ow::critical_epsilon(n, tau2);
      const double at_root =
          ow::asymptotic_slope(ow::balanced_asymptotics(n, tau2, eps * eps));
      REQUIRE(std::fabs(at_root) < 1e-10);
      REQUIRE(ow::asymptotic_slope(ow::balanced_asymptotics(
                  n, tau2, (eps - 0.01) * (eps - 0.01))) > 0.0);
      REQUIRE(ow::asymptotic_slope(ow::balanced_asymptotics(
                  n, tau2, (eps + 0.01) * (eps + 0.01))) < 0.0);
      // Independent closed form: eps*^2 = ((1+a) log(1+a)/a - 1)/n.
      const double a = n * tau2;
      const double closed = std::sqrt(((1.0 + a) * std::log(1.0 + a) / a - 1.0) / n);
      REQUIRE(eps == Catch::Approx(closed).margin(1e-10));
    }
  }
}

TEST_CASE("tail probability of log F") {
  const auto asym = ow::balanced_asymptotics(10, 1.0, 0.09);
  SECTION("very negative threshold covers the whole support") {
    REQUIRE(ow::tail_prob_log_bf(-1e6, 50, asym, 1.0) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("very large threshold has zero mass") {
    REQUIRE(ow::tail_prob_log_bf(1e6, 50, asym, 1.0) == 0.0);
  }
  SECTION("evaluates the chi-square representation") {
    // scipy: chi2.cdf(50*11*(ln 11 - 0.6)/19, 50)
    REQUIRE(ow::tail_prob_log_bf(0.3, 50, asym, 1.0) ==
            Catch::Approx(0.6057343986331283).margin(1e-9));
  }
  SECTION("equals one half at the median") {
    for (int k : {5, 50, 200}) {
      const double med = ow::median_log_bf(k, asym, 1.0);
      REQUIRE(ow::tail_prob_log_bf(med / k, k, asym, 1.0) ==
              Catch::Approx(0.5).margin(1e-9));
    }
  }
  SECTION("nonincreasing in t") {
    double prev = 2.0;
    for (double t = -1.0; t <= 1.5; t += 0.05) {
      const double p = ow::tail_prob_log_bf(t, 50, asym, 1.0);
      REQUIRE(p <= prev);
      prev = p;
    }
  }
}

TEST_CASE("median of log F") {
  const auto asym = ow::balanced_asymptotics(10, 1.0, 0.09);
  SECTION("frozen chi-square medians") {
    REQUIRE(ow::median_log_bf(200, asym, 1.0) ==
            Catch::Approx(67.6376696919284872).margin(1e-6));
    REQUIRE(ow::median_log_bf(50, asym, 1.0) ==
            Catch::Approx(17.3399364587974541).margin(1e-6));
    REQUIRE(ow::median_log_bf(20, asym, 1.0) ==
            Catch::Approx(7.27844566620475695).margin(1e-6));
  }
  SECTION("simulated median falls in the order-statistic interval") {
    ow::OneWayConfig cfg = ow::balanced_config(20, 10, 1.0);
    const ow::EffectSpec eff{ow::IidNormalEffects{0.09}};
    const long reps = 100000;
    std::vector<double> lf(static_cast<std::size_t>(reps));
    for (long r = 0; r < reps; ++r) {
      num::RngStream rng = num::RngStream::derive(num::Seed{424242}, static_cast<std::uint64_t>(r));
      lf[static_cast<std::size_t>(r)] =
          ow::log_bayes_factor(ow::simulate_dataset(rng, cfg, eff), cfg);
    }
    std::sort(lf.begin(), lf.end());
    // ~99.7% order-statistic interval for the median: ranks N/2 +/- 1.5 sqrt(N)
    const long lo = reps / 2 - static_cast<long>(1.5 * std::sqrt(static_cast<double>(reps)));
    const long hi = reps / 2 + static_cast<long>(1.5 * std::sqrt(static_cast<double>(reps)));
    const double exact = ow::median_log_bf(20, asym, 1.0);
    REQUIRE(exact >= lf[static_cast<std::size_t>(lo)]);
    REQUIRE(exact <= lf[static_cast<std::size_t>(hi)]);
  }
}

TEST_CASE("median curve: definition, linearity, and convergence") {
  const auto asym = ow::balanced_asymptotics(10, 1.0, 0.09);
  const auto curve = ow::median_curve(1, 200, asym, 1.0);
  REQUIRE(curve.size() == 200);
  REQUIRE(curve.front().k == 1);
  REQUIRE(curve.back().k == 200);
  for (const auto& pt : {curve[0], curve[49], curve[199]}) {
    REQUIRE(pt.median_log_f == ow::median_log_bf(pt.k, asym, 1.0));
  }

  // Least-squares fit over k in [50, 200].
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
  const double half_limit = 0.5 * ow::asymptotic_slope(asym);
  REQUIRE(slope == Catch::Approx(half_limit).epsilon(0.05));
  REQUIRE(r2 > 0.999);

  // |2 median/k - slope| shrinks with k.
  double prev_gap = 1e9;
  for (int k : {10, 50, 200}) {
    const double gap =
        std::fabs(2.0 * ow::median_log_bf(k, asym, 1.0) / k - ow::asymptotic_slope(asym));
    REQUIRE(gap < prev_gap);
    prev_gap = gap;
  }

  REQUIRE_THROWS_AS(ow::median_curve(0, 10, asym, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(ow::median_curve(5, 4, asym, 1.0), std::domain_error);
}
