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
#include "priorlab/oracles.hpp"
#include "priorlab/survey.hpp"

namespace num = priorlab::numerics;
namespace sv = priorlab::survey;
namespace orc = priorlab::oracle;

namespace {

sv::SurveyData make_data(int population, std::vector<int> indices, std::vector<int> outcomes) {
  sv::SurveyData data;
  data.population = population;
  data.indices = std::move(indices);
  data.outcomes = std::move(outcomes);
  data.validate();
  return data;
}

// Random data instance with the requested success-count range.
sv::SurveyData fuzz_data(num::RngStream& rng, int max_population, int max_sample) {
  const int b = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_population - 1)));
  const int n = 1 + static_cast<int>(rng.uniform_below(
                        static_cast<std::uint64_t>(std::min(b, max_sample))));
  sv::ThetaVector theta;
  theta.theta.assign(static_cast<std::size_t>(b), 0.5);
  return sv::simulate_survey(rng, theta, n);
}

double beta_kernel_mean_by_quadrature(double a, double b) {
  // mean of Beta(a,b) via tanh-sinh, robust to endpoint singularities
  const auto rule = orc::tanh_sinh_rule(201, 0.0, 1.0);
  double num_ = 0.0, den = 0.0;
  for (const auto& nd : rule) {
    const double kern =
        std::exp((a - 1.0) * std::log(nd.from_lo) + (b - 1.0) * std::log(nd.from_hi));
    num_ += nd.w * nd.from_lo * kern;
    den += nd.w * kern;
  }
  return num_ / den;
}

}  // namespace

TEST_CASE("beta_from_mean_var closed form") {
  SECTION("uniform distribution") {
    const auto p = sv::beta_from_mean_var({0.5, 1.0 / 12.0});
    REQUIRE(p.alpha == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(p.beta == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("psi=0.3, eta=0.01") {
    const auto p = sv::beta_from_mean_var({0.3, 0.01});
    REQUIRE(p.alpha == Catch::Approx(6.0).margin(1e-10));
    REQUIRE(p.beta == Catch::Approx(14.0).margin(1e-10));
  }
  SECTION("round trip") {
    num::RngStream rng(num::Seed{31});
    for (int i = 0; i < 200; ++i) {
      sv::BetaMeanVar mv;
      mv.psi = 0.02 + 0.96 * rng.next_double();
      mv.eta = mv.psi * (1.0 - mv.psi) * (0.01 + 0.98 * rng.next_double());
      const auto back = sv::mean_var_from_beta(sv::beta_from_mean_var(mv));
      REQUIRE(back.psi == Catch::Approx(mv.psi).margin(1e-12));
      REQUIRE(back.eta == Catch::Approx(mv.eta).margin(1e-12));
    }
  }
  SECTION("moments by quadrature") {
    const sv::BetaMeanVar mv{0.3, 0.01};
    const auto p = sv::beta_from_mean_var(mv);
    const auto rule = orc::gauss_legendre_rule(257, 0.0, 1.0);
    double mass = 0.0, mean = 0.0, second = 0.0;
    for (const auto& nd : rule) {
      const double dens = std::exp((p.alpha - 1.0) * std::log(nd.from_lo) +
                                   (p.beta - 1.0) * std::log(nd.from_hi) -
                                   num::ln_beta(p.alpha, p.beta));
      mass += nd.w * dens;
      mean += nd.w * nd.x * dens;
      second += nd.w * nd.x * nd.x * dens;
    }
    REQUIRE(mass == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(mean == Catch::Approx(mv.psi).margin(1e-10));
    REQUIRE(second - mean * mean == Catch::Approx(mv.eta).margin(1e-10));
  }
  SECTION("feasibility is enforced") {
    REQUIRE_THROWS_AS(sv::beta_from_mean_var({0.5, 0.25}), std::domain_error);
    REQUIRE_THROWS_AS(sv::beta_from_mean_var({0.5, 0.3}), std::domain_error);
    REQUIRE_THROWS_AS(sv::beta_from_mean_var({0.5, 0.0}), std::domain_error);
    REQUIRE_THROWS_AS(sv::beta_from_mean_var({0.0, 0.01}), std::domain_error);
    REQUIRE_THROWS_AS(sv::beta_from_mean_var({1.0, 0.01}), std::domain_error);
  }
}

TEST_CASE("marginal of one observation given hyperparameters") {
  REQUIRE(sv::marginal_y_given_hyper(1, {0.7, 0.05}) == 0.7);
  REQUIRE(sv::marginal_y_given_hyper(0, {0.7, 0.05}) == Catch::Approx(0.3).margin(1e-15));
  REQUIRE_THROWS_AS(sv::marginal_y_given_hyper(2, {0.5, 0.1}), std::domain_error);

  // Quadrature oracle, including a case with alpha, beta < 1.
  for (const sv::BetaMeanVar mv : {sv::BetaMeanVar{0.5, 1.0 / 12.0},
                                   sv::BetaMeanVar{0.3, 0.01},
                                   sv::BetaMeanVar{0.5, 0.125}}) {
    const auto p = sv::beta_from_mean_var(mv);
    const auto rule = orc::tanh_sinh_rule(257, 0.0, 1.0);
    for (int y : {0, 1}) {
      double integral = 0.0;
      for (const auto& nd : rule) {
        const double dens = std::exp((p.alpha - 1.0) * std::log(nd.from_lo) +
                                     (p.beta - 1.0) * std::log(nd.from_hi) -
                                     num::ln_beta(p.alpha, p.beta));
        integral += nd.w * (y == 1 ? nd.from_lo : nd.from_hi) * dens;
      }
      REQUIRE(integral == Catch::Approx(sv::marginal_y_given_hyper(y, mv)).margin(1e-8));
    }
  }
}

TEST_CASE("posterior of psi") {
  SECTION("one failure updates Beta(1,1) to Beta(1,2)") {
    const auto data = make_data(10, {4}, {0});
    const auto post = sv::psi_posterior_params(data, sv::HyperPrior{1.0, 1.0});
    REQUIRE(post.alpha == 1.0);
    REQUIRE(post.beta == 2.0);
  }
  SECTION("posterior mean is (S+a0)/(|J|+a0+b0)") {
    const auto data = make_data(50, {1, 5, 9, 12, 30}, {1, 0, 1, 1, 0});
    const sv::HyperPrior hp{2.5, 0.7};
    const auto post = sv::psi_posterior_params(data, hp);
    REQUIRE(post.alpha / (post.alpha + post.beta) ==
            Catch::Approx(sv::psi_hat(data, hp)).margin(1e-14));
  }
  SECTION("matches quadrature of the reduced kernel, including a0 < 1") {
    struct Case {
      int s, m;
      double a0, b0;
    };
    for (const Case c : {Case{3, 10, 1.0, 1.0}, Case{0, 4, 0.3, 2.0}, Case{5, 5, 2.0, 0.4}}) {
      std::vector<int> idx, out;
      for (int i = 0; i < c.m; ++i) {
        idx.push_back(i + 1);
        out.push_back(i < c.s ? 1 : 0);
      }
      const auto data = make_data(40, idx, out);
      const sv::HyperPrior hp{c.a0, c.b0};
      const double quad =
          beta_kernel_mean_by_quadrature(c.s + c.a0, c.m - c.s + c.b0);
      REQUIRE(sv::psi_hat(data, hp) == Catch::Approx(quad).margin(1e-8));
    }
  }
}

TEST_CASE("psi_hat closed form and limits") {
  const auto data = make_data(1000, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29},
                              {1, 1, 1, 0, 0, 0, 0, 0, 0, 0});
  SECTION("uniform hyperprior") {
    REQUIRE(sv::psi_hat(data, sv::HyperPrior{1.0, 1.0}) ==
            Catch::Approx(1.0 / 3.0).margin(1e-14));
  }
  SECTION("improper limit gives S/|J|") {
    sv::HyperPrior hp{1.0, 1.0};
    hp.improper_limit = true;
    REQUIRE(sv::psi_hat(data, hp) == Catch::Approx(0.3).margin(1e-15));
  }
  SECTION("strong symmetric prior pulls toward 1/2, monotone in alpha0") {
    REQUIRE(sv::psi_hat(data, sv::HyperPrior{1000.0, 1000.0}) ==
            Catch::Approx(0.5).margin(1e-3));
    REQUIRE(sv::psi_hat(data, sv::HyperPrior{10.0, 1.0}) >
            sv::psi_hat(data, sv::HyperPrior{1.0, 1.0}));
  }
}

TEST_CASE("Horvitz-Thompson estimator") {
  REQUIRE(sv::ht_estimator(make_data(10, {1, 2, 3}, {0, 0, 0})) == 0.0);
  REQUIRE(sv::ht_estimator(make_data(10, {1, 2, 3}, {1, 1, 1})) == 1.0);
  const auto data = make_data(100, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                              {1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
  REQUIRE(sv::ht_estimator(data) == 0.5);
  sv::HyperPrior hp;
  hp.improper_limit = true;
  REQUIRE(sv::psi_hat(data, hp) == sv::ht_estimator(data));
}

TEST_CASE("posterior mean of individual theta") {
  const auto data = make_data(20, {3, 7, 11}, {1, 0, 1});
  const sv::HyperPrior hp{1.0, 1.0};
  const double hat = sv::psi_hat(data, hp);
  SECTION("unsampled units echo psi_hat") {
    REQUIRE(sv::posterior_theta_mean(1, data, hp) == hat);
    REQUIRE(sv::posterior_theta_mean(20, data, hp) == hat);
  }
  SECTION("sampled units move halfway to their outcome") {
    REQUIRE(sv::posterior_theta_mean(3, data, hp) ==
            Catch::Approx((1.0 + hat) / 2.0).margin(1e-15));
    REQUIRE(sv::posterior_theta_mean(7, data, hp) ==
            Catch::Approx(hat / 2.0).margin(1e-15));
  }
  SECTION("index range enforced") {
    REQUIRE_THROWS_AS(sv::posterior_theta_mean(0, data, hp), std::domain_error);
    REQUIRE_THROWS_AS(sv::posterior_theta_mean(21, data, hp), std::domain_error);
  }
  SECTION("sampled means lie between psi_hat and the outcome") {
    num::RngStream rng(num::Seed{808});
    for (int i = 0; i < 100; ++i) {
      const auto d = fuzz_data(rng, 30, 10);
      const sv::HyperPrior h{0.2 + 4.8 * rng.next_double(), 0.2 + 4.8 * rng.next_double()};
      const double ph = sv::psi_hat(d, h);
      for (std::size_t s = 0; s < d.indices.size(); ++s) {
        const double v = sv::posterior_theta_mean(d.indices[s], d, h);
        const double y = d.outcomes[s];
        REQUIRE(v >= std::min(ph, y) - 1e-15);
        REQUIRE(v <= std::max(ph, y) + 1e-15);
      }
    }
  }
}

TEST_CASE("Bayes estimate of the population mean psi_B") {
  SECTION("worked example B=1000, |J|=10, S=3, uniform hyperprior") {
    const auto data = make_data(1000, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29},
                                {1, 1, 1, 0, 0, 0, 0, 0, 0, 0});
    const sv::HyperPrior hp{1.0, 1.0};
    // 1/3 + (10/1000)(0.3 - 1/3)/2
    REQUIRE(sv::bayes_psi_b(data, hp) ==
            Catch::Approx(0.33316666666666667).margin(1e-13));
  }
  SECTION("improper limit collapses to Horvitz-Thompson for any |J|") {
    num::RngStream rng(num::Seed{191});
    sv::HyperPrior hp;
    hp.improper_limit = true;
    for (int i = 0; i < 100; ++i) {
      const auto d = fuzz_data(rng, 40, 12);
      const int s = d.successes();
      if (s == 0 || s == d.sample_size()) continue;  // improper posterior
      REQUIRE(sv::bayes_psi_b(d, hp) == sv::ht_estimator(d));
    }
  }
  SECTION("census under the improper limit is exactly HT") {
    sv::HyperPrior hp;
    hp.improper_limit = true;
    const auto data = make_data(4, {1, 2, 3, 4}, {1, 0, 1, 0});
    REQUIRE(sv::bayes_psi_b(data, hp) == sv::ht_estimator(data));
  }
  SECTION("equals the average of posterior_theta_mean over all units") {
    num::RngStream rng(num::Seed{747});
    for (int i = 0; i < 50; ++i) {
      const auto d = fuzz_data(rng, 60, 15);
      const sv::HyperPrior hp{0.2 + 4.8 * rng.next_double(), 0.2 + 4.8 * rng.next_double()};
      double mean = 0.0;
      for (int j = 1; j <= d.population; ++j) mean += sv::posterior_theta_mean(j, d, hp);
      mean /= d.population;
      REQUIRE(sv::bayes_psi_b(d, hp) == Catch::Approx(mean).margin(1e-12));
    }
  }
}

TEST_CASE("correction bound") {
  SECTION("worked value") {
    REQUIRE(sv::correction_bound(sv::HyperPrior{1.0, 1.0}, 100) ==
            Catch::Approx(0.015).margin(1e-15));
  }
  SECTION("decays like 1/B") {
    const sv::HyperPrior hp{2.0, 3.0};
    REQUIRE(sv::correction_bound(hp, 1000) ==
            Catch::Approx(sv::correction_bound(hp, 100) / 10.0).margin(1e-15));
  }
  SECTION("bounds the actual correction on fuzzed inputs") {
    num::RngStream rng(num::Seed{555});
    for (int i = 0; i < 1000; ++i) {
      const auto d = fuzz_data(rng, 50, 12);
      const sv::HyperPrior hp{0.2 + 4.8 * rng.next_double(), 0.2 + 4.8 * rng.next_double()};
      const double gap = std::fabs(sv::bayes_psi_b(d, hp) - sv::psi_hat(d, hp));
      REQUIRE(gap <= sv::correction_bound(hp, d.population) + 1e-15);
    }
  }
}

TEST_CASE("HT design variance") {
  sv::ThetaVector theta;
  theta.theta.assign(20, 0.5);
  std::vector<int> sample{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SECTION("all theta one half") {
    REQUIRE(sv::ht_variance(theta, sample) == Catch::Approx(0.025).margin(1e-15));
  }
  SECTION("degenerate Bernoullis have zero variance") {
    sv::ThetaVector deg;
    for (int i = 0; i < 20; ++i) deg.theta.push_back(i % 2);
    REQUIRE(sv::ht_variance(deg, sample) == 0.0);
  }
  SECTION("matches the Monte Carlo variance of HT at fixed theta and J") {
    sv::ThetaVector mixed;
    for (int i = 0; i < 20; ++i) mixed.theta.push_back(0.2 + 0.03 * i);
    const double predicted = sv::ht_variance(mixed, sample);
    const long reps = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (long r = 0; r < reps; ++r) {
      num::RngStream rng = num::RngStream::derive(num::Seed{606}, static_cast<std::uint64_t>(r));
      int s = 0;
      for (int j : sample) s += rng.bernoulli(mixed.theta[static_cast<std::size_t>(j - 1)]);
      const double ht = static_cast<double>(s) / sample.size();
      sum += ht;
      sumsq += ht * ht;
    }
    const double mean = sum / reps;
    const double var = sumsq / reps - mean * mean;
    REQUIRE(var == Catch::Approx(predicted).epsilon(0.05));
  }
}

TEST_CASE("simulate_survey") {
  sv::ThetaVector theta;
  theta.theta = {0.1, 0.9, 0.4, 0.6, 0.5};
  SECTION("census selects every index") {
    num::RngStream rng(num::Seed{21});
    const auto data = sv::simulate_survey(rng, theta, 5);
    REQUIRE(data.indices == std::vector<int>{1, 2, 3, 4, 5});
  }
  SECTION("all-zero theta yields all-zero outcomes") {
    sv::ThetaVector zero;
    zero.theta.assign(8, 0.0);
    num::RngStream rng(num::Seed{22});
    const auto data = sv::simulate_survey(rng, zero, 4);
    for (int y : data.outcomes) REQUIRE(y == 0);
  }
  SECTION("replay determinism") {
    num::RngStream a(num::Seed{23}), b(num::Seed{23});
    const auto da = sv::simulate_survey(a, theta, 3);
    const auto db = sv::simulate_survey(b, theta, 3);
    REQUIRE(da.indices == db.indices);
    REQUIRE(da.outcomes == db.outcomes);
  }
  SECTION("sample size bounds") {
    num::RngStream rng(num::Seed{24});
    REQUIRE_THROWS_AS(sv::simulate_survey(rng, theta, 0), std::domain_error);
    REQUIRE_THROWS_AS(sv::simulate_survey(rng, theta, 6), std::domain_error);
  }
  SECTION("design probability is 1/C(B,n)") {
    num::RngStream rng(num::Seed{29});
    const auto data = sv::simulate_survey(rng, theta, 2);
    REQUIRE(data.design_prob == Catch::Approx(0.1).margin(1e-12));  // C(5,2) = 10
  }
  SECTION("generative frequency of Y=1 matches psi") {
    const sv::BetaMeanVar mv{0.3, 0.01};
    const long reps = 100000;
    long ones = 0, total = 0;
    for (long r = 0; r < reps; ++r) {
      num::RngStream rng = num::RngStream::derive(num::Seed{25}, static_cast<std::uint64_t>(r));
      const auto th = sv::simulate_hierarchical(rng, 5, mv);
      const auto data = sv::simulate_survey(rng, th, 3);
      for (int y : data.outcomes) {
        ones += y;
        ++total;
      }
    }
    const double freq = static_cast<double>(ones) / total;
    const double se = std::sqrt(0.3 * 0.7 / static_cast<double>(total));
    REQUIRE(std::fabs(freq - 0.3) < 3.0 * se);
  }
}

TEST_CASE("simulate_hierarchical") {
  SECTION("sample mean near psi at the feasibility midpoint") {
    const sv::BetaMeanVar mv{0.5, 0.125};
    num::RngStream rng(num::Seed{26});
    const auto theta = sv::simulate_hierarchical(rng, 100000, mv);
    const double se = std::sqrt(mv.eta / theta.population());
    REQUIRE(std::fabs(theta.psi_b() - 0.5) < 3.0 * se);
  }
  SECTION("uniform special case passes a KS check") {
    const sv::BetaMeanVar mv{0.5, 1.0 / 12.0};
    num::RngStream rng(num::Seed{27});
    auto theta = sv::simulate_hierarchical(rng, 100000, mv);
    std::sort(theta.theta.begin(), theta.theta.end());
    double d = 0.0;
    const double n = theta.theta.size();
    for (std::size_t i = 0; i < theta.theta.size(); ++i) {
      const double x = theta.theta[i];
      d = std::max(d, std::fabs((i + 1) / n - x));
      d = std::max(d, std::fabs(x - i / n));
    }
    REQUIRE(d < 1.358 / std::sqrt(n));  // 5% critical value
  }
  SECTION("replay determinism") {
    const sv::BetaMeanVar mv{0.4, 0.02};
    num::RngStream a(num::Seed{28}), b(num::Seed{28});
    REQUIRE(sv::simulate_hierarchical(a, 50, mv).theta ==
            sv::simulate_hierarchical(b, 50, mv).theta);
  }
}

TEST_CASE("HT is design-unbiased for the population mean under SRS") {
  sv::ThetaVector theta;
  for (int i = 0; i < 40; ++i) theta.theta.push_back(0.1 + 0.02 * i);
  const double psi_b = theta.psi_b();
  const long reps = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (long r = 0; r < reps; ++r) {
    num::RngStream rng = num::RngStream::derive(num::Seed{1212}, static_cast<std::uint64_t>(r));
    const double ht = sv::ht_estimator(sv::simulate_survey(rng, theta, 8));
    sum += ht;
    sumsq += ht * ht;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  REQUIRE(std::fabs(mean - psi_b) < 3.0 * se);
}

TEST_CASE("all estimators stay inside [0,1]") {
  num::RngStream rng(num::Seed{1313});
  for (int i = 0; i < 500; ++i) {
    const auto d = fuzz_data(rng, 60, 15);
    sv::HyperPrior hp{0.05 + 8.0 * rng.next_double(), 0.05 + 8.0 * rng.next_double()};
    if (i % 4 == 0 && d.successes() > 0 && d.successes() < d.sample_size()) {
      hp.improper_limit = true;
    }
    for (double v : {sv::psi_hat(d, hp), sv::ht_estimator(d), sv::bayes_psi_b(d, hp),
                     sv::posterior_theta_mean(1, d, hp),
                     sv::posterior_theta_mean(d.population, d, hp)}) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
  }
}

TEST_CASE("SurveyData validation") {
  REQUIRE_THROWS_AS(make_data(10, {}, {}), std::domain_error);
  REQUIRE_THROWS_AS(make_data(10, {1, 1}, {0, 1}), std::domain_error);   // duplicate
  REQUIRE_THROWS_AS(make_data(10, {0}, {1}), std::domain_error);          // below range
  REQUIRE_THROWS_AS(make_data(10, {11}, {1}), std::domain_error);         // above range
  REQUIRE_THROWS_AS(make_data(10, {1, 2}, {1}), std::domain_error);       // length mismatch
  REQUIRE_THROWS_AS(make_data(10, {1, 2}, {1, 2}), std::domain_error);    // outcome not 0/1
  REQUIRE_THROWS_AS((sv::HyperPrior{0.0, 1.0}.validate()), std::domain_error);
}
