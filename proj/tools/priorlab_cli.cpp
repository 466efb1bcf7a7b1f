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
// Command-line front end. Subcommands: oneway-bf, median-curve,
// oneway-asymptotics, survey-estimate, verify. Exit codes: 0 success,
// 1 verification failure, 2 usage/content error, 3 I/O error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "priorlab/config.hpp"
#include "priorlab/io.hpp"
#include "priorlab/numerics.hpp"
#include "priorlab/oneway.hpp"
#include "priorlab/oracles.hpp"
#include "priorlab/survey.hpp"
#include "priorlab/verify.hpp"
#include "priorlab/version.hpp"

namespace fs = std::filesystem;
namespace num = priorlab::numerics;
namespace ow = priorlab::oneway;
namespace sv = priorlab::survey;
namespace orc = priorlab::oracle;
namespace io = priorlab::io;
namespace cfg = priorlab::config;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Stream index reserved for frozen-mean draws so replicate streams stay
// untouched.
constexpr std::uint64_t kFrozenMeanStream = 0xF00DF00D00000001ull;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double log10_of_log(double natural_log) { return natural_log / std::numbers::ln10; }

std::string join_command_line(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) {
    if (i) line += ' ';
    line += argv[i];
  }
  return line;
}

// Common run options shared by the table-producing subcommands.
struct RunOptions {
  std::uint64_t seed = 0;
  long reps = 1;
  std::string out_dir;
  std::string format = "csv";
  std::string config_path;
  int threads = 1;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App* sub, bool with_reps = true) {
    seed_opt = sub->add_option("--seed", seed, "RNG seed (64-bit)");
    if (with_reps) reps_opt = sub->add_option("--reps", reps, "Number of replicates");
    out_opt = sub->add_option("--out", out_dir, "Output directory");
    format_opt = sub->add_option("--format", format, "Table format: csv or json")
                     ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", config_path, "Experiment config file (JSON)");
    threads_opt = sub->add_option("--threads", threads, "Replicate-parallel threads")
                      ->check(CLI::PositiveNumber);
  }

  // Fill anything the user did not pass from the config file.
  void apply_config(const cfg::ExperimentConfig& file) {
    if (seed_opt && seed_opt->count() == 0) seed = file.run.seed;
    if (reps_opt && reps_opt->count() == 0) reps = file.run.replicates;
    if (out_opt && out_opt->count() == 0) out_dir = file.run.out_dir;
    if (format_opt && format_opt->count() == 0) format = file.run.format;
    if (threads_opt && threads_opt->count() == 0) threads = file.run.threads;
  }
};

// Loads the config file when given; remembers its hash for the manifest.
struct ConfigSource {
  std::optional<cfg::ExperimentConfig> file;
  std::string hash = "none";

  void load(const std::string& path) {
    if (path.empty()) return;
    std::string raw;
    file = cfg::load_config(path, &raw);
    hash = io::fnv1a_hex(raw);
  }
};

// Either a directory sink (files + manifest) or stdout.
struct OutputSink {
  std::optional<fs::path> dir;
  std::vector<std::string> written;

  explicit OutputSink(const std::string& out_dir) {
    if (!out_dir.empty()) {
      dir = fs::path(out_dir);
      std::error_code ec;
      fs::create_directories(*dir, ec);
      if (ec) throw io::IoError("cannot create output directory " + out_dir);
    }
  }

  void emit(const std::string& name, const std::string& content) {
    if (dir) {
      io::write_file(*dir / name, content);
      written.push_back(name);
    } else {
      std::fwrite(content.data(), 1, content.size(), stdout);
    }
  }

  void finalize_manifest(const std::string& command_line, const ConfigSource& config,
                         std::uint64_t seed) {
    if (!dir) return;
    io::RunManifest manifest;
    manifest.command_line = command_line;
    manifest.config_hash = config.hash;
    manifest.seed = seed;
    manifest.version = priorlab::kVersion;
    manifest.timestamp = io::utc_timestamp_now();
    manifest.outputs = written;
    io::write_manifest(*dir / "manifest.json", manifest);
  }
};

std::string render_table(const io::CsvTable& table, const std::string& format,
                         const std::string& command) {
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc.update(table.to_json());
    return doc.dump(2) + "\n";
  }
  return table.to_string();
}

// ---------------------------------------------------------------------------
// one-way data file:  CSV with header "group,value", one observation per line
// ---------------------------------------------------------------------------

struct OneWayFile {
  std::vector<int> group_sizes;
  ow::OneWaySufficient data;
};

OneWayFile read_oneway_file(const fs::path& path) {
  const std::string text = io::read_file(path);
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  const auto fail = [&](const std::string& msg) {
    throw io::ParseError(path.string() + ":" + std::to_string(lineno) + ": " + msg);
  };
  ++lineno;
  if (!std::getline(in, line)) fail("empty file, expected header \"group,value\"");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "group,value") fail("expected header \"group,value\", got \"" + line + "\"");
  std::map<int, std::pair<int, double>> groups;  // group -> (count, sum)
  double sum_sq = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail("expected exactly 2 fields");
    }
    int group = 0;
    double value = 0.0;
    try {
      std::size_t used = 0;
      group = std::stoi(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail("group must be a positive integer, got \"" + line.substr(0, comma) + "\"");
    }
    if (group < 1) fail("group must be >= 1");
    const std::string value_text = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      value = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail("value must be a real number, got \"" + value_text + "\"");
    }
    if (!std::isfinite(value)) fail("value must be finite");
    auto& [count, sum] = groups[group];
    ++count;
    sum += value;
    sum_sq += value * value;
  }
  if (groups.empty()) fail("no observations");
  OneWayFile result;
  int expected = 1;
  for (const auto& [group, stats] : groups) {
    if (group != expected) {
      throw io::ParseError(path.string() + ": groups must be contiguous 1..k; missing group " +
                           std::to_string(expected));
    }
    ++expected;
    result.group_sizes.push_back(stats.first);
    result.data.group_sums.push_back(stats.second);
  }
  result.data.sum_sq = sum_sq;
  return result;
}

// ---------------------------------------------------------------------------
// oneway-bf
// ---------------------------------------------------------------------------

struct OneWayBfCmd {
  RunOptions run;
  std::string input_path;
  bool simulate = false;
  int k = 5;
  int n = 10;
  double tau = 1.0;
  double epsilon = 0.3;
  std::vector<double> mu;
  bool freeze_mu = false;
  double prior_model1 = 0.5;

  CLI::Option *k_opt = nullptr, *n_opt = nullptr, *tau_opt = nullptr, *eps_opt = nullptr,
              *mu_opt = nullptr, *freeze_opt = nullptr, *prior_opt = nullptr;

  void attach(CLI::App* sub) {
    sub->add_option("--input", input_path, "One-way data file (CSV: group,value)");
    sub->add_flag("--simulate", simulate, "Simulate datasets instead of reading one");
    k_opt = sub->add_option("--k", k, "Number of groups")->check(CLI::PositiveNumber);
    n_opt = sub->add_option("--n", n, "Common group size")->check(CLI::PositiveNumber);
    tau_opt = sub->add_option("--tau", tau, "Prior standard deviation of each mean");
    eps_opt = sub->add_option("--epsilon", epsilon, "Std dev of the mean-generating normal");
    mu_opt = sub->add_option("--mu", mu, "Fixed true means (comma separated)")->delimiter(',');
    freeze_opt = sub->add_flag("--freeze-mu", freeze_mu,
                               "Draw the means once and reuse them across replicates");
    prior_opt = sub->add_option("--prior-m1", prior_model1, "Prior probability of Model 1");
    run.attach(sub);
  }

  void apply_config(const cfg::ExperimentConfig& file) {
    run.apply_config(file);
    if (k_opt->count() == 0) k = file.oneway.k;
    if (n_opt->count() == 0) n = file.oneway.n;
    if (tau_opt->count() == 0) tau = file.oneway.tau;
    if (eps_opt->count() == 0) epsilon = file.oneway.epsilon;
    if (mu_opt->count() == 0 && file.oneway.mu) mu = *file.oneway.mu;
    if (freeze_opt->count() == 0) freeze_mu = file.oneway.freeze_mu;
    if (prior_opt->count() == 0) prior_model1 = file.oneway.prior_model1;
  }

  int execute(const std::string& command_line, const ConfigSource& config) {
    if (simulate == !input_path.empty()) {
      throw UsageError("oneway-bf: pass exactly one of --input or --simulate");
    }
    io::CsvTable table({"replicate", "k", "n", "tau", "log_f", "log10_f", "post_model2"});
    const auto add_row = [&](long replicate, int k_, int n_, double log_f,
                             const ow::OneWayConfig& config_) {
      table.add_row({std::to_string(replicate), std::to_string(k_), std::to_string(n_),
                     io::format_double(tau), io::format_double(log_f),
                     io::format_double(log10_of_log(log_f)),
                     io::format_double(ow::posterior_prob_model2(log_f, config_))});
    };

    if (!input_path.empty()) {
      const OneWayFile file = read_oneway_file(input_path);
      ow::OneWayConfig config_{file.group_sizes, tau * tau, prior_model1, 1.0 - prior_model1};
      config_.validate();
      const bool balanced = config_.balanced();
      add_row(0, config_.k(), balanced ? config_.group_sizes.front() : 0,
              ow::log_bayes_factor(file.data, config_), config_);
    } else {
      ow::OneWayConfig config_ = ow::balanced_config(k, n, tau * tau);
      config_.prior_model1 = prior_model1;
      config_.prior_model2 = 1.0 - prior_model1;
      config_.validate();
      ow::EffectSpec eff = mu.empty()
                               ? ow::EffectSpec{ow::IidNormalEffects{epsilon * epsilon}}
                               : ow::EffectSpec{ow::FixedEffects{mu}};
      if (freeze_mu) {
        num::RngStream frozen(num::Seed{run.seed}, kFrozenMeanStream);
        eff = ow::EffectSpec{ow::FixedEffects{ow::draw_means(frozen, config_, eff)}};
      }
      std::vector<double> log_f(static_cast<std::size_t>(run.reps));
      orc::for_each_replicate(run.reps, run.threads, [&](long r) {
        num::RngStream rng = num::RngStream::derive(num::Seed{run.seed},
                                                    static_cast<std::uint64_t>(r));
        log_f[static_cast<std::size_t>(r)] =
            ow::log_bayes_factor(ow::simulate_dataset(rng, config_, eff), config_);
      });
      for (long r = 0; r < run.reps; ++r) {
        add_row(r, k, n, log_f[static_cast<std::size_t>(r)], config_);
      }
    }

    OutputSink sink(run.out_dir);
    sink.emit(run.format == "json" ? "oneway_bf.json" : "oneway_bf.csv",
              render_table(table, run.format, "oneway-bf"));
    sink.finalize_manifest(command_line, config, run.seed);
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// median-curve
// ---------------------------------------------------------------------------

struct MedianCurveCmd {
  RunOptions run;
  int n = 10;
  double tau = 1.0;
  double epsilon = 0.3;
  int k_min = 1;
  int k_max = 200;
  std::string csv_path;
  std::string svg_path;

  CLI::Option *n_opt = nullptr, *tau_opt = nullptr, *eps_opt = nullptr, *kmin_opt = nullptr,
              *kmax_opt = nullptr;

  void attach(CLI::App* sub) {
    n_opt = sub->add_option("--n", n, "Common group size")->check(CLI::PositiveNumber);
    tau_opt = sub->add_option("--tau", tau, "Prior standard deviation of each mean");
    eps_opt = sub->add_option("--epsilon", epsilon, "Std dev of the mean-generating normal");
    kmin_opt = sub->add_option("--k-min", k_min, "Smallest k")->check(CLI::PositiveNumber);
    kmax_opt = sub->add_option("--k-max", k_max, "Largest k")->check(CLI::PositiveNumber);
    sub->add_option("--csv", csv_path, "Explicit CSV output path");
    sub->add_option("--svg", svg_path, "Explicit SVG output path");
    run.attach(sub, /*with_reps=*/false);
  }

  void apply_config(const cfg::ExperimentConfig& file) {
    run.apply_config(file);
    if (n_opt->count() == 0) n = file.oneway.n;
    if (tau_opt->count() == 0) tau = file.oneway.tau;
    if (eps_opt->count() == 0) epsilon = file.oneway.epsilon;
    if (kmin_opt->count() == 0) k_min = file.oneway.k_min;
    if (kmax_opt->count() == 0) k_max = file.oneway.k_max;
  }

  int execute(const std::string& command_line, const ConfigSource& config) {
    if (!(tau > 0.0)) throw UsageError("median-curve: tau must be > 0");
    const auto asym = ow::balanced_asymptotics(n, tau * tau, epsilon * epsilon);
    const auto curve = ow::median_curve(k_min, k_max, asym, tau * tau);

    io::CsvTable table({"k", "median_log_f", "median_log10_f"});
    std::vector<std::pair<double, double>> points;
    points.reserve(curve.size());
    for (const auto& pt : curve) {
      table.add_row({std::to_string(pt.k), io::format_double(pt.median_log_f),
                     io::format_double(log10_of_log(pt.median_log_f))});
      points.emplace_back(pt.k, log10_of_log(pt.median_log_f));
    }
    io::ChartSpec chart;
    chart.title = "Median Bayes factor vs number of samples";
    chart.x_label = "k (number of samples)";
    chart.y_label = "log10(median F)";
    chart.x_tick = 25.0;
    const std::string svg = io::svg_line_chart(points, chart);

    OutputSink sink(run.out_dir);
    const std::string csv_text = render_table(table, run.format, "median-curve");
    if (!csv_path.empty()) {
      io::write_file(csv_path, csv_text);
      // Explicit paths still belong in the manifest when one is written.
      if (sink.dir) sink.written.push_back(fs::absolute(csv_path).string());
    } else {
      sink.emit(run.format == "json" ? "median_curve.json" : "median_curve.csv", csv_text);
    }
    if (!svg_path.empty()) {
      io::write_file(svg_path, svg);
      if (sink.dir) sink.written.push_back(fs::absolute(svg_path).string());
    } else if (sink.dir) {
      sink.emit("median_curve.svg", svg);
    }
    sink.finalize_manifest(command_line, config, run.seed);
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// oneway-asymptotics
// ---------------------------------------------------------------------------

struct AsymptoticsCmd {
  RunOptions run;
  int n = 10;
  double tau = 1.0;
  double epsilon = 0.3;

  CLI::Option *n_opt = nullptr, *tau_opt = nullptr, *eps_opt = nullptr;

  void attach(CLI::App* sub) {
    n_opt = sub->add_option("--n", n, "Common group size")->check(CLI::PositiveNumber);
    tau_opt = sub->add_option("--tau", tau, "Prior standard deviation of each mean");
    eps_opt = sub->add_option("--epsilon", epsilon, "Std dev of the mean-generating normal");
    run.attach(sub, /*with_reps=*/false);
  }

  void apply_config(const cfg::ExperimentConfig& file) {
    run.apply_config(file);
    if (n_opt->count() == 0) n = file.oneway.n;
    if (tau_opt->count() == 0) tau = file.oneway.tau;
    if (eps_opt->count() == 0) epsilon = file.oneway.epsilon;
  }

  int execute(const std::string&, const ConfigSource&) {
    const auto asym = ow::balanced_asymptotics(n, tau * tau, epsilon * epsilon);
    const double slope2 = ow::asymptotic_slope(asym);
    const double eps_star = ow::critical_epsilon(n, tau * tau);
    const bool favored = slope2 > 0.0;
    const char* note =
        "the displayed limit applies to 2 log(F)/k; per-k growth of log(F) is half that";
    if (run.format == "json") {
      nlohmann::ordered_json doc;
      doc["command"] = "oneway-asymptotics";
      doc["n"] = n;
      doc["tau"] = tau;
      doc["epsilon"] = epsilon;
      doc["a"] = asym.a;
      doc["slope_2logf_per_k"] = slope2;
      doc["slope_logf_per_k"] = slope2 / 2.0;
      doc["critical_epsilon"] = eps_star;
      doc["submodel_favored_exponentially"] = favored;
      doc["note"] = note;
      std::cout << doc.dump(2) << "\n";
    } else {
      std::printf("a = n tau^2                : %s\n", io::format_double(asym.a).c_str());
      std::printf("slope of 2 log(F)/k        : %s\n", io::format_double(slope2).c_str());
      std::printf("slope of log(F)/k          : %s\n", io::format_double(slope2 / 2.0).c_str());
      std::printf("critical epsilon           : %s\n", io::format_double(eps_star).c_str());
      std::printf("F -> infinity exponentially: %s\n", favored ? "yes" : "no");
      std::printf("note: %s\n", note);
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// survey-estimate
// ---------------------------------------------------------------------------

struct SurveyEstimateCmd {
  RunOptions run;
  std::string input_path;
  bool simulate = false;
  int population = 1000;
  int sample_size = 10;
  double psi = 0.3;
  double eta = 0.01;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  bool improper = false;

  CLI::Option *pop_opt = nullptr, *size_opt = nullptr, *psi_opt = nullptr, *eta_opt = nullptr,
              *a0_opt = nullptr, *b0_opt = nullptr, *improper_opt = nullptr;

  void attach(CLI::App* sub) {
    sub->add_option("--input", input_path, "Survey data file (JSON)");
    sub->add_flag("--simulate", simulate, "Simulate surveys from the Beta hierarchy");
    pop_opt = sub->add_option("--population", population, "Population size B")
                  ->check(CLI::PositiveNumber);
    size_opt = sub->add_option("--sample-size", sample_size, "Sample size |J|")
                   ->check(CLI::PositiveNumber);
    psi_opt = sub->add_option("--psi", psi, "Hyper-mean of the Beta hierarchy");
    eta_opt = sub->add_option("--eta", eta, "Hyper-variance of the Beta hierarchy");
    a0_opt = sub->add_option("--alpha0", alpha0, "Hyperprior Beta alpha0");
    b0_opt = sub->add_option("--beta0", beta0, "Hyperprior Beta beta0");
    improper_opt = sub->add_flag("--improper", improper,
                                 "Use the improper limit alpha0, beta0 -> 0");
    run.attach(sub);
  }

  void apply_config(const cfg::ExperimentConfig& file) {
    run.apply_config(file);
    if (pop_opt->count() == 0) population = file.survey.population;
    if (size_opt->count() == 0) sample_size = file.survey.sample_size;
    if (psi_opt->count() == 0) psi = file.survey.psi;
    if (eta_opt->count() == 0) eta = file.survey.eta;
    if (a0_opt->count() == 0) alpha0 = file.survey.alpha0;
    if (b0_opt->count() == 0) beta0 = file.survey.beta0;
    if (improper_opt->count() == 0) improper = file.survey.improper;
  }

  int execute(const std::string& command_line, const ConfigSource& config) {
    if (simulate == !input_path.empty()) {
      throw UsageError("survey-estimate: pass exactly one of --input or --simulate");
    }
    sv::HyperPrior hp{alpha0, beta0};
    hp.improper_limit = improper;
    hp.validate();

    OutputSink sink(run.out_dir);
    if (!input_path.empty()) {
      const sv::SurveyData data = io::read_survey_data(input_path);
      if (improper && !sv::psi_posterior_proper(data, hp)) {
        std::fprintf(stderr,
                     "warning: improper limit with S=%d of |J|=%d leaves the posterior "
                     "improper; reporting the Horvitz-Thompson value\n",
                     data.successes(), data.sample_size());
      }
      io::CsvTable table(
          {"S", "J", "B", "psi_hat", "ht", "bayes_psi_b", "correction_bound"});
      table.add_row({std::to_string(data.successes()), std::to_string(data.sample_size()),
                     std::to_string(data.population),
                     io::format_double(sv::psi_hat(data, hp)),
                     io::format_double(sv::ht_estimator(data)),
                     io::format_double(sv::bayes_psi_b(data, hp)),
                     io::format_double(sv::correction_bound(hp, data.population))});
      sink.emit(run.format == "json" ? "survey_estimate.json" : "survey_estimate.csv",
                render_table(table, run.format, "survey-estimate"));
    } else {
      const sv::BetaMeanVar mv{psi, eta};
      mv.validate();
      if (sample_size > population) {
        throw UsageError("survey-estimate: sample size exceeds the population");
      }
      struct Row {
        int s, m, b;
        double psi_hat, ht, bayes, bound, psi_b;
      };
      std::vector<Row> rows(static_cast<std::size_t>(run.reps));
      orc::for_each_replicate(run.reps, run.threads, [&](long r) {
        num::RngStream rng = num::RngStream::derive(num::Seed{run.seed},
                                                    static_cast<std::uint64_t>(r));
        const auto theta = sv::simulate_hierarchical(rng, population, mv);
        const auto data = sv::simulate_survey(rng, theta, sample_size);
        rows[static_cast<std::size_t>(r)] = {data.successes(),
                                             data.sample_size(),
                                             data.population,
                                             sv::psi_hat(data, hp),
                                             sv::ht_estimator(data),
                                             sv::bayes_psi_b(data, hp),
                                             sv::correction_bound(hp, data.population),
                                             theta.psi_b()};
      });
      if (improper) {
        long boundary = 0;
        for (const Row& row : rows) {
          if (row.s == 0 || row.s == row.m) ++boundary;
        }
        if (boundary > 0) {
          std::fprintf(stderr,
                       "warning: improper limit left the posterior improper in %ld of %ld "
                       "replicates (S=0 or S=|J|); those rows report the Horvitz-Thompson "
                       "value\n",
                       boundary, run.reps);
        }
      }
      io::CsvTable table({"replicate", "S", "J", "B", "psi_hat", "ht", "bayes_psi_b",
                          "correction_bound", "realized_psi_b", "err_psi_hat", "err_ht",
                          "err_bayes"});
      for (long r = 0; r < run.reps; ++r) {
        const Row& row = rows[static_cast<std::size_t>(r)];
        table.add_row({std::to_string(r), std::to_string(row.s), std::to_string(row.m),
                       std::to_string(row.b), io::format_double(row.psi_hat),
                       io::format_double(row.ht), io::format_double(row.bayes),
                       io::format_double(row.bound), io::format_double(row.psi_b),
                       io::format_double(row.psi_hat - row.psi_b),
                       io::format_double(row.ht - row.psi_b),
                       io::format_double(row.bayes - row.psi_b)});
      }
      sink.emit(run.format == "json" ? "survey_estimate.json" : "survey_estimate.csv",
                render_table(table, run.format, "survey-estimate"));
    }
    sink.finalize_manifest(command_line, config, run.seed);
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyCmd {
  std::string suite = "all";
  std::string level = "quick";
  std::uint64_t seed = 0;
  int threads = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--suite", suite, "Which suite to run")
        ->check(CLI::IsMember({"oneway", "survey", "all"}));
    sub->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    sub->add_option("--seed", seed, "RNG seed (64-bit)");
    sub->add_option("--threads", threads, "Replicate-parallel threads")
        ->check(CLI::PositiveNumber);
  }

  int execute() {
    namespace vf = priorlab::verify;
    const vf::Level lvl = level == "full" ? vf::Level::Full : vf::Level::Quick;
    std::vector<vf::CheckResult> results;
    if (suite == "oneway" || suite == "all") {
      const auto part = vf::run_oneway_suite(num::Seed{seed}, lvl, threads);
      results.insert(results.end(), part.begin(), part.end());
    }
    if (suite == "survey" || suite == "all") {
      const auto part = vf::run_survey_suite(num::Seed{seed}, lvl, threads);
      results.insert(results.end(), part.begin(), part.end());
    }
    std::size_t failures = 0;
    for (const auto& r : results) {
      std::printf("%s  %-42s max dev %.3e  tol %.3e\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.max_deviation, r.tolerance);
      if (!r.pass) {
        ++failures;
        std::printf("      at: %s\n", r.detail.c_str());
      }
    }
    std::printf("verify: %zu/%zu checks passed (suite %s, level %s, seed %llu)\n",
                results.size() - failures, results.size(), suite.c_str(), level.c_str(),
                static_cast<unsigned long long>(seed));
    return failures == 0 ? kExitOk : kExitVerifyFail;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes factors under independence priors: one-way layout and "
               "hierarchical survey estimators, with oracle verification"};
  app.set_version_flag("--version", priorlab::kVersion);
  app.require_subcommand(1);

  OneWayBfCmd oneway_bf;
  MedianCurveCmd median_curve;
  AsymptoticsCmd asymptotics;
  SurveyEstimateCmd survey_estimate;
  VerifyCmd verify_cmd;

  auto* sub_bf = app.add_subcommand("oneway-bf", "Bayes factor for one-way layout data");
  oneway_bf.attach(sub_bf);
  auto* sub_curve =
      app.add_subcommand("median-curve", "Exact median of log F as a function of k");
  median_curve.attach(sub_curve);
  auto* sub_asym =
      app.add_subcommand("oneway-asymptotics", "Large-k slope and critical epsilon");
  asymptotics.attach(sub_asym);
  auto* sub_survey =
      app.add_subcommand("survey-estimate", "Hierarchical survey estimators");
  survey_estimate.attach(sub_survey);
  auto* sub_verify = app.add_subcommand("verify", "Run the oracle agreement suites");
  verify_cmd.attach(sub_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command_line = join_command_line(argc, argv);
  try {
    ConfigSource config;
    if (sub_bf->parsed()) {
      config.load(oneway_bf.run.config_path);
      if (config.file) oneway_bf.apply_config(*config.file);
      return oneway_bf.execute(command_line, config);
    }
    if (sub_curve->parsed()) {
      config.load(median_curve.run.config_path);
      if (config.file) median_curve.apply_config(*config.file);
      return median_curve.execute(command_line, config);
    }
    if (sub_asym->parsed()) {
      config.load(asymptotics.run.config_path);
      if (config.file) asymptotics.apply_config(*config.file);
      return asymptotics.execute(command_line, config);
    }
    if (sub_survey->parsed()) {
      config.load(survey_estimate.run.config_path);
      if (config.file) survey_estimate.apply_config(*config.file);
      return survey_estimate.execute(command_line, config);
    }
    if (sub_verify->parsed()) {
      return verify_cmd.execute();
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const io::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const io::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitIo;
  }
}
