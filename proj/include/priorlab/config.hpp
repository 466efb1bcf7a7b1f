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
// Experiment configuration file: a JSON document with optional sections
// "run", "oneway" and "survey". Unknown keys are rejected anywhere, and
// every physical constraint is re-validated on load. Command-line flags
// override whatever the file sets.

#ifndef PRIORLAB_CONFIG_HPP_
#define PRIORLAB_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "priorlab/io.hpp"

namespace priorlab::config {

struct RunSection {
  std::uint64_t seed = 0;
  long replicates = 1;
  std::string out_dir;
  std::string format = "csv";  // csv | json
  int threads = 1;
};

struct OneWaySection {
  int n = 10;
  int k = 5;
  int k_min = 1;
  int k_max = 200;
  double tau = 1.0;      // prior standard deviation
  double epsilon = 0.3;  // mean-generating standard deviation
  std::optional<std::vector<double>> mu;
  double prior_model1 = 0.5;
  bool freeze_mu = false;
};

struct SurveySection {
  int population = 1000;
  int sample_size = 10;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  bool improper = false;
  double psi = 0.3;
  double eta = 0.01;
};

struct ExperimentConfig {
  RunSection run;
  OneWaySection oneway;
  SurveySection survey;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const char* section,
                                std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* name : known) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw io::ParseError(std::string("config: unknown key \"") + key + "\" in section " +
                           section);
    }
  }
}

template <class T>
void assign(const nlohmann::json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw io::ParseError(std::string("config: key \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

inline void validate(const ExperimentConfig& cfg);

inline ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw io::ParseError("config: expected a JSON object");
  detail::reject_unknown_keys(doc, "(top level)", {"run", "oneway", "survey"});
  ExperimentConfig cfg;
  if (doc.contains("run")) {
    const auto& run = doc.at("run");
    detail::reject_unknown_keys(run, "run",
                                {"seed", "replicates", "out", "format", "threads"});
    detail::assign(run, "seed", cfg.run.seed);
    detail::assign(run, "replicates", cfg.run.replicates);
    detail::assign(run, "out", cfg.run.out_dir);
    detail::assign(run, "format", cfg.run.format);
    detail::assign(run, "threads", cfg.run.threads);
  }
  if (doc.contains("oneway")) {
    const auto& ow = doc.at("oneway");
    detail::reject_unknown_keys(ow, "oneway",
                                {"n", "k", "k_min", "k_max", "tau", "epsilon", "mu",
                                 "prior_model1", "freeze_mu"});
    detail::assign(ow, "n", cfg.oneway.n);
    detail::assign(ow, "k", cfg.oneway.k);
    detail::assign(ow, "k_min", cfg.oneway.k_min);
    detail::assign(ow, "k_max", cfg.oneway.k_max);
    detail::assign(ow, "tau", cfg.oneway.tau);
    detail::assign(ow, "epsilon", cfg.oneway.epsilon);
    detail::assign(ow, "prior_model1", cfg.oneway.prior_model1);
    detail::assign(ow, "freeze_mu", cfg.oneway.freeze_mu);
    if (ow.contains("mu")) {
      std::vector<double> mu;
      detail::assign(ow, "mu", mu);
      cfg.oneway.mu = std::move(mu);
    }
  }
  if (doc.contains("survey")) {
    const auto& sv = doc.at("survey");
    detail::reject_unknown_keys(sv, "survey",
                                {"population", "sample_size", "alpha0", "beta0",
                                 "improper", "psi", "eta"});
    detail::assign(sv, "population", cfg.survey.population);
    detail::assign(sv, "sample_size", cfg.survey.sample_size);
    detail::assign(sv, "alpha0", cfg.survey.alpha0);
    detail::assign(sv, "beta0", cfg.survey.beta0);
    detail::assign(sv, "improper", cfg.survey.improper);
    detail::assign(sv, "psi", cfg.survey.psi);
    detail::assign(sv, "eta", cfg.survey.eta);
  }
  validate(cfg);
  return cfg;
}

inline void validate(const ExperimentConfig& cfg) {
  const auto fail = [](const std::string& what) { throw io::ParseError("config: " + what); };
  if (cfg.run.replicates < 1) fail("run.replicates must be >= 1");
  if (cfg.run.threads < 1) fail("run.threads must be >= 1");
  if (cfg.run.format != "csv" && cfg.run.format != "json") {
    fail("run.format must be csv or json");
  }
  if (cfg.oneway.n < 1) fail("oneway.n must be >= 1");
  if (cfg.oneway.k < 1) fail("oneway.k must be >= 1");
  if (cfg.oneway.k_min < 1 || cfg.oneway.k_max < cfg.oneway.k_min) {
    fail("oneway needs 1 <= k_min <= k_max");
  }
  if (!(cfg.oneway.tau >= 0.0)) fail("oneway.tau must be >= 0");
  if (!(cfg.oneway.epsilon >= 0.0)) fail("oneway.epsilon must be >= 0");
  if (!(cfg.oneway.prior_model1 >= 0.0) || !(cfg.oneway.prior_model1 <= 1.0)) {
    fail("oneway.prior_model1 must be in [0,1]");
  }
  if (cfg.oneway.mu && static_cast<int>(cfg.oneway.mu->size()) != cfg.oneway.k) {
    fail("oneway.mu must list exactly k means");
  }
  if (cfg.survey.population < 1) fail("survey.population must be >= 1");
  if (cfg.survey.sample_size < 1 || cfg.survey.sample_size > cfg.survey.population) {
    fail("survey.sample_size must be in 1..population");
  }
  if (!(cfg.survey.alpha0 > 0.0) || !(cfg.survey.beta0 > 0.0)) {
    fail("survey.alpha0 and survey.beta0 must be > 0");
  }
  if (!(cfg.survey.psi > 0.0) || !(cfg.survey.psi < 1.0)) fail("survey.psi must be in (0,1)");
  if (!(cfg.survey.eta > 0.0) ||
      !(cfg.survey.eta < cfg.survey.psi * (1.0 - cfg.survey.psi))) {
    fail("survey.eta must be in (0, psi(1-psi))");
  }
}

/// Load and validate a config file; also returns the raw bytes so callers
/// can hash them into the manifest.
inline ExperimentConfig load_config(const std::filesystem::path& path, std::string* raw = nullptr) {
  const std::string text = io::read_file(path);
  if (raw) *raw = text;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::ParseError(path.string() + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const io::ParseError& e) {
    throw io::ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace priorlab::config

#endif  // PRIORLAB_CONFIG_HPP_
