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
// File formats: CSV tables (header row, stable column order, 10 significant
// digits), SurveyData as JSON, SVG line charts, and the per-run manifest.
// Data outputs carry no timestamps, so a repeated seed reproduces them
// byte for byte; the timestamp lives only in the manifest.

#ifndef PRIORLAB_IO_HPP_
#define PRIORLAB_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "priorlab/survey.hpp"

namespace priorlab::io {

/// Malformed or invalid file content (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decimal rendering used by every table: 10 significant digits.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

/// Rectangular CSV table with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
      throw std::invalid_argument("CsvTable: row width does not match header");
    }
    rows_.push_back(std::move(cells));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string to_string() const {
    std::string out;
    const auto emit = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
      }
      out += '\n';
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
    return out;
  }

  /// The same table as a single JSON document.
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json doc;
    doc["columns"] = header_;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows_) rows.push_back(row);
    return doc;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading " + path.string());
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw IoError("failed writing " + path.string());
}

/// Write via a temporary in the same directory, then rename into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  write_file(tmp, content);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// SurveyData <-> JSON
// ---------------------------------------------------------------------------
//
// {
//   "population": 1000,
//   "indices": [2, 5, 9],
//   "outcomes": {"2": 1, "5": 0, "9": 1},
//   "design_prob": 1.0
// }
//
// outcomes is keyed by index so a stray key ("Y index outside J") and a
// missing key are both detectable.

inline nlohmann::ordered_json survey_data_to_json(const survey::SurveyData& data) {
  data.validate();
  nlohmann::ordered_json doc;
  doc["population"] = data.population;
  doc["indices"] = data.indices;
  auto& outcomes = doc["outcomes"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < data.indices.size(); ++i) {
    outcomes[std::to_string(data.indices[i])] = data.outcomes[i];
  }
  doc["design_prob"] = data.design_prob;
  return doc;
}

inline survey::SurveyData survey_data_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("survey data: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "population" && key != "indices" && key != "outcomes" &&
        key != "design_prob") {
      throw ParseError("survey data: unknown key \"" + key + "\"");
    }
  }
  if (!doc.contains("population") || !doc.contains("indices") || !doc.contains("outcomes")) {
    throw ParseError("survey data: population, indices and outcomes are required");
  }
  survey::SurveyData data;
  try {
    data.population = doc.at("population").get<int>();
    data.indices = doc.at("indices").get<std::vector<int>>();
    if (doc.contains("design_prob")) data.design_prob = doc.at("design_prob").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("survey data: ") + e.what());
  }
  std::sort(data.indices.begin(), data.indices.end());
  const auto& outcomes = doc.at("outcomes");
  if (!outcomes.is_object()) throw ParseError("survey data: outcomes must be an object");
  std::map<int, int> by_index;
  for (const auto& [key, value] : outcomes.items()) {
    int j = 0;
    try {
      j = std::stoi(key);
    } catch (const std::exception&) {
      throw ParseError("survey data: outcome key \"" + key + "\" is not an index");
    }
    if (!std::binary_search(data.indices.begin(), data.indices.end(), j)) {
      throw ParseError("survey data: outcome for index " + key + " which is not in the sample");
    }
    if (!value.is_number_integer()) {
      throw ParseError("survey data: outcome for index " + key + " must be 0 or 1");
    }
    by_index[j] = value.get<int>();
  }
  for (int j : data.indices) {
    const auto it = by_index.find(j);
    if (it == by_index.end()) {
      throw ParseError("survey data: missing outcome for sampled index " + std::to_string(j));
    }
    data.outcomes.push_back(it->second);
  }
  try {
    data.validate();
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("survey data: ") + e.what());
  }
  return data;
}

inline survey::SurveyData read_survey_data(const std::filesystem::path& path) {
  nlohmann::json doc;
  const std::string text = read_file(path);
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return survey_data_from_json(doc);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_survey_data(const std::filesystem::path& path,
                              const survey::SurveyData& data) {
  write_file(path, survey_data_to_json(data).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// SVG line chart
// ---------------------------------------------------------------------------

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_tick = 25.0;  // tick spacing on the x axis, in data units
};

namespace detail {

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Largest 1/2/5 x 10^m step that produces at most max_ticks intervals.
inline double nice_step(double range, int max_ticks) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) return mag * mult;
  }
  return mag * 10.0;
}

}  // namespace detail

/// Fixed 800x600 chart with one polyline through the given points.
inline std::string svg_line_chart(const std::vector<std::pair<double, double>>& points,
                                  const ChartSpec& spec) {
  if (points.empty()) throw std::invalid_argument("svg_line_chart: no points");
  const double width = 800.0, height = 600.0;
  const double left = 80.0, right = 20.0, top = 50.0, bottom = 70.0;
  double x_min = points.front().first, x_max = x_min;
  double y_min = points.front().second, y_max = y_min;
  for (const auto& [x, y] : points) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double px = (width - left - right) / (x_max - x_min);
  const double py = (height - top - bottom) / (y_max - y_min);
  const auto to_x = [&](double x) { return left + (x - x_min) * px; };
  const auto to_y = [&](double y) { return height - bottom - (y - y_min) * py; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg += "  <text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
         "font-family=\"sans-serif\">" + spec.title + "</text>\n";

  // Axes.
  svg += "  <line x1=\"" + detail::fixed2(left) + "\" y1=\"" + detail::fixed2(height - bottom) +
         "\" x2=\"" + detail::fixed2(width - right) + "\" y2=\"" +
         detail::fixed2(height - bottom) + "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + detail::fixed2(left) + "\" y1=\"" + detail::fixed2(top) +
         "\" x2=\"" + detail::fixed2(left) + "\" y2=\"" + detail::fixed2(height - bottom) +
         "\" stroke=\"black\"/>\n";

  // X ticks at the requested spacing.
  const double x_start = std::ceil(x_min / spec.x_tick) * spec.x_tick;
  for (double x = x_start; x <= x_max + 1e-9; x += spec.x_tick) {
    const double gx = to_x(x);
    svg += "  <line x1=\"" + detail::fixed2(gx) + "\" y1=\"" + detail::fixed2(height - bottom) +
           "\" x2=\"" + detail::fixed2(gx) + "\" y2=\"" + detail::fixed2(height - bottom + 6) +
           "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + detail::fixed2(gx) + "\" y=\"" + detail::fixed2(height - bottom + 22) +
           "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
           detail::tick_label(x) + "</text>\n";
  }

  // Y ticks on a nice grid.
  const double y_step = detail::nice_step(y_max - y_min, 8);
  const double y_start = std::ceil(y_min / y_step) * y_step;
  for (double y = y_start; y <= y_max + 1e-9 * y_step; y += y_step) {
    const double gy = to_y(y);
    svg += "  <line x1=\"" + detail::fixed2(left - 6) + "\" y1=\"" + detail::fixed2(gy) +
           "\" x2=\"" + detail::fixed2(left) + "\" y2=\"" + detail::fixed2(gy) +
           "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + detail::fixed2(left - 10) + "\" y=\"" + detail::fixed2(gy + 4) +
           "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" +
           detail::tick_label(y) + "</text>\n";
  }

  // Axis labels.
  svg += "  <text x=\"" + detail::fixed2(left + (width - left - right) / 2) + "\" y=\"" +
         detail::fixed2(height - 20) +
         "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" +
         spec.x_label + "</text>\n";
  svg += "  <text x=\"24\" y=\"" + detail::fixed2(top + (height - top - bottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 24 " +
         detail::fixed2(top + (height - top - bottom) / 2) + ")\">" + spec.y_label +
         "</text>\n";

  // The data, one polyline.
  svg += "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) svg += ' ';
    svg += detail::fixed2(to_x(points[i].first)) + "," + detail::fixed2(to_y(points[i].second));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string command_line;
  std::string config_hash;  // fnv1a of the config file bytes, or "none"
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;  // ISO 8601 UTC
  std::vector<std::string> outputs;
};

inline std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Written atomically, after all listed outputs exist.
inline void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  for (const auto& name : manifest.outputs) {
    if (!std::filesystem::exists(path.parent_path() / name)) {
      throw IoError("manifest lists missing output " + name);
    }
  }
  nlohmann::ordered_json doc;
  doc["command_line"] = manifest.command_line;
  doc["config_hash"] = manifest.config_hash;
  doc["seed"] = manifest.seed;
  doc["version"] = manifest.version;
  doc["timestamp"] = manifest.timestamp;
  doc["outputs"] = manifest.outputs;
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace priorlab::io

#endif  // PRIORLAB_IO_HPP_
