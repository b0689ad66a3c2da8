/*
 * Copyright 2026 The smoothrl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SMOOTHRL_HARNESS_REPORT_HPP
#define SMOOTHRL_HARNESS_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "smoothrl/errors.hpp"
#include "smoothrl/harness/config.hpp"
#include "smoothrl/harness/metrics.hpp"
#include "smoothrl/harness/training.hpp"

namespace smoothrl::harness {

/// Reads a learning-curve CSV; the header must match kCurveHeader exactly.
inline std::vector<CurveRecord> read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) {
    throw IoError(path + ": header does not match the learning-curve schema");
  }
  std::vector<CurveRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 9) {
      throw IoError(path + ":" + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      CurveRecord r;
      r.episode = detail::parse_uint(fields[0]);
      r.env_steps = detail::parse_uint(fields[1]);
      r.episode_return = detail::parse_double(fields[2]);
      r.smoothness = detail::parse_double(fields[3]);
      r.value_loss = detail::parse_double(fields[4]);
      r.policy_loss = detail::parse_double(fields[5]);
      r.policy_reg = detail::parse_double(fields[6]);
      r.value_reg = detail::parse_double(fields[7]);
      r.wall_seconds = detail::parse_double(fields[8]);
      out.push_back(r);
    } catch (const ConfigError& e) {
      throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

struct RunSummary {
  double final_return = 0.0;
  double final_smoothness = 0.0;
};

/// Mean return and smoothness over the last `window` episodes of a curve.
inline RunSummary final_window(const std::vector<CurveRecord>& curve, std::size_t window) {
  if (curve.empty()) throw IoError("learning curve has no episodes");
  const std::size_t n = std::min(std::max<std::size_t>(window, 1), curve.size());
  RunSummary s;
  for (std::size_t i = curve.size() - n; i < curve.size(); ++i) {
    s.final_return += curve[i].episode_return;
    s.final_smoothness += curve[i].smoothness;
  }
  s.final_return /= static_cast<double>(n);
  s.final_smoothness /= static_cast<double>(n);
  return s;
}

struct ReportRow {
  std::string method;
  std::size_t runs = 0;
  double return_median = 0.0;
  double return_iqr = 0.0;
  double smoothness_median = 0.0;
  double smoothness_iqr = 0.0;
};

/// Per-method median and interquartile range across seeds of the final-window
/// return and smoothness.
inline std::vector<ReportRow> compare_report(const std::map<std::string, std::vector<std::string>>& methods,
                                             std::size_t window = 20) {
  std::vector<ReportRow> rows;
  for (const auto& [method, paths] : methods) {
    if (paths.empty()) throw ConfigError("method '" + method + "' has no curves");
    std::vector<double> returns, smooth;
    for (const auto& p : paths) {
      const RunSummary s = final_window(read_curve(p), window);
      returns.push_back(s.final_return);
      smooth.push_back(s.final_smoothness);
    }
    rows.push_back({method, paths.size(), median(returns), iqr(returns), median(smooth), iqr(smooth)});
  }
  return rows;
}

/// Groups `<env>_<mode>_seed<k>.csv` files of a directory by "<env>/<mode>".
inline std::map<std::string, std::vector<std::string>> discover_runs(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("'" + dir + "' is not a directory");
  static const std::regex pattern(R"(^(.+)_(vanilla|caps|l2c2)_seed(\d+)\.csv$)");
  std::map<std::string, std::vector<std::string>> out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::smatch m;
    const std::string name = p.filename().string();
    if (std::regex_match(name, m, pattern)) out[m[1].str() + "/" + m[2].str()].push_back(p.string());
  }
  return out;
}

inline std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "method,runs,return_median,return_iqr,smoothness_median,smoothness_iqr\n";
  for (const auto& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g,%.10g", r.runs, r.return_median, r.return_iqr,
                  r.smoothness_median, r.smoothness_iqr);
    out << r.method << "," << buf << "\n";
  }
  return out.str();
}

inline std::string report_table(const std::vector<ReportRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.method.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %5s %22s %22s\n", static_cast<int>(width), "method", "runs",
                "return median (IQR)", "smoothness median (IQR)");
  out << buf;
  for (const auto& r : rows) {
    char ret[64], smo[64];
    std::snprintf(ret, sizeof(ret), "%.2f (%.2f)", r.return_median, r.return_iqr);
    std::snprintf(smo, sizeof(smo), "%.4f (%.4f)", r.smoothness_median, r.smoothness_iqr);
    std::snprintf(buf, sizeof(buf), "%-*s %5zu %22s %22s\n", static_cast<int>(width), r.method.c_str(), r.runs,
                  ret, smo);
    out << buf;
  }
  return out.str();
}

}  // namespace smoothrl::harness

#endif  // SMOOTHRL_HARNESS_REPORT_HPP
