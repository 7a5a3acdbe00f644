#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catlab/comparison.hpp"

namespace catlab::cli {

inline constexpr int kReportSchema = 1;

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;   // measured quantity
  double budget = 0.0;  // threshold it is compared against
  std::string relation;  // how value is compared with budget, e.g. "<=", ">="
  std::string budget_formula;
  std::optional<comparison::ComparisonReport> comparison;
};

struct Metric {
  std::string name;
  double value = 0.0;
};

/// Numeric table, written as CSV next to the report.
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Extra output file (e.g. a curvature table) written next to the report.
struct Artifact {
  std::string name;
  std::string content;
};

struct RunReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config;  // normalized config text
  std::vector<CheckResult> checks;
  std::vector<Metric> metrics;
  std::vector<Series> series;
  std::vector<Artifact> files;  // listed by name under "artifacts"

  bool passed() const;
};

/// Report JSON with a fixed key order and shortest round-trip numbers;
/// non-finite numbers are written as the strings "inf", "-inf" and "nan".
std::string to_json(const RunReport& report);
/// Throws ParseError.
RunReport report_from_json(std::string_view text);

std::string comparison_json(const comparison::ComparisonReport& report);
/// One row per report: center label, kappa, n_triangles, n_probes, max_defect, budget, seed.
std::string comparison_csv(const std::vector<comparison::ComparisonReport>& reports,
                           const std::vector<std::string>& labels);

std::string series_csv(const Series& series);

/// Writes `content` to `path` through a temporary file in the same directory
/// followed by a rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Writes <dir>/<experiment>.json, one CSV per series and the extra artifact
/// files, each atomically. Returns the report path.
std::filesystem::path write_report(const std::filesystem::path& dir, const RunReport& report);

/// CSV per series of the report at `report_path`, written into `out_dir`.
/// A report without series yields no files.
std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& report_path,
                                                 const std::filesystem::path& out_dir);

}  // namespace catlab::cli
