#include "catlab/cli/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "catlab/error.hpp"
#include "catlab/format.hpp"

namespace catlab::cli {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

Json comparison_object(const comparison::ComparisonReport& r) {
  Json j;
  j["kappa"] = number(r.kappa);
  j["n_triangles"] = r.n_triangles;
  j["n_probes"] = r.n_probes;
  j["probes_evaluated"] = r.probes_evaluated;
  j["max_perimeter"] = number(r.max_perimeter);
  j["max_defect"] = number(r.max_defect);
  j["budget"] = number(r.budget);
  j["budget_formula"] = r.budget_formula;
  j["degenerate_triangles"] = r.degenerate_triangles;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  if (r.witness) {
    const auto& w = *r.witness;
    Json wj;
    wj["triangle"] = w.triangle;
    wj["vertices"] = {w.vertices[0], w.vertices[1], w.vertices[2]};
    wj["sides"] = {number(w.sides[0]), number(w.sides[1]), number(w.sides[2])};
    wj["side"] = w.side;
    wj["t"] = number(w.t);
    wj["measured"] = number(w.measured);
    wj["model"] = number(w.model);
    j["witness"] = wj;
  }
  return j;
}

comparison::ComparisonReport comparison_from(const Json& j) {
  comparison::ComparisonReport r;
  r.kappa = read_number(j.at("kappa"));
  r.n_triangles = j.at("n_triangles").get<std::size_t>();
  r.n_probes = j.at("n_probes").get<std::size_t>();
  r.probes_evaluated = j.at("probes_evaluated").get<std::size_t>();
  r.max_perimeter = read_number(j.at("max_perimeter"));
  r.max_defect = read_number(j.at("max_defect"));
  r.budget = read_number(j.at("budget"));
  r.budget_formula = j.at("budget_formula").get<std::string>();
  r.degenerate_triangles = j.at("degenerate_triangles").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("witness")) {
    const Json& wj = j["witness"];
    comparison::Witness w;
    w.triangle = wj.at("triangle").get<std::size_t>();
    for (std::size_t k = 0; k < 3; ++k) {
      w.vertices[k] = wj.at("vertices").at(k).get<std::string>();
      w.sides[k] = read_number(wj.at("sides").at(k));
    }
    w.side = wj.at("side").get<int>();
    w.t = read_number(wj.at("t"));
    w.measured = read_number(wj.at("measured"));
    w.model = read_number(wj.at("model"));
    r.witness = w;
  }
  return r;
}

std::string series_file_name(const RunReport& report, const Series& s) {
  return report.experiment + "." + s.name + ".csv";
}

}  // namespace

bool RunReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string to_json(const RunReport& report) {
  Json j;
  j["schema"] = kReportSchema;
  j["experiment"] = report.experiment;
  j["seed"] = report.seed;
  j["passed"] = report.passed();
  j["config"] = report.config;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["value"] = number(c.value);
    cj["relation"] = c.relation;
    cj["budget"] = number(c.budget);
    cj["budget_formula"] = c.budget_formula;
    if (c.comparison) cj["comparison"] = comparison_object(*c.comparison);
    checks.push_back(cj);
  }
  j["checks"] = checks;
  Json metrics = Json::object();
  for (const auto& m : report.metrics) metrics[m.name] = number(m.value);
  j["metrics"] = metrics;
  Json series = Json::array();
  Json artifacts = Json::array();
  for (const auto& s : report.series) {
    Json sj;
    sj["name"] = s.name;
    sj["columns"] = s.columns;
    Json rows = Json::array();
    for (const auto& row : s.rows) {
      Json rj = Json::array();
      for (double v : row) rj.push_back(number(v));
      rows.push_back(rj);
    }
    sj["rows"] = rows;
    series.push_back(sj);
    artifacts.push_back(series_file_name(report, s));
  }
  j["series"] = series;
  for (const auto& f : report.files) artifacts.push_back(f.name);
  j["artifacts"] = artifacts;
  return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    if (j.at("schema").get<int>() != kReportSchema) {
      raise(ErrorCode::ParseError, "unsupported report schema " + j.at("schema").dump());
    }
    RunReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config").get<std::string>();
    for (const Json& cj : j.at("checks")) {
      CheckResult c;
      c.name = cj.at("name").get<std::string>();
      c.passed = cj.at("passed").get<bool>();
      c.value = read_number(cj.at("value"));
      c.relation = cj.at("relation").get<std::string>();
      c.budget = read_number(cj.at("budget"));
      c.budget_formula = cj.at("budget_formula").get<std::string>();
      if (cj.contains("comparison")) c.comparison = comparison_from(cj["comparison"]);
      r.checks.push_back(std::move(c));
    }
    for (const auto& [name, value] : j.at("metrics").items()) r.metrics.push_back({name, read_number(value)});
    for (const Json& sj : j.at("series")) {
      Series s;
      s.name = sj.at("name").get<std::string>();
      s.columns = sj.at("columns").get<std::vector<std::string>>();
      for (const Json& rj : sj.at("rows")) {
        std::vector<double> row;
        for (const Json& v : rj) row.push_back(read_number(v));
        s.rows.push_back(std::move(row));
      }
      r.series.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string comparison_json(const comparison::ComparisonReport& report) {
  return comparison_object(report).dump(2) + "\n";
}

std::string comparison_csv(const std::vector<comparison::ComparisonReport>& reports,
                           const std::vector<std::string>& labels) {
  if (labels.size() != reports.size()) raise(ErrorCode::InvalidArgument, "one label per report");
  std::string out = "center,kappa,n_triangles,n_probes,max_defect,budget,seed\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    out += labels[k] + "," + format_double(r.kappa) + "," + std::to_string(r.n_triangles) + "," +
           std::to_string(r.n_probes) + "," + format_double(r.max_defect) + "," + format_double(r.budget) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

std::string series_csv(const Series& series) {
  std::string out;
  for (std::size_t k = 0; k < series.columns.size(); ++k) out += (k ? "," : "") + series.columns[k];
  out += "\n";
  for (const auto& row : series.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + format_double(row[k]);
    out += "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) raise(ErrorCode::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::filesystem::path write_report(const std::filesystem::path& dir, const RunReport& report) {
  for (const auto& s : report.series) write_atomic(dir / series_file_name(report, s), series_csv(s));
  for (const auto& f : report.files) write_atomic(dir / f.name, f.content);
  const auto path = dir / (report.experiment + ".json");
  write_atomic(path, to_json(report));
  return path;
}

std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& report_path,
                                                 const std::filesystem::path& out_dir) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) raise(ErrorCode::InvalidArgument, "cannot open report '" + report_path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const RunReport report = report_from_json(ss.str());
  std::vector<std::filesystem::path> out;
  for (const auto& s : report.series) {
    const auto path = out_dir / (report.experiment + "." + s.name + ".plot.csv");
    write_atomic(path, series_csv(s));
    out.push_back(path);
  }
  return out;
}

}  // namespace catlab::cli
