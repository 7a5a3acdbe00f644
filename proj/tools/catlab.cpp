#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catlab/cli/config.hpp"
#include "catlab/cli/experiments.hpp"
#include "catlab/cli/report.hpp"
#include "catlab/error.hpp"
#include "catlab/format.hpp"

namespace fs = std::filesystem;
using namespace catlab;

namespace {

constexpr int kExitFail = 2;
constexpr int kExitConfig = 3;
constexpr int kExitError = 1;

fs::path default_out() {
  if (const char* env = std::getenv("CATLAB_OUT"); env != nullptr && *env != '\0') return env;
  return "out";
}

int run_command(const std::string& config_path, std::optional<std::uint64_t> seed, unsigned jobs,
                std::optional<std::string> out_dir) {
  cli::Config config;
  try {
    config = cli::Config::load(config_path);
  } catch (const Error& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  }

  cli::RunOptions options;
  options.seed = seed;
  options.jobs = jobs;
  const auto start = std::chrono::steady_clock::now();
  cli::RunReport report;
  try {
    report = cli::run_experiment(config, options);
  } catch (const Error& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = out_dir ? fs::path(*out_dir) : default_out();
  fs::create_directories(dir);
  const fs::path path = cli::write_report(dir, report);
  // Wall-clock lives beside the report so the report itself stays reproducible.
  cli::write_atomic(dir / (report.experiment + ".timing.json"),
                    "{\"experiment\": \"" + report.experiment + "\", \"wall_seconds\": " + format_double(seconds) + "}\n");

  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "pass " : "FAIL ") << c.name << ": " << format_double(c.value) << ' ' << c.relation
              << ' ' << format_double(c.budget) << '\n';
  }
  std::cout << "report: " << path.string() << '\n';
  return report.passed() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature comparison experiments on discrete metric spaces"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::optional<std::string> out_dir;
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory (default $CATLAB_OUT or ./out)");

  auto* list = app.add_subcommand("list", "list registered experiments");

  auto* plot = app.add_subcommand("plotdata", "write one CSV per series of a report");
  std::string report_path;
  std::optional<std::string> plot_out;
  plot->add_option("report", report_path, "report JSON")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "output directory (default: next to the report)");

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    std::size_t width = 0;
    for (const auto& e : cli::experiment_registry()) width = std::max(width, e.name.size());
    for (const auto& e : cli::experiment_registry()) {
      std::cout << e.name << std::string(width + 2 - e.name.size(), ' ') << e.description << '\n';
    }
    return 0;
  }
  if (*plot) {
    try {
      const fs::path dir = plot_out ? fs::path(*plot_out) : fs::path(report_path).parent_path();
      if (!dir.empty()) fs::create_directories(dir);
      for (const auto& p : cli::emit_plotdata(report_path, dir)) std::cout << p.string() << '\n';
    } catch (const Error& e) {
      std::cerr << report_path << ": " << e.what() << '\n';
      return kExitError;
    }
    return 0;
  }
  try {
    return run_command(config_path, seed, jobs, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
