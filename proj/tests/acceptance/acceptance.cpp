// Desk-scale acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "catlab/cli/config.hpp"
#include "catlab/cli/experiments.hpp"
#include "catlab/cli/report.hpp"
#include "catlab/error.hpp"

using namespace catlab;
using namespace catlab::cli;
namespace fs = std::filesystem;

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      notes.push_back(what);
    }
  }
};

Config load(const std::string& file, const Overrides& overrides) {
  Config c = Config::load(fs::path(CATLAB_EXPERIMENTS_DIR) / file);
  for (const auto& [k, v] : overrides) c.set(k, v);
  return c;
}

const Metric* metric(const RunReport& r, const std::string& name) {
  for (const auto& m : r.metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

// Every check of the report must hold.
void require_checks(Outcome& out, const RunReport& r) {
  for (const auto& c : r.checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %.6g %s %.6g", c.name.c_str(), c.value, c.relation.c_str(), c.budget);
    out.require(c.passed, buf);
  }
}

RunReport run(const std::string& file, const Overrides& overrides, unsigned jobs = 1) {
  RunOptions o;
  o.jobs = jobs;
  return run_experiment(load(file, overrides), o);
}

Outcome model_self() {
  Outcome out;
  const auto r = run("model_selfcomparison.cfg", {{"check.n_triangles", "10000"}, {"check.kappas", "-1, 0, 1"}});
  require_checks(out, r);
  out.require(r.checks.size() == 3, "three model surfaces");
  for (const auto& c : r.checks) out.require(c.budget <= 1e-9, c.name + ": budget above 1e-9");
  return out;
}

Outcome reshetnyak() {
  Outcome out;
  const auto r = run("reshetnyak.cfg", {{"space.h", "0.01"},
                                        {"space.r", "0.8"},
                                        {"space.factor", "2/(1-r2)"},
                                        {"check.curvature_tolerance", "1e-2"},
                                        {"check.curvature_target", "-1"},
                                        {"check.kappa", "-1"},
                                        {"check.n_triangles", "10000"}});
  require_checks(out, r);
  return out;
}

Outcome kappa_bar() {
  Outcome out;
  const auto r = run("kappa_bar.cfg", {});
  require_checks(out, r);
  for (const char* name : {"known_value", "boundary_value", "only_local_branch"}) {
    out.require(std::any_of(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; }),
                std::string("missing check ") + name);
  }
  return out;
}

Outcome nonpos() {
  Outcome out;
  const auto r = run("nonpos.cfg", {{"space.h", "0.02"}, {"space.factor", "1"}, {"transform.R", "1"}});
  require_checks(out, r);
  return out;
}

Outcome pipeline() {
  Outcome out;
  const auto r = run("pipeline.cfg", {{"transform.r", "1"}, {"check.kappa", "-1"}, {"check.ball_radius", "0.2"}});
  require_checks(out, r);
  const Metric* half = metric(r, "R_half");
  const Metric* radius = metric(r, "step_radius");
  out.require(half && radius && radius->value == 1.0 && std::abs(half->value - std::log(3.0)) <= 1e-6,
              "R(0.5) against ln 3");
  return out;
}

Outcome contraction() {
  Outcome out;
  const auto r = run("contraction.cfg", {{"flow.tau", "1e-3"}, {"flow.T", "1, 2"}});
  require_checks(out, r);
  return out;
}

Outcome fuglede() {
  Outcome out;
  const auto r = run("fuglede.cfg", {{"check.ratio_min", "1.8"}});
  require_checks(out, r);
  return out;
}

Outcome plateau() {
  Outcome out;
  const auto r = run("plateau.cfg", {});
  require_checks(out, r);
  std::size_t bounds = 0;
  for (const auto& c : r.checks) {
    if (c.name.ends_with("_energy_bound")) ++bounds;
  }
  out.require(bounds == 3, "three boundary curves");
  return out;
}

Outcome determinism() {
  Outcome out;
  std::vector<fs::path> cfgs;
  for (const auto& e : fs::directory_iterator(CATLAB_EXPERIMENTS_DIR)) {
    if (e.path().extension() == ".cfg") cfgs.push_back(e.path());
  }
  std::sort(cfgs.begin(), cfgs.end());
  out.require(!cfgs.empty(), "no experiment configs");
  for (const auto& path : cfgs) {
    const Config c = Config::load(path);
    RunOptions serial, wide;
    wide.jobs = 8;
    const std::string a = to_json(run_experiment(c, serial));
    const std::string b = to_json(run_experiment(c, serial));
    const std::string w = to_json(run_experiment(c, wide));
    out.require(a == b, path.filename().string() + ": rerun differs");
    out.require(a == w, path.filename().string() + ": --jobs 8 differs");
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_seconds;  // 0: none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "model-space self-comparison", 10, model_self},
      {2, "Reshetnyak calibration", 60, reshetnyak},
      {3, "kappa-bar arithmetic", 1, kappa_bar},
      {4, "nonpositive transform", 120, nonpos},
      {5, "two-step pipeline", 120, pipeline},
      {6, "gradient-flow contraction", 30, contraction},
      {7, "Fuglede inequality", 60, fuglede},
      {8, "Plateau energy bound", 120, plateau},
      {9, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.passed = false;
      out.notes.push_back(std::string("error: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      out.passed = false;
      char buf[96];
      std::snprintf(buf, sizeof buf, "runtime %.2f s >= %.0f s", seconds, c.limit_seconds);
      out.notes.push_back(buf);
    }
    std::printf("%s criterion %d (%s) %.2f s\n", out.passed ? "PASS" : "FAIL", c.id, c.title, seconds);
    for (const auto& n : out.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!out.passed) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
