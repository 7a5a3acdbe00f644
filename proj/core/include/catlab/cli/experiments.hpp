#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catlab/cli/config.hpp"
#include "catlab/cli/report.hpp"

namespace catlab::cli {

struct ExperimentInfo {
  std::string name;
  std::string description;
};

/// Registered experiments in listing order.
const std::vector<ExperimentInfo>& experiment_registry();

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's `seed`
  unsigned jobs = 1;                  // worker bound for triangle sampling
};

/// Runs the experiment named by the config's `experiment` key. Throws
/// ConfigError for unknown experiments, unknown keys and bad values.
RunReport run_experiment(const Config& config, const RunOptions& options = {});

}  // namespace catlab::cli
