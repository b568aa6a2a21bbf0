#pragma once
// Executes the selected checks of an experiment config and writes the
// summary.json / per-check CSV artifacts.

#include "levylab/config.hpp"

namespace levylab {

struct CheckOutcome {
  bool pass = false;
  double max_residual = 0;
  double tolerance = 0;
  nlohmann::json extra;  // check-specific summary fields
};

// exit code: 0 all selected checks pass, 1 a check failed
int run_experiment(const ExperimentConfig& cfg);

// single check; throws ConfigError when the config lacks what the check needs
CheckOutcome run_check(const std::string& name, const ExperimentConfig& cfg);

}  // namespace levylab
