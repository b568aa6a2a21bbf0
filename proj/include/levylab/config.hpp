#pragma once
// Experiment configuration: one JSON file describing the driving law, the
// SDE instance, the scheme, and the checks to run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levylab/kinetic/kinetic.hpp"
#include "levylab/levy/sampler.hpp"
#include "levylab/sde/solver.hpp"

namespace levylab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int n_paths = 10000;
  int n_steps = 4000;
  int threads = 1;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> checks;

  GeneratingTriplet triplet = GeneratingTriplet::brownian(1);
  SamplerOptions sampler;

  bool has_problem = false;
  bool kinetic_problem = false;
  SdeProblem problem;
  std::optional<KineticForce> force;  // set when kinetic_problem

  Scheme scheme = Scheme::euler;
  double dt = 1e-3;
  PicardOptions picard;

  nlohmann::json check_params;  // raw per-check overrides

  double horizon() const { return has_problem ? problem.horizon : default_horizon; }
  double default_horizon = 1.0;
};

// Parses and validates; throws ConfigError with a diagnostic on violations.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

extern const char* const kKnownChecks[10];

}  // namespace levylab
