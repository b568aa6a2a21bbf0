// Experiment runner CLI: loads a JSON config, runs the selected checks, and
// writes summary.json plus per-check CSVs. Exit code 0 = all checks pass,
// 1 = a check failed, 2 = config problem.

#include <cstring>
#include <iostream>

#include "CLI11.hpp"
#include "levylab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"levylab: Levy-driven degenerate SDE laboratory"};

  std::string config_path;
  std::string out_dir;
  std::string kernels_lane;
  std::vector<std::string> checks;
  std::int64_t seed_override = -1;
  int threads_override = 0;

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--seed", seed_override, "override the master seed");
  app.add_option("--out", out_dir, "override the output directory");
  app.add_option("--threads", threads_override, "override the worker thread count");
  app.add_option("--check", checks, "run only the named check(s); repeatable");
  app.add_option("--kernels", kernels_lane, "compute kernel lane: auto|scalar|avx2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!kernels_lane.empty()) {
    if (kernels_lane == "scalar") {
      levylab::kernels::force_lane(levylab::kernels::Lane::scalar);
    } else if (kernels_lane == "avx2") {
      if (!levylab::kernels::avx2_available()) {
        std::cerr << "error: avx2 kernels unavailable on this machine\n";
        return 2;
      }
      levylab::kernels::force_lane(levylab::kernels::Lane::avx2);
    } else if (kernels_lane != "auto") {
      std::cerr << "error: unknown kernel lane '" << kernels_lane << "'\n";
      return 2;
    }
  }

  try {
    levylab::ExperimentConfig cfg = levylab::load_config(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads_override > 0) cfg.threads = threads_override;
    if (!checks.empty()) cfg.checks = checks;
    for (const std::string& c : cfg.checks) {
      bool known = false;
      for (const char* k : levylab::kKnownChecks) known = known || (c == k);
      if (!known) {
        std::cerr << "error: unknown check '" << c << "'\n";
        return 2;
      }
    }
    int code = levylab::run_experiment(cfg);
    std::cerr << (code == 0 ? "all checks passed\n" : "some checks FAILED\n");
    return code;
  } catch (const levylab::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
