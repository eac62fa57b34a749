#pragma once

// Experiment execution: turns a validated config into chains, data files
// under the run directory, and a manifest. Data files depend only on the
// config, so a rerun reproduces them byte for byte; wall-clock timings live
// in the manifest alone.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "shmc/cli/config.hpp"

namespace shmc::cli {

// Relative output dirs are rooted at $SHMC_OUTPUT_ROOT when it is set.
std::filesystem::path resolve_output_dir(const std::string& output_dir);

struct RunOutcome {
  std::filesystem::path run_dir;
  std::filesystem::path manifest_path;
  nlohmann::json manifest;
};

RunOutcome run_experiment(const ExperimentConfig& cfg);

struct CompareOutcome {
  std::string report;  // aligned table plus verdict, ready to print
  std::string verdict;
  int shared_checkpoints = 0;
  int skipped_checkpoints = 0;
};

// Joins the checkpoint series of two run manifests on matching evolution
// times and reports which run reaches lower error. Demands the same
// experiment and histogram spec (exit-2 class mismatch otherwise).
CompareOutcome compare_runs(const std::filesystem::path& manifest_a,
                            const std::filesystem::path& manifest_b);

}  // namespace shmc::cli
