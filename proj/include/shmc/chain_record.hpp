#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shmc/diagnostics/histogram.hpp"

namespace shmc {

// One row of the error-vs-evolution-time series taken at a checkpoint.
// cpu_seconds is the only machine-dependent field and is kept out of the
// deterministic data files (it is reported through the manifest).
struct CheckpointRow {
  std::uint64_t iteration = 0;
  double evolution_time = 0.0;
  double error = 0.0;
  double cpu_seconds = 0.0;
};

// Everything a finished chain reports back: thinned position snapshots,
// accept flags for the sampling phase, the cumulative density histogram, the
// checkpoint series, and timings. grad_seconds accumulates trajectory
// integration time (dominated by gradient sums), the cost batching cuts.
struct ChainRecord {
  std::uint64_t n_burnin = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t burnin_accepts = 0;
  std::uint64_t sampling_accepts = 0;
  std::vector<std::uint8_t> accept_flags;  // sampling phase, kept only on request

  double evolution_time = 0.0;  // T_E after the full run (burn-in included)
  double cpu_seconds = 0.0;     // wall time of the sampling phase
  double grad_seconds = 0.0;

  std::vector<std::uint64_t> sample_iterations;
  std::vector<std::vector<double>> samples;  // flattened D*N snapshots

  std::optional<DensityHistogram> histogram;
  std::vector<CheckpointRow> checkpoints;

  double acceptance_rate() const {
    if (n_samples == 0) return 0.0;
    return static_cast<double>(sampling_accepts) / static_cast<double>(n_samples);
  }
};

}  // namespace shmc
