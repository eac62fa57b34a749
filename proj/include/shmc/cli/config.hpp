#pragma once

// Experiment configuration: a single JSON document describing which target
// to sample, with which sampler kinds, schedule and outputs. parse_config
// rejects unknown keys and out-of-range values with the JSON pointer of the
// offending field, and to_json(parse_config(x)) round-trips to the same
// resolved document.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "shmc/samplers/kind.hpp"
#include "shmc/samplers/particle_chain.hpp"
#include "shmc/schedule.hpp"

namespace shmc::cli {

// Anything wrong with a config document: parse failures, unknown keys,
// missing fields, values out of range. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A failure while executing a valid config (numerics, I/O). Maps to exit 3.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentId { test_example, dyson, double_well, gmm, error_sweep };
enum class ReferenceKind { none, semicircle, mean_field, quadrature };

std::string to_string(ExperimentId id);
std::string to_string(ReferenceKind kind);
ExperimentId experiment_from_string(const std::string& s);
ReferenceKind reference_from_string(const std::string& s);

struct HistogramSpec {
  double lo = -2.0;
  double hi = 2.0;
  int bins = 100;
  int coord = 0;  // coordinate binned for parameter targets; 0 for particles
};

struct TestExampleParams {
  int n_particles = 500;
  double alpha = 1.0;
  double beta = 1.0;
  double mass = 1.0;
};

struct DysonParams {
  int n_particles = 500;
  double delta0 = 0.01;
  double weight = 1.0;
  double mass = 1.0;
};

struct DoubleWellParams {
  double height = 20.0;
  double half_width = 1.0;
  double lambda = 0.05;
  double beta = 1.0;
  double mass = 1.0;
};

struct GmmParams {
  int n_data = 100;
  std::uint64_t data_seed = 42;
  double theta1 = 0.0;
  double theta2 = 2.0;
  double sigma1_sq = 10.0;
  double sigma2_sq = 1.0;
  double sigma_y_sq = 0.5;
  double mass = 1.0;
  bool sand = true;       // "auto" places sand at the two density modes; "none" disables it
  double traj_factor = 0.4;  // when a segment has leapfrog_steps 0, L = round(traj_factor * d_w / dt)
};

struct SweepParams {
  bool deterministic = false;  // "batch" compares batched vs exact trajectories
  int n_particles = 50;
  int batch_size = 1;
  double horizon = 1.0;
  int n_replicas = 1000;
  std::vector<double> step_sizes;
  double init_sigma = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double mass = 1.0;
};

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::test_example;
  std::uint64_t seed = 1;
  std::string output_dir;

  // Sampling experiments. batch_size applies to the random-batch kinds only;
  // shmc and hmc always use the full sum.
  std::vector<SamplerKind> samplers;
  UpdateMode update_mode = UpdateMode::single_particle;
  int batch_size = 0;  // 0 = full batch
  std::vector<ScheduleSegment> schedule;
  std::uint64_t n_iterations = 0;  // total, including burn-in
  std::uint64_t n_burnin = 0;
  int n_chains = 1;
  std::uint64_t thin = 1;  // parameter targets only
  bool include_burnin_in_density = false;
  std::optional<HistogramSpec> histogram;
  std::vector<double> checkpoints;  // evolution times; particle targets only
  ReferenceKind reference = ReferenceKind::none;
  ParticleInit init;                  // particle targets
  std::vector<double> init_position;  // parameter targets

  TestExampleParams test_example;
  DysonParams dyson;
  DoubleWellParams double_well;
  GmmParams gmm;
  SweepParams sweep;

  bool is_particle_experiment() const {
    return experiment == ExperimentId::test_example || experiment == ExperimentId::dyson;
  }
  bool is_vector_experiment() const {
    return experiment == ExperimentId::double_well || experiment == ExperimentId::gmm;
  }
  int dimension() const { return experiment == ExperimentId::gmm ? 2 : 1; }
};

ExperimentConfig parse_config(const nlohmann::json& doc);
// Adds line/column information when the text is not valid JSON.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Fully resolved document: every field present, defaults filled in.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace shmc::cli
