#include "shmc/cli/presets.hpp"

#include <algorithm>

#include "shmc/cli/config.hpp"

namespace shmc::cli {

namespace {

using nlohmann::json;

json segment(std::uint64_t iterations, int leapfrog_steps, double step_size) {
  return json{{"iterations", iterations},
              {"leapfrog_steps", leapfrog_steps},
              {"step_size", step_size}};
}

// Harmonic confinement plus soft log repulsion, all-particle moves. The three
// variants differ only in the leapfrog schedule; every run is checkpointed on
// the same evolution-time grid so their density errors can be compared.
json test_example(const std::string& id, json schedule, std::uint64_t n_iterations) {
  return json{
      {"experiment", "test_example"},
      {"seed", 1},
      {"output_dir", "runs/" + id},
      {"samplers", json::array({"rb-shmc"})},
      {"update_mode", "all-particle"},
      {"batch_size", 1},
      {"schedule", std::move(schedule)},
      {"n_iterations", n_iterations},
      {"n_burnin", 0},
      {"n_chains", 1},
      {"include_burnin_in_density", true},
      {"histogram", json{{"lo", -3.0}, {"hi", 3.0}, {"bins", 60}}},
      {"checkpoints", json::array({1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0})},
      {"reference", "mean-field"},
      {"init", json{{"kind", "uniform"}, {"lo", -10.0}, {"hi", 10.0}}},
      {"potential",
       json{{"n_particles", 500}, {"alpha", 1.0}, {"beta", 1.0}, {"mass", 1.0}}},
  };
}

// Log-gas with the regularized kernel, single-particle moves, batch size 1.
// Schedules follow the staged tables used for the density relaxation study;
// all three reach evolution time 25.6. Mass 1/(w^2 (N-1)) makes the thermal
// velocity O(1) in the rescaled time units; with mass 1 the per-iteration
// displacement is ~1e-3 and the gas never leaves its initial layout.
json dyson(const std::string& id, const std::string& sampler, json schedule,
           std::uint64_t n_iterations) {
  return json{
      {"experiment", "dyson"},
      {"seed", 1},
      {"output_dir", "runs/" + id},
      {"samplers", json::array({sampler})},
      {"update_mode", "single-particle"},
      {"batch_size", 1},
      {"schedule", std::move(schedule)},
      {"n_iterations", n_iterations},
      {"n_burnin", 0},
      {"n_chains", 1},
      {"include_burnin_in_density", true},
      {"histogram", json{{"lo", -1.6}, {"hi", 1.6}, {"bins", 64}}},
      {"checkpoints", json::array({0.1, 0.4, 1.6, 7.6, 25.6})},
      {"reference", "semicircle"},
      {"init", json{{"kind", "uniform"}, {"lo", -10.0}, {"hi", 10.0}}},
      {"potential",
       json{{"n_particles", 500}, {"delta0", 0.01}, {"weight", 1.0}, {"mass", 1.0 / 499.0}}},
  };
}

json double_well(const std::string& id, const std::string& sampler) {
  return json{
      {"experiment", "double_well"},
      {"seed", 1},
      {"output_dir", "runs/" + id},
      {"samplers", json::array({sampler})},
      {"schedule", json::array({segment(101000, 40, 0.05)})},
      {"n_iterations", 101000},
      {"n_burnin", 1000},
      {"n_chains", 1},
      {"thin", 1},
      {"histogram", json{{"lo", -2.0}, {"hi", 2.0}, {"bins", 80}, {"coord", 0}}},
      {"reference", "quadrature"},
      {"init", json{{"position", json::array({-1.0})}}},
      {"potential",
       json{{"height", 20.0}, {"half_width", 1.0}, {"lambda", 0.05}, {"beta", 1.0}, {"mass", 1.0}}},
  };
}

// Posterior over the two mixture locations. leapfrog_steps 0 delegates to the
// trajectory-length rule L = round(traj_factor * d_w / dt).
json gmm(const std::string& id, const std::string& sampler, int batch_size, double step_size,
         std::uint64_t n_iterations, std::uint64_t n_burnin, const std::string& sand,
         double traj_factor, json init_position) {
  return json{
      {"experiment", "gmm"},
      {"seed", 1},
      {"output_dir", "runs/" + id},
      {"samplers", json::array({sampler})},
      {"batch_size", batch_size},
      {"schedule", json::array({segment(n_iterations, 0, step_size)})},
      {"n_iterations", n_iterations},
      {"n_burnin", n_burnin},
      {"n_chains", 1},
      {"thin", 1},
      {"histogram", json{{"lo", -6.0}, {"hi", 6.0}, {"bins", 60}, {"coord", 1}}},
      {"reference", "none"},
      {"init", json{{"position", std::move(init_position)}}},
      {"potential", json{{"n_data", 100},
                         {"data_seed", 42},
                         {"theta1", 0.0},
                         {"theta2", 2.0},
                         {"sigma1_sq", 10.0},
                         {"sigma2_sq", 1.0},
                         {"sigma_y_sq", 0.5},
                         {"mass", 1.0},
                         {"sand", sand},
                         {"traj_factor", traj_factor}}},
  };
}

json error_sweep(const std::string& id, const std::string& mode, int n_replicas,
                 json step_sizes) {
  return json{
      {"experiment", "error_sweep"},
      {"seed", 1},
      {"output_dir", "runs/" + id},
      {"sweep", json{{"mode", mode},
                     {"n_particles", 50},
                     {"batch_size", 1},
                     {"horizon", 1.0},
                     {"n_replicas", n_replicas},
                     {"step_sizes", std::move(step_sizes)},
                     {"init_sigma", 1.0},
                     {"alpha", 1.0},
                     {"beta", 4.0},
                     {"mass", 1.0}}},
  };
}

struct PresetEntry {
  PresetInfo info;
  json (*build)();
};

const std::vector<PresetEntry>& registry() {
  static const std::vector<PresetEntry> entries = {
      {{"test-example-l100",
        "harmonic + soft log gas, rb-shmc all-particle, 100 leapfrog steps per iteration"},
       [] { return test_example("test-example-l100", json::array({segment(250000, 100, 0.02)}),
                                250000); }},
      {{"test-example-l10",
        "same target with 10 leapfrog steps per iteration, matched evolution time"},
       [] { return test_example("test-example-l10", json::array({segment(2500000, 10, 0.02)}),
                                2500000); }},
      {{"test-example-adaptive",
        "long trajectories for the transient, then short ones near equilibrium"},
       [] {
         return test_example(
             "test-example-adaptive",
             json::array({segment(25000, 100, 0.02), segment(2250000, 10, 0.02)}), 2275000);
       }},
      {{"dyson-rbshmc", "log-gas relaxation, rb-shmc with a staged leapfrog schedule"},
       [] {
         return dyson("dyson-rbshmc", "rb-shmc",
                      json::array({segment(100000, 100, 2e-4), segment(300000, 20, 2e-4),
                                   segment(9600000, 10, 1e-4)}),
                      10000000);
       }},
      {{"dyson-rbmc", "log-gas relaxation, gradient-flow proposals, flat schedule"},
       [] {
         return dyson("dyson-rbmc", "rbmc", json::array({segment(12800000, 10, 1e-4)}),
                      12800000);
       }},
      {{"dyson-rbmc-v2", "gradient-flow proposals with the staged step budget"},
       [] {
         return dyson("dyson-rbmc-v2", "rbmc",
                      json::array({segment(200000, 100, 1e-4), segment(600000, 20, 1e-4),
                                   segment(9600000, 10, 1e-4)}),
                      10400000);
       }},
      {{"double-well-shmc",
        "quartic double well with a lowered inner barrier; crosses freely"},
       [] { return double_well("double-well-shmc", "shmc"); }},
      {{"double-well-hmc", "full-potential baseline on the same well; stays trapped"},
       [] { return double_well("double-well-hmc", "hmc"); }},
      {{"gmm-shmc", "mixture posterior with sand wells at both modes, exact gradients"},
       [] {
         return gmm("gmm-shmc", "shmc", 0, 1e-3, 11000, 1000, "auto", 0.4,
                    json::array({0.0, 0.0}));
       }},
      {{"gmm-rbshmc", "mixture posterior, data batches of 10 per leapfrog step"},
       [] {
         return gmm("gmm-rbshmc", "rb-shmc", 10, 1e-3, 11000, 1000, "auto", 0.4,
                    json::array({0.0, 0.0}));
       }},
      {{"gmm-hmc", "full-potential baseline, trajectories twice the mode distance"},
       [] {
         return gmm("gmm-hmc", "hmc", 0, 1e-2, 2100, 100, "none", 2.0,
                    json::array({0.0, 2.0}));
       }},
      {{"error-sweep-batch",
        "batched vs exact trajectory error over a step-size ladder, slope check"},
       [] {
         return error_sweep("error-sweep-batch", "batch", 1000,
                            json::array({0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625,
                                         0.001953125}));
       }},
      {{"error-sweep-deterministic",
        "energy error of the full-batch integrator, second-order reference"},
       [] {
         return error_sweep("error-sweep-deterministic", "deterministic", 200,
                            json::array({0.0625, 0.03125, 0.015625, 0.0078125}));
       }},
  };
  return entries;
}

}  // namespace

const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> out;
    for (const PresetEntry& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

bool is_preset(const std::string& id) {
  const auto& r = registry();
  return std::any_of(r.begin(), r.end(),
                     [&](const PresetEntry& e) { return e.info.id == id; });
}

nlohmann::json preset_config(const std::string& id) {
  for (const PresetEntry& e : registry()) {
    if (e.info.id == id) return e.build();
  }
  throw ConfigError("unknown preset \"" + id + "\"; see `shmc presets list`");
}

}  // namespace shmc::cli
