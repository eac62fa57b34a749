#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shmc/cli/config.hpp"
#include "shmc/cli/presets.hpp"
#include "shmc/cli/runner.hpp"
#include "shmc/version.hpp"

namespace {

using namespace shmc::cli;

void print_chain_lines(const nlohmann::json& manifest) {
  if (!manifest.contains("chains")) return;
  for (const auto& c : manifest["chains"]) {
    std::printf("%s chain %d: acceptance %.3f, T_E %.6g, cpu %.2fs",
                c.value("sampler", "?").c_str(), c.value("chain", 0),
                c.value("acceptance_rate", 0.0), c.value("evolution_time", 0.0),
                c.value("cpu_seconds", 0.0));
    if (c.contains("final_error")) std::printf(", error %.4g", c["final_error"].get<double>());
    if (c.contains("well_fractions"))
      std::printf(", wells %.3f/%.3f", c["well_fractions"]["left"].get<double>(),
                  c["well_fractions"]["right"].get<double>());
    if (c.contains("mode_fractions"))
      std::printf(", modes %.3f/%.3f", c["mode_fractions"]["first"].get<double>(),
                  c["mode_fractions"]["second"].get<double>());
    std::printf("\n");
  }
}

int do_run(const std::string& config_arg, const std::string& output_override,
           const std::uint64_t* seed_override) {
  ExperimentConfig cfg;
  if (is_preset(config_arg))
    cfg = parse_config(preset_config(config_arg));
  else if (std::filesystem::exists(config_arg))
    cfg = load_config_file(config_arg);
  else
    throw ConfigError("\"" + config_arg + "\" is neither a config file nor a preset id");
  if (!output_override.empty()) cfg.output_dir = output_override;
  if (seed_override) cfg.seed = *seed_override;

  const RunOutcome out = run_experiment(cfg);
  print_chain_lines(out.manifest);
  if (out.manifest.contains("resolved")) {
    const auto& r = out.manifest["resolved"];
    if (r.contains("strong_slope"))
      std::printf("slopes: strong %.3f, weak %.3f\n", r["strong_slope"].get<double>(),
                  r["weak_slope"].get<double>());
    if (r.contains("slope")) std::printf("slope: %.3f\n", r["slope"].get<double>());
  }
  std::printf("manifest: %s\n", out.manifest_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitting and random-batch Hamiltonian Monte Carlo experiments"};
  app.set_version_flag("--version", std::string("shmc ") + shmc::version());
  app.require_subcommand(1);

  std::string config_arg, output_override;
  std::uint64_t seed_value = 0;
  auto* run = app.add_subcommand("run", "execute an experiment config (file path or preset id)");
  run->add_option("config", config_arg, "config file or preset id")->required();
  run->add_option("--output-dir", output_override, "override the configured output directory");
  auto* seed_opt = run->add_option("--seed", seed_value, "override the configured seed");

  std::string manifest_a, manifest_b;
  auto* cmp = app.add_subcommand("compare", "compare the checkpoint errors of two runs");
  cmp->add_option("a", manifest_a, "first run's manifest.json")->required();
  cmp->add_option("b", manifest_b, "second run's manifest.json")->required();

  auto* presets = app.add_subcommand("presets", "canned experiment configs");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "list preset ids");
  std::string preset_id;
  auto* show = presets->add_subcommand("show", "print a preset's resolved config");
  show->add_option("id", preset_id, "preset id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const std::uint64_t seed = seed_value;
      return do_run(config_arg, output_override, seed_opt->count() > 0 ? &seed : nullptr);
    }
    if (*cmp) {
      const CompareOutcome out = compare_runs(manifest_a, manifest_b);
      std::cout << out.report;
      return 0;
    }
    if (*presets->get_subcommand("list")) {
      for (const PresetInfo& p : preset_list())
        std::printf("%-26s %s\n", p.id.c_str(), p.summary.c_str());
      return 0;
    }
    // presets show: validate through a full parse so what prints is runnable.
    const nlohmann::json doc = to_json(parse_config(preset_config(preset_id)));
    std::cout << doc.dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 3;
  }
}
