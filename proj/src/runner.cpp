#include "shmc/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "shmc/cli/manifest.hpp"
#include "shmc/diagnostics/error_sweep.hpp"
#include "shmc/diagnostics/histogram.hpp"
#include "shmc/diagnostics/mode_occupancy.hpp"
#include "shmc/diagnostics/references.hpp"
#include "shmc/potentials/double_well.hpp"
#include "shmc/potentials/dyson.hpp"
#include "shmc/potentials/gmm_posterior.hpp"
#include "shmc/potentials/smooth_pair.hpp"
#include "shmc/samplers/particle_chain.hpp"
#include "shmc/samplers/vector_chain.hpp"
#include "shmc/version.hpp"

namespace shmc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string chain_dir(SamplerKind kind, int chain) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "chain_%02d", chain);
  return std::string(to_string(kind)) + "/" + buf;
}

std::vector<double> build_reference_mass(const ExperimentConfig& cfg) {
  if (cfg.reference == ReferenceKind::none) return {};
  const HistogramSpec& h = *cfg.histogram;
  switch (cfg.reference) {
    case ReferenceKind::semicircle:
      return semicircle_bin_mass(h.lo, h.hi, h.bins);
    case ReferenceKind::mean_field:
      return mean_field_bin_mass(cfg.test_example.alpha, cfg.test_example.beta, h.lo, h.hi,
                                 h.bins);
    case ReferenceKind::quadrature: {
      const auto& p = cfg.double_well;
      const DoubleWellTarget t(p.height, p.half_width, p.lambda, p.beta, p.mass);
      return quadrature_bin_mass(
          [&](double x) { return std::exp(-t.beta() * t.potential_scalar(x)); }, h.lo, h.hi,
          h.bins);
    }
    case ReferenceKind::none:
      break;
  }
  return {};
}

std::string reference_tsv(const HistogramSpec& h, std::span<const double> mass) {
  const double width = (h.hi - h.lo) / h.bins;
  std::string out = "# bin_center\tdensity\n";
  for (int j = 0; j < h.bins; ++j) {
    const double center = h.lo + (j + 0.5) * width;
    out += format_double(center) + "\t" + format_double(mass[static_cast<std::size_t>(j)] / width) +
           "\n";
  }
  return out;
}

std::string density_tsv(const DensityHistogram& h) {
  std::string out = "# bin_center\tdensity\n";
  for (int j = 0; j < h.n_bins; ++j)
    out += format_double(h.bin_center(j)) + "\t" + format_double(h.density(j)) + "\n";
  return out;
}

std::string density_tsv_from_samples(const HistogramSpec& spec,
                                     std::span<const std::vector<double>> samples,
                                     DensityHistogram& out_hist) {
  out_hist = DensityHistogram(spec.lo, spec.hi, spec.bins);
  for (const auto& s : samples) out_hist.add(s[static_cast<std::size_t>(spec.coord)]);
  return density_tsv(out_hist);
}

// No wall-clock column here: data files must be identical across reruns.
// The per-checkpoint CPU times live in the manifest.
std::string errors_tsv(std::span<const CheckpointRow> rows) {
  std::string out = "# iteration\tevolution_time\terror\n";
  for (const CheckpointRow& r : rows)
    out += std::to_string(r.iteration) + "\t" + format_double(r.evolution_time) + "\t" +
           format_double(r.error) + "\n";
  return out;
}

std::string positions_tsv(std::span<const Vec<1>> xs) {
  std::string out = "# x\n";
  for (const auto& x : xs) out += format_double(x[0]) + "\n";
  return out;
}

std::string samples_tsv(const ChainRecord& rec, int dim) {
  std::string out = "# iteration";
  for (int k = 0; k < dim; ++k) out += "\tx" + std::to_string(k);
  out += "\n";
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    out += std::to_string(rec.sample_iterations[i]);
    for (int k = 0; k < dim; ++k)
      out += "\t" + format_double(rec.samples[i][static_cast<std::size_t>(k)]);
    out += "\n";
  }
  return out;
}

json checkpoint_json(std::span<const CheckpointRow> rows) {
  json arr = json::array();
  for (const CheckpointRow& r : rows) {
    arr.push_back(json{{"iteration", r.iteration},
                       {"evolution_time", r.evolution_time},
                       {"error", r.error},
                       {"cpu_seconds", r.cpu_seconds}});
  }
  return arr;
}

json base_chain_summary(SamplerKind kind, int chain, std::uint64_t stream,
                        const ChainRecord& rec) {
  return json{{"sampler", to_string(kind)},
              {"chain", chain},
              {"stream", stream},
              {"acceptance_rate", rec.acceptance_rate()},
              {"evolution_time", rec.evolution_time},
              {"cpu_seconds", rec.cpu_seconds},
              {"grad_seconds", rec.grad_seconds}};
}

struct RunState {
  fs::path run_dir;
  std::vector<FileEntry> files;
  json chains = json::array();
  json resolved = json::object();
};

template <ParticleTarget T>
void run_particle(const ExperimentConfig& cfg, const T& target,
                  std::span<const double> ref_mass, RunState& st) {
  for (std::size_t si = 0; si < cfg.samplers.size(); ++si) {
    const SamplerKind kind = cfg.samplers[si];
    for (int c = 0; c < cfg.n_chains; ++c) {
      ParticleChainOptions o;
      o.kind = kind;
      o.mode = cfg.update_mode;
      o.batch_size = kind == SamplerKind::shmc ? 0 : cfg.batch_size;
      o.schedule = SamplerSchedule(cfg.schedule);
      o.n_iterations = cfg.n_iterations;
      o.n_burnin = cfg.n_burnin;
      o.seed = cfg.seed;
      o.stream = si * static_cast<std::uint64_t>(cfg.n_chains) + static_cast<std::uint64_t>(c);
      if (cfg.histogram) {
        o.hist_lo = cfg.histogram->lo;
        o.hist_hi = cfg.histogram->hi;
        o.hist_bins = cfg.histogram->bins;
      }
      o.init = cfg.init;
      o.checkpoint_times = cfg.checkpoints;
      o.reference_mass.assign(ref_mass.begin(), ref_mass.end());
      o.include_burnin_in_density = cfg.include_burnin_in_density;

      ParticleChain<T> chain(target, o);
      const ChainRecord rec = chain.run();

      const std::string dir = chain_dir(kind, c);
      st.files.push_back(
          write_output_file(st.run_dir, dir + "/positions.tsv", positions_tsv(chain.positions())));
      if (cfg.histogram)
        st.files.push_back(
            write_output_file(st.run_dir, dir + "/density.tsv", density_tsv(*rec.histogram)));
      if (!rec.checkpoints.empty())
        st.files.push_back(
            write_output_file(st.run_dir, dir + "/errors.tsv", errors_tsv(rec.checkpoints)));

      json summary = base_chain_summary(kind, c, o.stream, rec);
      if (!ref_mass.empty()) summary["final_error"] = relative_error(*rec.histogram, ref_mass);
      if (!rec.checkpoints.empty()) summary["checkpoints"] = checkpoint_json(rec.checkpoints);
      st.chains.push_back(std::move(summary));
    }
  }
}

template <VectorTarget T>
void run_vector(const ExperimentConfig& cfg, const T& target,
                const std::vector<ScheduleSegment>& schedule, std::span<const double> ref_mass,
                RunState& st, const std::array<Vec<2>, 2>* mode_centers) {
  for (std::size_t si = 0; si < cfg.samplers.size(); ++si) {
    const SamplerKind kind = cfg.samplers[si];
    for (int c = 0; c < cfg.n_chains; ++c) {
      VectorChainOptions o;
      o.kind = kind;
      o.batch_size = kind == SamplerKind::rb_shmc ? cfg.batch_size : 0;
      o.schedule = SamplerSchedule(schedule);
      o.n_iterations = cfg.n_iterations;
      o.n_burnin = cfg.n_burnin;
      o.seed = cfg.seed;
      o.stream = si * static_cast<std::uint64_t>(cfg.n_chains) + static_cast<std::uint64_t>(c);
      o.init_position = cfg.init_position;
      o.thin = cfg.thin;

      VectorChain<T> chain(target, o);
      const ChainRecord rec = chain.run();

      const std::string dir = chain_dir(kind, c);
      st.files.push_back(
          write_output_file(st.run_dir, dir + "/samples.tsv", samples_tsv(rec, T::dim)));

      json summary = base_chain_summary(kind, c, o.stream, rec);
      if (cfg.histogram) {
        DensityHistogram hist(0.0, 1.0, 1);
        st.files.push_back(write_output_file(
            st.run_dir, dir + "/density.tsv",
            density_tsv_from_samples(*cfg.histogram, rec.samples, hist)));
        if (!ref_mass.empty()) summary["final_error"] = relative_error(hist, ref_mass);
      }
      if (cfg.experiment == ExperimentId::double_well) {
        const WellFractions wf = well_fractions(rec.samples);
        summary["well_fractions"] = json{{"left", wf.left}, {"right", wf.right}};
      } else if (mode_centers) {
        const ModeFractions mf = mode_fractions(rec.samples, (*mode_centers)[0],
                                                (*mode_centers)[1]);
        summary["mode_fractions"] = json{{"first", mf.first}, {"second", mf.second}};
      }
      st.chains.push_back(std::move(summary));
    }
  }
}

void run_sweep(const ExperimentConfig& cfg, RunState& st) {
  SweepOptions o;
  o.n_particles = cfg.sweep.n_particles;
  o.batch_size = cfg.sweep.batch_size;
  o.horizon = cfg.sweep.horizon;
  o.n_replicas = cfg.sweep.n_replicas;
  o.step_sizes = cfg.sweep.step_sizes;
  o.init_sigma = cfg.sweep.init_sigma;
  o.seed = cfg.seed;
  o.alpha = cfg.sweep.alpha;
  o.beta = cfg.sweep.beta;
  o.mass = cfg.sweep.mass;

  if (cfg.sweep.deterministic) {
    const DeterministicOrderResult r = deterministic_order_curve(o);
    std::string out = "# dt\tenergy_error\n";
    for (std::size_t i = 0; i < r.step_sizes.size(); ++i)
      out += format_double(r.step_sizes[i]) + "\t" + format_double(r.errors[i]) + "\n";
    st.files.push_back(write_output_file(st.run_dir, "sweep.tsv", out));
    st.resolved["slope"] = r.slope;
  } else {
    const SweepResult r = hamiltonian_error_sweep(o);
    std::string out = "# dt\tstrong_error\tweak_error\n";
    for (const SweepPoint& p : r.points)
      out += format_double(p.dt) + "\t" + format_double(p.strong_error) + "\t" +
             format_double(p.weak_error) + "\n";
    st.files.push_back(write_output_file(st.run_dir, "sweep.tsv", out));
    st.resolved["strong_slope"] = r.strong_slope;
    st.resolved["weak_slope"] = r.weak_slope;
  }
}

// With leapfrog_steps 0 a segment takes its length from the mode geometry:
// L = round(traj_factor * d_w / dt).
std::vector<ScheduleSegment> resolve_gmm_schedule(const ExperimentConfig& cfg,
                                                  double well_distance) {
  std::vector<ScheduleSegment> out = cfg.schedule;
  for (ScheduleSegment& seg : out) {
    if (seg.leapfrog_steps == 0) {
      seg.leapfrog_steps = static_cast<int>(
          std::max<long long>(1, std::llround(cfg.gmm.traj_factor * well_distance /
                                              seg.step_size)));
    }
  }
  return out;
}

json schedule_json(const std::vector<ScheduleSegment>& schedule) {
  json arr = json::array();
  for (const ScheduleSegment& seg : schedule)
    arr.push_back(json{{"iterations", seg.iterations},
                       {"leapfrog_steps", seg.leapfrog_steps},
                       {"step_size", seg.step_size}});
  return arr;
}

}  // namespace

fs::path resolve_output_dir(const std::string& output_dir) {
  fs::path p(output_dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("SHMC_OUTPUT_ROOT")) return fs::path(root) / p;
  return p;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  RunState st;
  st.run_dir = resolve_output_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(st.run_dir, ec);
  if (ec) throw RunError("cannot create output directory " + st.run_dir.string());

  std::vector<double> ref_mass;
  try {
    ref_mass = build_reference_mass(cfg);
    if (!ref_mass.empty())
      st.files.push_back(
          write_output_file(st.run_dir, "reference.tsv", reference_tsv(*cfg.histogram, ref_mass)));

    switch (cfg.experiment) {
      case ExperimentId::test_example: {
        const auto& p = cfg.test_example;
        const SmoothPairTarget target(p.n_particles, p.alpha, p.beta, p.mass);
        run_particle(cfg, target, ref_mass, st);
        break;
      }
      case ExperimentId::dyson: {
        const auto& p = cfg.dyson;
        const DysonTarget target(p.n_particles, p.delta0, p.weight, p.mass);
        run_particle(cfg, target, ref_mass, st);
        break;
      }
      case ExperimentId::double_well: {
        const auto& p = cfg.double_well;
        const DoubleWellTarget target(p.height, p.half_width, p.lambda, p.beta, p.mass);
        run_vector(cfg, target, cfg.schedule, ref_mass, st, nullptr);
        break;
      }
      case ExperimentId::gmm: {
        const auto& p = cfg.gmm;
        GmmPosteriorTarget target(
            generate_gmm_data(p.n_data, p.theta1, p.theta2, p.sigma_y_sq, p.data_seed),
            p.sigma1_sq, p.sigma2_sq, p.sigma_y_sq, p.mass);
        const SandPlacement sand = estimate_sand_centers(target);
        if (p.sand)
          target.set_sand(sand.centers,
                          recommended_sand_height(sand.barrier_height, target.beta()));
        const auto schedule = resolve_gmm_schedule(cfg, sand.well_distance);
        st.resolved["well_distance"] = sand.well_distance;
        st.resolved["barrier_height"] = sand.barrier_height;
        st.resolved["mode_centers"] = json::array(
            {json::array({sand.centers[0][0], sand.centers[0][1]}),
             json::array({sand.centers[1][0], sand.centers[1][1]})});
        st.resolved["sand_height"] = target.has_sand() ? target.sand_height() : 0.0;
        st.resolved["schedule"] = schedule_json(schedule);
        run_vector(cfg, target, schedule, ref_mass, st, &sand.centers);
        break;
      }
      case ExperimentId::error_sweep:
        run_sweep(cfg, st);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const RunError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  } catch (const std::exception& e) {
    throw RunError(e.what());
  }

  json inventory = json::array();
  for (const FileEntry& f : st.files)
    inventory.push_back(json{{"path", f.path}, {"bytes", f.bytes}, {"fnv1a", f.checksum}});

  json manifest;
  manifest["library_version"] = version();
  manifest["experiment"] = to_string(cfg.experiment);
  manifest["config"] = to_json(cfg);
  if (!st.resolved.empty()) manifest["resolved"] = st.resolved;
  if (!st.chains.empty()) manifest["chains"] = st.chains;
  manifest["files"] = inventory;

  RunOutcome outcome;
  outcome.run_dir = st.run_dir;
  outcome.manifest_path = st.run_dir / "manifest.json";
  outcome.manifest = manifest;
  write_text_atomic(outcome.manifest_path, manifest.dump(2) + "\n");
  return outcome;
}

namespace {

struct Series {
  std::string sampler;
  std::vector<double> te;     // checkpoint evolution times
  std::vector<double> error;  // mean over chains
  std::vector<double> cpu;
  double final_error = std::numeric_limits<double>::quiet_NaN();
  int n_chains = 0;
  int n_samplers_present = 0;
};

json load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open manifest: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return doc;
}

// Mean checkpoint series of the manifest's first sampler kind.
Series extract_series(const json& manifest, const fs::path& path) {
  if (!manifest.contains("chains") || manifest["chains"].empty())
    throw ConfigError("manifest " + path.string() + " has no chains to compare");
  const json& chains = manifest["chains"];
  Series s;
  s.sampler = chains[0].value("sampler", "?");
  std::vector<const json*> mine;
  std::vector<std::string> kinds;
  for (const json& c : chains) {
    const std::string k = c.value("sampler", "?");
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    if (k == s.sampler) mine.push_back(&c);
  }
  s.n_samplers_present = static_cast<int>(kinds.size());
  s.n_chains = static_cast<int>(mine.size());

  double final_sum = 0.0;
  int final_count = 0;
  for (std::size_t ci = 0; ci < mine.size(); ++ci) {
    const json& c = *mine[ci];
    if (c.contains("final_error")) {
      final_sum += c["final_error"].get<double>();
      ++final_count;
    }
    if (!c.contains("checkpoints")) continue;
    const json& rows = c["checkpoints"];
    if (s.te.empty()) {
      s.te.resize(rows.size());
      s.error.assign(rows.size(), 0.0);
      s.cpu.assign(rows.size(), 0.0);
      for (std::size_t i = 0; i < rows.size(); ++i)
        s.te[i] = rows[i]["evolution_time"].get<double>();
    }
    if (rows.size() != s.te.size())
      throw ConfigError("manifest " + path.string() + ": chains have mismatched checkpoints");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s.error[i] += rows[i]["error"].get<double>() / static_cast<double>(mine.size());
      s.cpu[i] += rows[i]["cpu_seconds"].get<double>() / static_cast<double>(mine.size());
    }
  }
  if (final_count > 0) s.final_error = final_sum / final_count;
  return s;
}

bool close_rel(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

CompareOutcome compare_runs(const fs::path& manifest_a, const fs::path& manifest_b) {
  const json ma = load_manifest(manifest_a);
  const json mb = load_manifest(manifest_b);

  const std::string ea = ma.value("experiment", "?");
  const std::string eb = mb.value("experiment", "?");
  if (ea != eb)
    throw ConfigError("cannot compare: experiments differ (" + ea + " vs " + eb + ")");
  const json ha = ma.contains("config") ? ma["config"].value("histogram", json()) : json();
  const json hb = mb.contains("config") ? mb["config"].value("histogram", json()) : json();
  if (ha != hb) throw ConfigError("cannot compare: histogram specs differ");

  const Series sa = extract_series(ma, manifest_a);
  const Series sb = extract_series(mb, manifest_b);

  std::ostringstream out;
  out << "experiment: " << ea << "\n";
  out << "a: " << sa.sampler << " (" << manifest_a.string() << ", " << sa.n_chains
      << (sa.n_chains == 1 ? " chain)" : " chains)") << "\n";
  out << "b: " << sb.sampler << " (" << manifest_b.string() << ", " << sb.n_chains
      << (sb.n_chains == 1 ? " chain)" : " chains)") << "\n";
  if (sa.n_samplers_present > 1 || sb.n_samplers_present > 1)
    out << "note: comparing the first sampler of each manifest only\n";

  CompareOutcome res;
  char line[160];
  std::size_t ia = 0, ib = 0;
  int a_lower = 0, b_lower = 0;
  bool header = false;
  while (ia < sa.te.size() && ib < sb.te.size()) {
    if (close_rel(sa.te[ia], sb.te[ib])) {
      if (!header) {
        out << "\n";
        std::snprintf(line, sizeof(line), "%12s %12s %12s %12s %12s  %s\n", "T_E", "error_a",
                      "error_b", "cpu_a[s]", "cpu_b[s]", "lower");
        out << line;
        header = true;
      }
      const double da = sa.error[ia], db = sb.error[ib];
      const char* lower = da < db ? "a" : (db < da ? "b" : "tie");
      if (da < db)
        ++a_lower;
      else if (db < da)
        ++b_lower;
      std::snprintf(line, sizeof(line), "%12.6g %12.6g %12.6g %12.3f %12.3f  %s\n", sa.te[ia], da,
                    db, sa.cpu[ia], sb.cpu[ib], lower);
      out << line;
      ++res.shared_checkpoints;
      ++ia;
      ++ib;
    } else if (sa.te[ia] < sb.te[ib]) {
      ++ia;
      ++res.skipped_checkpoints;
    } else {
      ++ib;
      ++res.skipped_checkpoints;
    }
  }
  res.skipped_checkpoints +=
      static_cast<int>((sa.te.size() - ia) + (sb.te.size() - ib));

  if (!std::isnan(sa.final_error) && !std::isnan(sb.final_error)) {
    std::snprintf(line, sizeof(line), "\nfinal error: a %.6g, b %.6g\n", sa.final_error,
                  sb.final_error);
    out << line;
  }

  if (res.shared_checkpoints == 0) {
    res.verdict = "no shared checkpoints";
  } else if (a_lower == res.shared_checkpoints) {
    res.verdict = "a lower error at every shared checkpoint";
  } else if (b_lower == res.shared_checkpoints) {
    res.verdict = "b lower error at every shared checkpoint";
  } else {
    std::snprintf(line, sizeof(line), "mixed: a lower at %d, b lower at %d of %d checkpoints",
                  a_lower, b_lower, res.shared_checkpoints);
    res.verdict = line;
  }
  out << "verdict: " << res.verdict << "\n";
  if (res.skipped_checkpoints > 0)
    out << "warning: " << res.skipped_checkpoints
        << " checkpoint(s) without a counterpart in the other run were skipped\n";
  res.report = out.str();
  return res;
}

}  // namespace shmc::cli
