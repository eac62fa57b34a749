#include "shmc/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace shmc::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ptr, const std::string& what) {
  throw ConfigError("config error at " + (ptr.empty() ? std::string("/") : ptr) + ": " + what);
}

std::string ptr_of(const std::string& base, const std::string& key) { return base + "/" + key; }

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& base,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) fail(ptr_of(base, it.key()), "unknown key");
  }
}

const json& req_object(const json& obj, const std::string& base, const char* key) {
  const json* v = find(obj, key);
  if (!v) fail(ptr_of(base, key), "missing required field");
  if (!v->is_object()) fail(ptr_of(base, key), "expected an object");
  return *v;
}

double get_num(const json& obj, const std::string& base, const char* key, double dflt) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_number()) fail(ptr_of(base, key), "expected a number");
  return v->get<double>();
}

std::int64_t get_int(const json& obj, const std::string& base, const char* key, std::int64_t dflt) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_number_integer() && !v->is_number_unsigned())
    fail(ptr_of(base, key), "expected an integer");
  return v->get<std::int64_t>();
}

std::uint64_t get_uint(const json& obj, const std::string& base, const char* key,
                       std::uint64_t dflt) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return v->get<std::uint64_t>();
  fail(ptr_of(base, key), "expected a nonnegative integer");
}

bool get_bool(const json& obj, const std::string& base, const char* key, bool dflt) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_boolean()) fail(ptr_of(base, key), "expected a boolean");
  return v->get<bool>();
}

std::string get_str(const json& obj, const std::string& base, const char* key,
                    const std::string& dflt) {
  const json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_string()) fail(ptr_of(base, key), "expected a string");
  return v->get<std::string>();
}

std::string req_str(const json& obj, const std::string& base, const char* key) {
  if (!find(obj, key)) fail(ptr_of(base, key), "missing required field");
  return get_str(obj, base, key, "");
}

std::vector<double> get_num_array(const json& obj, const std::string& base, const char* key) {
  const json* v = find(obj, key);
  if (!v) return {};
  if (!v->is_array()) fail(ptr_of(base, key), "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v->size());
  for (std::size_t i = 0; i < v->size(); ++i) {
    const json& e = (*v)[i];
    if (!e.is_number()) fail(ptr_of(base, key) + "/" + std::to_string(i), "expected a number");
    out.push_back(e.get<double>());
  }
  return out;
}

void require_positive(double v, const std::string& ptr) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ptr, "must be a positive finite number");
}

void require_finite(double v, const std::string& ptr) {
  if (!std::isfinite(v)) fail(ptr, "must be finite");
}

std::vector<SamplerKind> parse_samplers(const json& doc, ExperimentId experiment) {
  const json* v = find(doc, "samplers");
  if (!v) fail("/samplers", "missing required field");
  if (!v->is_array()) fail("/samplers", "expected an array of sampler kinds");
  if (v->empty()) fail("/samplers", "needs at least one sampler kind");
  std::vector<SamplerKind> kinds;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const std::string ptr = "/samplers/" + std::to_string(i);
    const json& e = (*v)[i];
    if (!e.is_string()) fail(ptr, "expected a sampler kind string");
    SamplerKind k;
    try {
      k = sampler_kind_from_string(e.get<std::string>());
    } catch (const std::exception& ex) {
      fail(ptr, ex.what());
    }
    const bool particle =
        experiment == ExperimentId::test_example || experiment == ExperimentId::dyson;
    if (particle && k == SamplerKind::hmc)
      fail(ptr, "hmc is not available for interacting-particle targets");
    if (experiment == ExperimentId::double_well && k == SamplerKind::rb_shmc)
      fail(ptr, "rb-shmc needs a target with per-datum gradients");
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) fail(ptr, "duplicate sampler kind");
    kinds.push_back(k);
  }
  return kinds;
}

std::vector<ScheduleSegment> parse_schedule(const json& doc, bool allow_auto_steps) {
  const json* v = find(doc, "schedule");
  if (!v) fail("/schedule", "missing required field");
  if (!v->is_array() || v->empty()) fail("/schedule", "expected a nonempty array of segments");
  std::vector<ScheduleSegment> segments;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const std::string base = "/schedule/" + std::to_string(i);
    const json& e = (*v)[i];
    if (!e.is_object()) fail(base, "expected a segment object");
    check_keys(e, base, {"iterations", "leapfrog_steps", "step_size"});
    ScheduleSegment seg;
    seg.iterations = get_uint(e, base, "iterations", 0);
    if (seg.iterations == 0) fail(ptr_of(base, "iterations"), "must be at least 1");
    seg.leapfrog_steps = static_cast<int>(get_int(e, base, "leapfrog_steps", -1));
    if (seg.leapfrog_steps < 0) fail(ptr_of(base, "leapfrog_steps"), "missing required field");
    if (seg.leapfrog_steps == 0 && !allow_auto_steps)
      fail(ptr_of(base, "leapfrog_steps"),
           "must be at least 1 (0 selects the trajectory-length rule, gmm only)");
    seg.step_size = get_num(e, base, "step_size", 0.0);
    require_positive(seg.step_size, ptr_of(base, "step_size"));
    segments.push_back(seg);
  }
  return segments;
}

HistogramSpec parse_histogram(const json& doc, const ExperimentConfig& cfg) {
  const json& h = *find(doc, "histogram");
  const std::string base = "/histogram";
  if (!h.is_object()) fail(base, "expected an object");
  if (cfg.is_particle_experiment())
    check_keys(h, base, {"lo", "hi", "bins"});
  else
    check_keys(h, base, {"lo", "hi", "bins", "coord"});
  HistogramSpec spec;
  spec.lo = get_num(h, base, "lo", spec.lo);
  spec.hi = get_num(h, base, "hi", spec.hi);
  spec.bins = static_cast<int>(get_int(h, base, "bins", spec.bins));
  spec.coord = static_cast<int>(get_int(h, base, "coord", 0));
  require_finite(spec.lo, ptr_of(base, "lo"));
  require_finite(spec.hi, ptr_of(base, "hi"));
  if (!(spec.lo < spec.hi)) fail(base, "needs lo < hi");
  if (spec.bins < 1) fail(ptr_of(base, "bins"), "must be at least 1");
  if (spec.coord < 0 || spec.coord >= cfg.dimension())
    fail(ptr_of(base, "coord"), "must index a coordinate of the target");
  return spec;
}

ParticleInit parse_particle_init(const json& doc, int n_particles) {
  ParticleInit init;
  const json* v = find(doc, "init");
  if (!v) return init;
  const std::string base = "/init";
  if (!v->is_object()) fail(base, "expected an object");
  const std::string kind = get_str(*v, base, "kind", "linspace");
  if (kind == "given") {
    check_keys(*v, base, {"kind", "positions"});
    init.kind = ParticleInit::Kind::given;
    init.positions = get_num_array(*v, base, "positions");
    if (static_cast<int>(init.positions.size()) != n_particles)
      fail(ptr_of(base, "positions"), "needs exactly one position per particle");
    for (std::size_t i = 0; i < init.positions.size(); ++i)
      require_finite(init.positions[i], ptr_of(base, "positions") + "/" + std::to_string(i));
  } else if (kind == "uniform" || kind == "linspace") {
    check_keys(*v, base, {"kind", "lo", "hi"});
    init.kind = kind == "uniform" ? ParticleInit::Kind::uniform : ParticleInit::Kind::linspace;
    init.lo = get_num(*v, base, "lo", init.lo);
    init.hi = get_num(*v, base, "hi", init.hi);
    require_finite(init.lo, ptr_of(base, "lo"));
    require_finite(init.hi, ptr_of(base, "hi"));
    if (!(init.lo < init.hi)) fail(base, "needs lo < hi");
  } else if (kind == "gaussian") {
    check_keys(*v, base, {"kind", "sigma"});
    init.kind = ParticleInit::Kind::gaussian;
    init.sigma = get_num(*v, base, "sigma", init.sigma);
    require_positive(init.sigma, ptr_of(base, "sigma"));
  } else {
    fail(ptr_of(base, "kind"), "expected one of given, uniform, linspace, gaussian");
  }
  return init;
}

std::vector<double> parse_vector_init(const json& doc, int dim) {
  std::vector<double> position(static_cast<std::size_t>(dim), 0.0);
  const json* v = find(doc, "init");
  if (!v) return position;
  const std::string base = "/init";
  if (!v->is_object()) fail(base, "expected an object");
  check_keys(*v, base, {"position"});
  if (!find(*v, "position")) return position;
  position = get_num_array(*v, base, "position");
  if (static_cast<int>(position.size()) != dim)
    fail(ptr_of(base, "position"), "needs one entry per coordinate of the target");
  for (std::size_t i = 0; i < position.size(); ++i)
    require_finite(position[i], ptr_of(base, "position") + "/" + std::to_string(i));
  return position;
}

void parse_potential(const json& doc, ExperimentConfig& cfg) {
  const json* v = find(doc, "potential");
  const json empty = json::object();
  const json& p = v ? *v : empty;
  const std::string base = "/potential";
  if (!p.is_object()) fail(base, "expected an object");
  switch (cfg.experiment) {
    case ExperimentId::test_example: {
      check_keys(p, base, {"n_particles", "alpha", "beta", "mass"});
      auto& t = cfg.test_example;
      t.n_particles = static_cast<int>(get_int(p, base, "n_particles", t.n_particles));
      t.alpha = get_num(p, base, "alpha", t.alpha);
      t.beta = get_num(p, base, "beta", t.beta);
      t.mass = get_num(p, base, "mass", t.mass);
      if (t.n_particles < 2) fail(ptr_of(base, "n_particles"), "needs at least 2 particles");
      require_positive(t.alpha, ptr_of(base, "alpha"));
      require_positive(t.beta, ptr_of(base, "beta"));
      require_positive(t.mass, ptr_of(base, "mass"));
      break;
    }
    case ExperimentId::dyson: {
      check_keys(p, base, {"n_particles", "delta0", "weight", "mass"});
      auto& t = cfg.dyson;
      t.n_particles = static_cast<int>(get_int(p, base, "n_particles", t.n_particles));
      t.delta0 = get_num(p, base, "delta0", t.delta0);
      t.weight = get_num(p, base, "weight", t.weight);
      t.mass = get_num(p, base, "mass", t.mass);
      if (t.n_particles < 2) fail(ptr_of(base, "n_particles"), "needs at least 2 particles");
      require_positive(t.delta0, ptr_of(base, "delta0"));
      require_positive(t.weight, ptr_of(base, "weight"));
      require_positive(t.mass, ptr_of(base, "mass"));
      break;
    }
    case ExperimentId::double_well: {
      check_keys(p, base, {"height", "half_width", "lambda", "beta", "mass"});
      auto& t = cfg.double_well;
      t.height = get_num(p, base, "height", t.height);
      t.half_width = get_num(p, base, "half_width", t.half_width);
      t.lambda = get_num(p, base, "lambda", t.lambda);
      t.beta = get_num(p, base, "beta", t.beta);
      t.mass = get_num(p, base, "mass", t.mass);
      require_positive(t.height, ptr_of(base, "height"));
      require_positive(t.half_width, ptr_of(base, "half_width"));
      require_positive(t.beta, ptr_of(base, "beta"));
      require_positive(t.mass, ptr_of(base, "mass"));
      if (!(t.lambda > 0.0) || t.lambda > 1.0)
        fail(ptr_of(base, "lambda"), "must lie in (0, 1]");
      break;
    }
    case ExperimentId::gmm: {
      check_keys(p, base,
                 {"n_data", "data_seed", "theta1", "theta2", "sigma1_sq", "sigma2_sq", "sigma_y_sq",
                  "mass", "sand", "traj_factor"});
      auto& t = cfg.gmm;
      t.n_data = static_cast<int>(get_int(p, base, "n_data", t.n_data));
      t.data_seed = get_uint(p, base, "data_seed", t.data_seed);
      t.theta1 = get_num(p, base, "theta1", t.theta1);
      t.theta2 = get_num(p, base, "theta2", t.theta2);
      t.sigma1_sq = get_num(p, base, "sigma1_sq", t.sigma1_sq);
      t.sigma2_sq = get_num(p, base, "sigma2_sq", t.sigma2_sq);
      t.sigma_y_sq = get_num(p, base, "sigma_y_sq", t.sigma_y_sq);
      t.mass = get_num(p, base, "mass", t.mass);
      t.traj_factor = get_num(p, base, "traj_factor", t.traj_factor);
      const std::string sand = get_str(p, base, "sand", "auto");
      if (sand == "auto")
        t.sand = true;
      else if (sand == "none")
        t.sand = false;
      else
        fail(ptr_of(base, "sand"), "expected \"auto\" or \"none\"");
      if (t.n_data < 1) fail(ptr_of(base, "n_data"), "needs at least one observation");
      require_finite(t.theta1, ptr_of(base, "theta1"));
      require_finite(t.theta2, ptr_of(base, "theta2"));
      require_positive(t.sigma1_sq, ptr_of(base, "sigma1_sq"));
      require_positive(t.sigma2_sq, ptr_of(base, "sigma2_sq"));
      require_positive(t.sigma_y_sq, ptr_of(base, "sigma_y_sq"));
      require_positive(t.mass, ptr_of(base, "mass"));
      require_positive(t.traj_factor, ptr_of(base, "traj_factor"));
      break;
    }
    case ExperimentId::error_sweep:
      break;
  }
}

void parse_sweep_block(const json& doc, ExperimentConfig& cfg) {
  const json& s = req_object(doc, "", "sweep");
  const std::string base = "/sweep";
  check_keys(s, base,
             {"mode", "n_particles", "batch_size", "horizon", "n_replicas", "step_sizes",
              "init_sigma", "alpha", "beta", "mass"});
  auto& sw = cfg.sweep;
  const std::string mode = get_str(s, base, "mode", "batch");
  if (mode == "batch")
    sw.deterministic = false;
  else if (mode == "deterministic")
    sw.deterministic = true;
  else
    fail(ptr_of(base, "mode"), "expected \"batch\" or \"deterministic\"");
  sw.n_particles = static_cast<int>(get_int(s, base, "n_particles", sw.n_particles));
  sw.batch_size = static_cast<int>(get_int(s, base, "batch_size", sw.batch_size));
  sw.horizon = get_num(s, base, "horizon", sw.horizon);
  sw.n_replicas = static_cast<int>(get_int(s, base, "n_replicas", sw.n_replicas));
  sw.step_sizes = get_num_array(s, base, "step_sizes");
  sw.init_sigma = get_num(s, base, "init_sigma", sw.init_sigma);
  sw.alpha = get_num(s, base, "alpha", sw.alpha);
  sw.beta = get_num(s, base, "beta", sw.beta);
  sw.mass = get_num(s, base, "mass", sw.mass);

  if (sw.n_particles < 2) fail(ptr_of(base, "n_particles"), "needs at least 2 particles");
  if (sw.batch_size < 1 || sw.batch_size > sw.n_particles - 1)
    fail(ptr_of(base, "batch_size"), "must lie in [1, n_particles - 1]");
  require_positive(sw.horizon, ptr_of(base, "horizon"));
  if (sw.n_replicas < 1) fail(ptr_of(base, "n_replicas"), "needs at least one replica");
  if (sw.step_sizes.size() < 3)
    fail(ptr_of(base, "step_sizes"), "needs at least 3 step sizes to identify a slope");
  for (std::size_t i = 0; i < sw.step_sizes.size(); ++i) {
    const std::string ptr = ptr_of(base, "step_sizes") + "/" + std::to_string(i);
    require_positive(sw.step_sizes[i], ptr);
    if (i > 0 && !(sw.step_sizes[i] < sw.step_sizes[i - 1]))
      fail(ptr, "step sizes must be strictly decreasing");
    const double steps = sw.horizon / sw.step_sizes[i];
    if (std::fabs(steps - std::round(steps)) > 1e-9 * steps)
      fail(ptr, "horizon must be an integer multiple of every step size");
  }
  require_positive(sw.init_sigma, ptr_of(base, "init_sigma"));
  require_positive(sw.alpha, ptr_of(base, "alpha"));
  require_positive(sw.beta, ptr_of(base, "beta"));
  require_positive(sw.mass, ptr_of(base, "mass"));
}

int target_particle_count(const ExperimentConfig& cfg) {
  return cfg.experiment == ExperimentId::test_example ? cfg.test_example.n_particles
                                                      : cfg.dyson.n_particles;
}

void parse_sampling(const json& doc, ExperimentConfig& cfg) {
  const bool particle = cfg.is_particle_experiment();
  if (particle)
    check_keys(doc, "",
               {"experiment", "seed", "output_dir", "samplers", "update_mode", "batch_size",
                "schedule", "n_iterations", "n_burnin", "n_chains", "include_burnin_in_density",
                "histogram", "checkpoints", "reference", "init", "potential"});
  else
    check_keys(doc, "",
               {"experiment", "seed", "output_dir", "samplers", "batch_size", "schedule",
                "n_iterations", "n_burnin", "n_chains", "thin", "histogram", "reference", "init",
                "potential"});

  parse_potential(doc, cfg);
  cfg.samplers = parse_samplers(doc, cfg.experiment);
  cfg.schedule = parse_schedule(doc, cfg.experiment == ExperimentId::gmm);

  cfg.n_iterations = get_uint(doc, "", "n_iterations", 0);
  if (cfg.n_iterations == 0) fail("/n_iterations", "missing or zero; needs at least 1 iteration");
  cfg.n_burnin = get_uint(doc, "", "n_burnin", 0);
  if (cfg.n_burnin >= cfg.n_iterations)
    fail("/n_burnin", "burn-in must leave at least one sampling iteration");
  cfg.n_chains = static_cast<int>(get_int(doc, "", "n_chains", 1));
  if (cfg.n_chains < 1) fail("/n_chains", "needs at least one chain");

  cfg.batch_size = static_cast<int>(get_int(doc, "", "batch_size", 0));
  if (cfg.batch_size < 0) fail("/batch_size", "must be 0 (full) or positive");
  const bool batched = std::any_of(cfg.samplers.begin(), cfg.samplers.end(), [](SamplerKind k) {
    return k == SamplerKind::rb_shmc || k == SamplerKind::rbmc;
  });
  if (cfg.batch_size > 0 && particle && cfg.batch_size > target_particle_count(cfg) - 1)
    fail("/batch_size", "must lie in [1, n_particles - 1] (or 0 for the full sum)");
  if (cfg.batch_size > 0 && cfg.experiment == ExperimentId::gmm &&
      cfg.batch_size > cfg.gmm.n_data)
    fail("/batch_size", "must lie in [1, n_data] (or 0 for all data)");
  if (cfg.batch_size > 0 && !batched)
    fail("/batch_size", "only the random-batch kinds use a batch size");

  if (particle) {
    const std::string mode = get_str(doc, "", "update_mode", "single-particle");
    try {
      cfg.update_mode = update_mode_from_string(mode);
    } catch (const std::exception& ex) {
      fail("/update_mode", ex.what());
    }
    const bool has_rbmc = std::find(cfg.samplers.begin(), cfg.samplers.end(),
                                    SamplerKind::rbmc) != cfg.samplers.end();
    if (has_rbmc && cfg.update_mode == UpdateMode::all_particle)
      fail("/update_mode", "rbmc moves one particle at a time; use single-particle");
    cfg.include_burnin_in_density = get_bool(doc, "", "include_burnin_in_density", false);
    cfg.init = parse_particle_init(doc, target_particle_count(cfg));
    cfg.checkpoints = get_num_array(doc, "", "checkpoints");
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
      const std::string ptr = "/checkpoints/" + std::to_string(i);
      require_positive(cfg.checkpoints[i], ptr);
      if (i > 0 && !(cfg.checkpoints[i] > cfg.checkpoints[i - 1]))
        fail(ptr, "checkpoints must be strictly increasing");
    }
  } else {
    cfg.thin = get_uint(doc, "", "thin", 1);
    if (cfg.thin == 0) fail("/thin", "must be at least 1");
    cfg.init_position = parse_vector_init(doc, cfg.dimension());
  }

  if (find(doc, "histogram")) cfg.histogram = parse_histogram(doc, cfg);

  const std::string ref = get_str(doc, "", "reference", "none");
  try {
    cfg.reference = reference_from_string(ref);
  } catch (const ConfigError&) {
    fail("/reference", "expected one of none, semicircle, mean-field, quadrature");
  }
  if (cfg.reference != ReferenceKind::none && !cfg.histogram)
    fail("/reference", "a reference density needs a histogram to compare against");
  if (cfg.reference == ReferenceKind::semicircle && cfg.experiment != ExperimentId::dyson)
    fail("/reference", "the semicircle law is the log-gas equilibrium; use it with dyson");
  if (cfg.reference == ReferenceKind::mean_field && cfg.experiment != ExperimentId::test_example)
    fail("/reference", "the mean-field fixed point applies to test_example");
  if (cfg.reference == ReferenceKind::quadrature && cfg.experiment != ExperimentId::double_well)
    fail("/reference", "the quadrature reference applies to double_well");
  if (!cfg.checkpoints.empty() && cfg.reference == ReferenceKind::none)
    fail("/checkpoints", "checkpoint errors need a reference density");
}

}  // namespace

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::test_example: return "test_example";
    case ExperimentId::dyson: return "dyson";
    case ExperimentId::double_well: return "double_well";
    case ExperimentId::gmm: return "gmm";
    case ExperimentId::error_sweep: return "error_sweep";
  }
  return "?";
}

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::none: return "none";
    case ReferenceKind::semicircle: return "semicircle";
    case ReferenceKind::mean_field: return "mean-field";
    case ReferenceKind::quadrature: return "quadrature";
  }
  return "?";
}

ExperimentId experiment_from_string(const std::string& s) {
  if (s == "test_example") return ExperimentId::test_example;
  if (s == "dyson") return ExperimentId::dyson;
  if (s == "double_well") return ExperimentId::double_well;
  if (s == "gmm") return ExperimentId::gmm;
  if (s == "error_sweep") return ExperimentId::error_sweep;
  throw ConfigError("config error at /experiment: unknown experiment \"" + s +
                    "\" (expected one of test_example, dyson, double_well, gmm, error_sweep)");
}

ReferenceKind reference_from_string(const std::string& s) {
  if (s == "none") return ReferenceKind::none;
  if (s == "semicircle") return ReferenceKind::semicircle;
  if (s == "mean-field") return ReferenceKind::mean_field;
  if (s == "quadrature") return ReferenceKind::quadrature;
  throw ConfigError("unknown reference kind \"" + s + "\"");
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  ExperimentConfig cfg;
  cfg.experiment = experiment_from_string(req_str(doc, "", "experiment"));
  cfg.seed = get_uint(doc, "", "seed", 1);
  cfg.output_dir = req_str(doc, "", "output_dir");
  if (cfg.output_dir.empty()) fail("/output_dir", "must not be empty");

  if (cfg.experiment == ExperimentId::error_sweep) {
    check_keys(doc, "", {"experiment", "seed", "output_dir", "sweep"});
    parse_sweep_block(doc, cfg);
  } else {
    parse_sampling(doc, cfg);
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json doc;
  doc["experiment"] = to_string(cfg.experiment);
  doc["seed"] = cfg.seed;
  doc["output_dir"] = cfg.output_dir;

  if (cfg.experiment == ExperimentId::error_sweep) {
    nlohmann::json s;
    s["mode"] = cfg.sweep.deterministic ? "deterministic" : "batch";
    s["n_particles"] = cfg.sweep.n_particles;
    s["batch_size"] = cfg.sweep.batch_size;
    s["horizon"] = cfg.sweep.horizon;
    s["n_replicas"] = cfg.sweep.n_replicas;
    s["step_sizes"] = cfg.sweep.step_sizes;
    s["init_sigma"] = cfg.sweep.init_sigma;
    s["alpha"] = cfg.sweep.alpha;
    s["beta"] = cfg.sweep.beta;
    s["mass"] = cfg.sweep.mass;
    doc["sweep"] = std::move(s);
    return doc;
  }

  nlohmann::json kinds = nlohmann::json::array();
  for (SamplerKind k : cfg.samplers) kinds.push_back(to_string(k));
  doc["samplers"] = std::move(kinds);
  doc["batch_size"] = cfg.batch_size;

  nlohmann::json sched = nlohmann::json::array();
  for (const ScheduleSegment& seg : cfg.schedule) {
    nlohmann::json e;
    e["iterations"] = seg.iterations;
    e["leapfrog_steps"] = seg.leapfrog_steps;
    e["step_size"] = seg.step_size;
    sched.push_back(std::move(e));
  }
  doc["schedule"] = std::move(sched);
  doc["n_iterations"] = cfg.n_iterations;
  doc["n_burnin"] = cfg.n_burnin;
  doc["n_chains"] = cfg.n_chains;
  doc["reference"] = to_string(cfg.reference);

  if (cfg.histogram) {
    nlohmann::json h;
    h["lo"] = cfg.histogram->lo;
    h["hi"] = cfg.histogram->hi;
    h["bins"] = cfg.histogram->bins;
    if (cfg.is_vector_experiment()) h["coord"] = cfg.histogram->coord;
    doc["histogram"] = std::move(h);
  }

  if (cfg.is_particle_experiment()) {
    doc["update_mode"] = to_string(cfg.update_mode);
    doc["include_burnin_in_density"] = cfg.include_burnin_in_density;
    if (!cfg.checkpoints.empty()) doc["checkpoints"] = cfg.checkpoints;
    nlohmann::json init;
    switch (cfg.init.kind) {
      case ParticleInit::Kind::given:
        init["kind"] = "given";
        init["positions"] = cfg.init.positions;
        break;
      case ParticleInit::Kind::uniform:
      case ParticleInit::Kind::linspace:
        init["kind"] = cfg.init.kind == ParticleInit::Kind::uniform ? "uniform" : "linspace";
        init["lo"] = cfg.init.lo;
        init["hi"] = cfg.init.hi;
        break;
      case ParticleInit::Kind::gaussian:
        init["kind"] = "gaussian";
        init["sigma"] = cfg.init.sigma;
        break;
    }
    doc["init"] = std::move(init);
  } else {
    doc["thin"] = cfg.thin;
    doc["init"] = nlohmann::json{{"position", cfg.init_position}};
  }

  nlohmann::json pot;
  switch (cfg.experiment) {
    case ExperimentId::test_example:
      pot["n_particles"] = cfg.test_example.n_particles;
      pot["alpha"] = cfg.test_example.alpha;
      pot["beta"] = cfg.test_example.beta;
      pot["mass"] = cfg.test_example.mass;
      break;
    case ExperimentId::dyson:
      pot["n_particles"] = cfg.dyson.n_particles;
      pot["delta0"] = cfg.dyson.delta0;
      pot["weight"] = cfg.dyson.weight;
      pot["mass"] = cfg.dyson.mass;
      break;
    case ExperimentId::double_well:
      pot["height"] = cfg.double_well.height;
      pot["half_width"] = cfg.double_well.half_width;
      pot["lambda"] = cfg.double_well.lambda;
      pot["beta"] = cfg.double_well.beta;
      pot["mass"] = cfg.double_well.mass;
      break;
    case ExperimentId::gmm:
      pot["n_data"] = cfg.gmm.n_data;
      pot["data_seed"] = cfg.gmm.data_seed;
      pot["theta1"] = cfg.gmm.theta1;
      pot["theta2"] = cfg.gmm.theta2;
      pot["sigma1_sq"] = cfg.gmm.sigma1_sq;
      pot["sigma2_sq"] = cfg.gmm.sigma2_sq;
      pot["sigma_y_sq"] = cfg.gmm.sigma_y_sq;
      pot["mass"] = cfg.gmm.mass;
      pot["sand"] = cfg.gmm.sand ? "auto" : "none";
      pot["traj_factor"] = cfg.gmm.traj_factor;
      break;
    case ExperimentId::error_sweep:
      break;
  }
  doc["potential"] = std::move(pot);
  return doc;
}

}  // namespace shmc::cli
