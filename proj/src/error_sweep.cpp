#include "shmc/diagnostics/error_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shmc/forces/batch.hpp"
#include "shmc/forces/pair_forces.hpp"
#include "shmc/integrators/leapfrog.hpp"
#include "shmc/potentials/smooth_pair.hpp"
#include "shmc/rng.hpp"

namespace shmc {

namespace {

int steps_for(double horizon, double dt) {
  const double k = horizon / dt;
  const int steps = static_cast<int>(std::llround(k));
  if (steps <= 0 || std::fabs(steps * dt - horizon) > 1e-9 * horizon)
    throw std::invalid_argument("error sweep: horizon must be an integer multiple of every dt");
  return steps;
}

void validate(const SweepOptions& o) {
  if (o.n_particles < 2) throw std::invalid_argument("error sweep: needs at least 2 particles");
  if (o.batch_size < 1 || o.batch_size > o.n_particles - 1)
    throw std::invalid_argument("error sweep: batch size must lie in [1, N-1]");
  if (o.n_replicas < 1) throw std::invalid_argument("error sweep: needs replicas");
  if (o.step_sizes.size() < 3)
    throw std::invalid_argument("error sweep: needs at least 3 step sizes to identify a slope");
  if (!(o.init_sigma > 0.0)) throw std::invalid_argument("error sweep: init_sigma must be positive");
}

void full_forces(const SmoothPairTarget& t, std::span<const Vec<1>> xs, std::span<Vec<1>> out) {
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = full_force_at(t, xs, xs[static_cast<std::size_t>(i)], i);
}

// Per-particle Hamiltonian h = (U1 + sum p^2 / 2m) / N.
double h_per_particle(const SmoothPairTarget& t, std::span<const Vec<1>> xs,
                      std::span<const Vec<1>> ps, double mass) {
  double kin = 0.0;
  for (const auto& p : ps) kin += p[0] * p[0];
  return (total_u1(t, xs) + kin / (2.0 * mass)) / static_cast<double>(xs.size());
}

}  // namespace

double fit_log_slope(std::span<const double> dts, std::span<const double> errs) {
  if (dts.size() != errs.size() || dts.size() < 2)
    throw std::invalid_argument("fit_log_slope: needs matching series of length >= 2");
  const int n = static_cast<int>(dts.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(dts[static_cast<std::size_t>(i)] > 0.0) || !(errs[static_cast<std::size_t>(i)] > 0.0))
      throw std::invalid_argument("fit_log_slope: values must be positive");
    const double x = std::log(dts[static_cast<std::size_t>(i)]);
    const double y = std::log(errs[static_cast<std::size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_log_slope: degenerate step sizes");
  return (n * sxy - sx * sy) / denom;
}

double fit_log_slope_weighted(std::span<const double> dts, std::span<const double> errs,
                              std::span<const double> weights) {
  if (dts.size() != errs.size() || dts.size() != weights.size() || dts.size() < 2)
    throw std::invalid_argument("fit_log_slope_weighted: needs matching series of length >= 2");
  const int n = static_cast<int>(dts.size());
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (!(dts[ii] > 0.0) || !(errs[ii] > 0.0))
      throw std::invalid_argument("fit_log_slope_weighted: values must be positive");
    if (!(weights[ii] >= 0.0))
      throw std::invalid_argument("fit_log_slope_weighted: weights must be nonnegative");
    if (weights[ii] == 0.0) continue;
    const double w = weights[ii];
    const double x = std::log(dts[ii]);
    const double y = std::log(errs[ii]);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++used;
  }
  if (used < 2) throw std::invalid_argument("fit_log_slope_weighted: needs two weighted points");
  const double denom = sw * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_log_slope_weighted: degenerate step sizes");
  return (sw * sxy - sx * sy) / denom;
}

SweepResult hamiltonian_error_sweep(const SweepOptions& opts) {
  validate(opts);
  const int n = opts.n_particles;
  const int s = opts.batch_size;
  const SmoothPairTarget target(n, opts.alpha, opts.beta, opts.mass);
  const std::size_t nd = static_cast<std::size_t>(n);
  const int n_dts = static_cast<int>(opts.step_sizes.size());

  std::vector<double> strong_sq(static_cast<std::size_t>(n_dts), 0.0);
  std::vector<double> weak_sum(static_cast<std::size_t>(n_dts), 0.0);
  std::vector<double> weak_sum_sq(static_cast<std::size_t>(n_dts), 0.0);

  std::vector<Vec<1>> x0(nd), p0(nd), xe(nd), pe(nd), xb(nd), pb(nd), fbuf(nd);
  std::vector<int> batches(nd * static_cast<std::size_t>(s));
  BatchDraw draw(n);

  const double mom_sd = std::sqrt(opts.mass / opts.beta);
  for (int r = 0; r < opts.n_replicas; ++r) {
    RngStream rng(opts.seed, static_cast<std::uint64_t>(r));
    for (auto& x : x0) x = {rng.normal(opts.init_sigma)};
    for (auto& p : p0) p = {rng.normal(mom_sd)};

    for (int d = 0; d < n_dts; ++d) {
      const double dt = opts.step_sizes[static_cast<std::size_t>(d)];
      const int steps = steps_for(opts.horizon, dt);

      xe = x0;
      pe = p0;
      leapfrog_all<1>({xe.data(), nd}, {pe.data(), nd}, dt, steps, opts.mass,
                      [&](std::span<const Vec<1>> xs, std::span<Vec<1>> out) { full_forces(target, xs, out); },
                      {fbuf.data(), nd});

      xb = x0;
      pb = p0;
      auto begin = [&]() {
        if (s == 1) {
          for (int i = 0; i < n; ++i)
            batches[static_cast<std::size_t>(i)] = static_cast<int>(
                rng.below_excluding(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(i)));
        } else {
          for (int i = 0; i < n; ++i) {
            draw.draw_excluding(rng, s, i);
            std::copy_n(draw.indices().data(), s, batches.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s));
          }
        }
      };
      auto force = [&](std::span<const Vec<1>> xs, std::span<Vec<1>> out) {
        const double inv_s = 1.0 / static_cast<double>(s);
        for (int i = 0; i < n; ++i) {
          const Vec<1> xi = xs[static_cast<std::size_t>(i)];
          const int* row = batches.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s);
          double acc = 0.0;
          for (int c = 0; c < s; ++c)
            acc += target.pair_force(vsub<1>(xi, xs[static_cast<std::size_t>(row[c])]))[0];
          out[static_cast<std::size_t>(i)][0] = target.confinement_force(xi)[0] + inv_s * acc;
        }
      };
      leapfrog_all_random_batch<1>({xb.data(), nd}, {pb.data(), nd}, dt, steps, opts.mass, begin,
                                   force, {fbuf.data(), nd});

      const double he = h_per_particle(target, {xe.data(), nd}, {pe.data(), nd}, opts.mass);
      const double hb = h_per_particle(target, {xb.data(), nd}, {pb.data(), nd}, opts.mass);
      strong_sq[static_cast<std::size_t>(d)] += (hb - he) * (hb - he);
      const double dtanh = std::tanh(hb) - std::tanh(he);
      weak_sum[static_cast<std::size_t>(d)] += dtanh;
      weak_sum_sq[static_cast<std::size_t>(d)] += dtanh * dtanh;
    }
  }

  SweepResult res;
  std::vector<double> strong(static_cast<std::size_t>(n_dts)), weak(static_cast<std::size_t>(n_dts));
  std::vector<double> weak_weight(static_cast<std::size_t>(n_dts));
  bool fittable = true;
  const double r_count = static_cast<double>(opts.n_replicas);
  for (int d = 0; d < n_dts; ++d) {
    const auto di = static_cast<std::size_t>(d);
    SweepPoint pt;
    pt.dt = opts.step_sizes[di];
    pt.strong_error = std::sqrt(strong_sq[di] / r_count);
    const double mean = weak_sum[di] / r_count;
    pt.weak_error = std::fabs(mean);
    // Precision of ln|mean|: mean^2 over the squared standard error.
    const double var = std::max(weak_sum_sq[di] / r_count - mean * mean, 0.0);
    weak_weight[di] = var > 0.0 ? mean * mean * r_count / var : 0.0;
    strong[di] = pt.strong_error;
    weak[di] = pt.weak_error;
    fittable = fittable && pt.strong_error > 0.0 && pt.weak_error > 0.0;
    res.points.push_back(pt);
  }
  // A full batch reproduces the exact trajectory bitwise; the all-zero error
  // series has no slope to fit.
  if (fittable && n_dts >= 2) {
    res.strong_slope = fit_log_slope(opts.step_sizes, strong);
    res.weak_slope = fit_log_slope_weighted(opts.step_sizes, weak, weak_weight);
  }
  return res;
}

FourthMomentTrace fourth_moment_trace(const SweepOptions& opts, double dt) {
  if (opts.n_particles < 2) throw std::invalid_argument("fourth_moment_trace: needs at least 2 particles");
  if (opts.batch_size < 1 || opts.batch_size > opts.n_particles - 1)
    throw std::invalid_argument("fourth_moment_trace: batch size must lie in [1, N-1]");
  if (opts.n_replicas < 1) throw std::invalid_argument("fourth_moment_trace: needs replicas");
  if (!(opts.init_sigma > 0.0)) throw std::invalid_argument("fourth_moment_trace: init_sigma must be positive");
  const int steps = steps_for(opts.horizon, dt);

  const int n = opts.n_particles;
  const int s = opts.batch_size;
  const SmoothPairTarget target(n, opts.alpha, opts.beta, opts.mass);
  const std::size_t nd = static_cast<std::size_t>(n);

  std::vector<Vec<1>> xs(nd), ps(nd), fbuf(nd);
  std::vector<int> batches(nd * static_cast<std::size_t>(s));
  BatchDraw draw(n);
  std::vector<double> sums(static_cast<std::size_t>(steps) + 1, 0.0);

  auto p4_sum = [&]() {
    double acc = 0.0;
    for (const auto& p : ps) acc += p[0] * p[0] * p[0] * p[0];
    return acc;
  };

  const double mom_sd = std::sqrt(opts.mass / opts.beta);
  for (int r = 0; r < opts.n_replicas; ++r) {
    RngStream rng(opts.seed, static_cast<std::uint64_t>(r));
    for (auto& x : xs) x = {rng.normal(opts.init_sigma)};
    for (auto& p : ps) p = {rng.normal(mom_sd)};
    sums[0] += p4_sum();

    auto begin = [&]() {
      if (s == 1) {
        for (int i = 0; i < n; ++i)
          batches[static_cast<std::size_t>(i)] = static_cast<int>(
              rng.below_excluding(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(i)));
      } else {
        for (int i = 0; i < n; ++i) {
          draw.draw_excluding(rng, s, i);
          std::copy_n(draw.indices().data(), s, batches.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s));
        }
      }
    };
    auto force = [&](std::span<const Vec<1>> in, std::span<Vec<1>> out) {
      const double inv_s = 1.0 / static_cast<double>(s);
      for (int i = 0; i < n; ++i) {
        const Vec<1> xi = in[static_cast<std::size_t>(i)];
        const int* row = batches.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s);
        double acc = 0.0;
        for (int c = 0; c < s; ++c)
          acc += target.pair_force(vsub<1>(xi, in[static_cast<std::size_t>(row[c])]))[0];
        out[static_cast<std::size_t>(i)][0] = target.confinement_force(xi)[0] + inv_s * acc;
      }
    };
    for (int k = 1; k <= steps; ++k) {
      leapfrog_all_random_batch<1>({xs.data(), nd}, {ps.data(), nd}, dt, 1, opts.mass, begin, force,
                                   {fbuf.data(), nd});
      sums[static_cast<std::size_t>(k)] += p4_sum();
    }
  }

  FourthMomentTrace res;
  const double norm = static_cast<double>(opts.n_replicas) * n;
  for (int k = 0; k <= steps; ++k) {
    res.times.push_back(k * dt);
    const double m4 = sums[static_cast<std::size_t>(k)] / norm;
    res.moments.push_back(m4);
    res.max_moment = std::max(res.max_moment, m4);
  }
  return res;
}

DeterministicOrderResult deterministic_order_curve(const SweepOptions& opts) {
  validate(opts);
  const int n = opts.n_particles;
  const std::size_t nd = static_cast<std::size_t>(n);
  const SmoothPairTarget target(n, opts.alpha, opts.beta, opts.mass);
  const int n_dts = static_cast<int>(opts.step_sizes.size());

  std::vector<Vec<1>> x0(nd), p0(nd), xs(nd), ps(nd), fbuf(nd);
  std::vector<double> err_sq(static_cast<std::size_t>(n_dts), 0.0);
  auto forces = [&](std::span<const Vec<1>> in, std::span<Vec<1>> out) { full_forces(target, in, out); };

  const double mom_sd = std::sqrt(opts.mass / opts.beta);
  for (int r = 0; r < opts.n_replicas; ++r) {
    RngStream rng(opts.seed, static_cast<std::uint64_t>(r));
    for (auto& x : x0) x = {rng.normal(opts.init_sigma)};
    for (auto& p : p0) p = {rng.normal(mom_sd)};
    const double h0 = h_per_particle(target, {x0.data(), nd}, {p0.data(), nd}, opts.mass);

    for (int d = 0; d < n_dts; ++d) {
      const double dt = opts.step_sizes[static_cast<std::size_t>(d)];
      xs = x0;
      ps = p0;
      leapfrog_all<1>({xs.data(), nd}, {ps.data(), nd}, dt, steps_for(opts.horizon, dt), opts.mass,
                      forces, {fbuf.data(), nd});
      const double h = h_per_particle(target, {xs.data(), nd}, {ps.data(), nd}, opts.mass);
      err_sq[static_cast<std::size_t>(d)] += (h - h0) * (h - h0);
    }
  }

  DeterministicOrderResult res;
  res.step_sizes = opts.step_sizes;
  for (int d = 0; d < n_dts; ++d)
    res.errors.push_back(std::sqrt(err_sq[static_cast<std::size_t>(d)] / opts.n_replicas));
  res.slope = fit_log_slope(res.step_sizes, res.errors);
  return res;
}

}  // namespace shmc
