#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shmc/chain_record.hpp"
#include "shmc/diagnostics/histogram.hpp"
#include "shmc/forces/batch.hpp"
#include "shmc/forces/cell_list.hpp"
#include "shmc/forces/pair_forces.hpp"
#include "shmc/integrators/euler_maruyama.hpp"
#include "shmc/integrators/leapfrog.hpp"
#include "shmc/metropolis.hpp"
#include "shmc/rng.hpp"
#include "shmc/samplers/kind.hpp"
#include "shmc/schedule.hpp"

namespace shmc {

// Initial configuration of a particle chain. Random kinds draw from the
// chain's own stream before the first iteration; linspace places particles
// at the midpoints of a regular grid over [lo, hi].
struct ParticleInit {
  enum class Kind { given, uniform, linspace, gaussian };
  Kind kind = Kind::linspace;
  double lo = -1.0;
  double hi = 1.0;
  double sigma = 1.0;
  std::vector<double> positions;
};

struct ParticleChainOptions {
  SamplerKind kind = SamplerKind::rb_shmc;
  UpdateMode mode = UpdateMode::single_particle;
  int batch_size = 0;  // <= 0 means the full batch (N-1)
  SamplerSchedule schedule = SamplerSchedule::constant(10, 1e-2);
  std::uint64_t n_iterations = 0;
  std::uint64_t n_burnin = 0;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  double hist_lo = -2.0;
  double hist_hi = 2.0;
  int hist_bins = 100;
  ParticleInit init;
  // Ascending evolution times at which the accumulated histogram is compared
  // against reference_mass (per-bin masses; empty disables the error column).
  std::vector<double> checkpoint_times;
  std::vector<double> reference_mass;
  bool record_accept_flags = false;
  // Fold burn-in configurations into the density as well (off by default:
  // burn-in still counts acceptances separately either way).
  bool include_burnin_in_density = false;
};

// Markov chain over an interacting-particle target. One iteration either
// moves a uniformly chosen particle (single-particle mode) or the whole
// configuration (all-particle mode):
//
//   shmc     exact forces on the smooth part, leapfrog trajectory
//   rb-shmc  random-batch forces, fresh batch per leapfrog step, the same
//            batch for both half kicks of that step
//   rbmc     random-batch overdamped Langevin proposals (single-particle)
//
// Every variant accepts with the short-range factor exp(-beta_eff * dU2);
// targets without a short-range part accept always. Momenta are resampled
// from N(0, mass/beta_eff) at the start of every iteration and discarded
// afterwards.
//
// Draw order within one iteration (fixed, per stream): particle pick (single
// modes), momentum refresh, then per leapfrog step the batch indices (one
// bounded draw per batch slot; nothing at full batch), for rbmc one noise
// draw per step after its batch, and finally one acceptance uniform, drawn
// only when an acceptance test actually runs (short-range targets, finite
// trajectory).
template <ParticleTarget T>
class ParticleChain {
 public:
  static_assert(T::dim == 1, "particle chains are one-dimensional");

  ParticleChain(const T& target, ParticleChainOptions opt)
      : t_(target),
        opt_(std::move(opt)),
        rng_(opt_.seed, opt_.stream),
        n_(target.n_particles()),
        batch_draw_(target.n_particles()) {
    if (opt_.n_iterations == 0)
      throw std::invalid_argument("ParticleChain: n_iterations must be positive");
    if (opt_.n_burnin >= opt_.n_iterations)
      throw std::invalid_argument("ParticleChain: burn-in must leave at least one iteration");
    resolve_batch_size();
    if (opt_.kind == SamplerKind::rbmc && opt_.mode == UpdateMode::all_particle)
      throw std::invalid_argument("ParticleChain: rbmc moves one particle at a time");
    acc_ = DensityHistogram(opt_.hist_lo, opt_.hist_hi, opt_.hist_bins);
    if (!opt_.reference_mass.empty() &&
        static_cast<int>(opt_.reference_mass.size()) != opt_.hist_bins)
      throw std::invalid_argument("ParticleChain: reference_mass does not match hist_bins");
    if (!std::is_sorted(opt_.checkpoint_times.begin(), opt_.checkpoint_times.end()))
      throw std::invalid_argument("ParticleChain: checkpoint_times must be ascending");
    init_positions();
    if (T::has_short_range && opt_.mode == UpdateMode::single_particle) {
      cells_.emplace(short_range_cutoff());
      cells_->rebuild(std::span<const Vec<1>>(xs_.data(), xs_.size()));
    }
    if (opt_.mode == UpdateMode::single_particle) {
      occ_.assign(static_cast<std::size_t>(opt_.hist_bins), 0);
      for (const auto& x : xs_) bump_occupancy(x[0], +1);
    } else {
      ps_.resize(xs_.size());
      xsave_.resize(xs_.size());
      fbuf_.resize(xs_.size());
      full_batches_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(s_));
      if (s_ == n_ - 1) fill_full_batches();
    }
  }

  std::span<const Vec<1>> positions() const { return {xs_.data(), xs_.size()}; }

  ChainRecord run() {
    if (ran_) throw std::logic_error("ParticleChain::run: chain already consumed");
    ran_ = true;
    const auto t0 = std::chrono::steady_clock::now();
    const auto checkpoints = plan_checkpoints();
    std::size_t next_cp = 0;

    ChainRecord rec;
    rec.n_burnin = opt_.n_burnin;
    rec.n_samples = opt_.n_iterations - opt_.n_burnin;
    if (opt_.record_accept_flags) rec.accept_flags.reserve(rec.n_samples);

    for (std::uint64_t m = 1; m <= opt_.n_iterations; ++m) {
      const auto [steps, dt] = opt_.schedule.entry(m);
      bool accepted = false;
      try {
        switch (opt_.kind) {
          case SamplerKind::shmc:
          case SamplerKind::rb_shmc:
            accepted = opt_.mode == UpdateMode::single_particle ? iterate_single(steps, dt)
                                                                : iterate_all(steps, dt);
            break;
          case SamplerKind::rbmc:
            accepted = iterate_rbmc(steps, dt);
            break;
          case SamplerKind::hmc:
            throw std::invalid_argument("hmc is not available for particle targets");
        }
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string(to_string(opt_.kind)) + " chain failed at iteration " +
                                 std::to_string(m) + ": " + e.what());
      }
      if (m <= opt_.n_burnin) {
        rec.burnin_accepts += accepted ? 1 : 0;
      } else {
        rec.sampling_accepts += accepted ? 1 : 0;
        if (opt_.record_accept_flags) rec.accept_flags.push_back(accepted ? 1 : 0);
      }
      if (m > opt_.n_burnin || opt_.include_burnin_in_density) {
        if (opt_.mode == UpdateMode::single_particle) {
          acc_.add_counts(occ_, occ_overflow_);
        } else {
          for (const auto& x : xs_) acc_.add(x[0]);
        }
      }
      while (next_cp < checkpoints.size() && checkpoints[next_cp].first == m) {
        CheckpointRow row;
        row.iteration = m;
        row.evolution_time = checkpoints[next_cp].second;
        row.error = checkpoint_error();
        row.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.checkpoints.push_back(row);
        ++next_cp;
      }
    }

    rec.evolution_time = opt_.schedule.evolution_time_after(opt_.n_iterations, n_);
    rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.histogram = std::move(acc_);
    return rec;
  }

 private:
  void resolve_batch_size() {
    const int full = n_ - 1;
    if (opt_.kind == SamplerKind::shmc) {
      if (opt_.batch_size > 0 && opt_.batch_size != full)
        throw std::invalid_argument("ParticleChain: shmc always uses the full batch");
      s_ = full;
      return;
    }
    s_ = opt_.batch_size <= 0 ? full : opt_.batch_size;
    if (s_ < 1 || s_ > full)
      throw std::invalid_argument("ParticleChain: batch size must lie in [1, N-1]");
  }

  double short_range_cutoff() const {
    if constexpr (T::has_short_range)
      return t_.cutoff();
    else
      return 1.0;
  }

  void init_positions() {
    xs_.resize(static_cast<std::size_t>(n_));
    switch (opt_.init.kind) {
      case ParticleInit::Kind::given: {
        if (static_cast<int>(opt_.init.positions.size()) != n_)
          throw std::invalid_argument("ParticleChain: init positions do not match N");
        for (int i = 0; i < n_; ++i) xs_[static_cast<std::size_t>(i)] = {opt_.init.positions[static_cast<std::size_t>(i)]};
        break;
      }
      case ParticleInit::Kind::uniform: {
        const double lo = opt_.init.lo, hi = opt_.init.hi;
        if (!(hi > lo)) throw std::invalid_argument("ParticleChain: init needs hi > lo");
        for (int i = 0; i < n_; ++i) xs_[static_cast<std::size_t>(i)] = {lo + (hi - lo) * rng_.uniform01()};
        break;
      }
      case ParticleInit::Kind::linspace: {
        const double lo = opt_.init.lo, hi = opt_.init.hi;
        if (!(hi > lo)) throw std::invalid_argument("ParticleChain: init needs hi > lo");
        const double w = (hi - lo) / n_;
        for (int i = 0; i < n_; ++i) xs_[static_cast<std::size_t>(i)] = {lo + (i + 0.5) * w};
        break;
      }
      case ParticleInit::Kind::gaussian: {
        if (!(opt_.init.sigma > 0.0)) throw std::invalid_argument("ParticleChain: init sigma must be positive");
        for (int i = 0; i < n_; ++i) xs_[static_cast<std::size_t>(i)] = {rng_.normal(opt_.init.sigma)};
        break;
      }
    }
  }

  void fill_full_batches() {
    for (int i = 0; i < n_; ++i) {
      int* row = full_batches_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s_);
      int c = 0;
      for (int j = 0; j < n_; ++j)
        if (j != i) row[c++] = j;
    }
  }

  // Rows carry the requested evolution time, not the slightly later time of
  // the iteration that crosses it, so series from different schedules join
  // on a common grid. The iteration column pins down the actual position.
  std::vector<std::pair<std::uint64_t, double>> plan_checkpoints() const {
    std::vector<std::pair<std::uint64_t, double>> cps;
    for (double te : opt_.checkpoint_times) {
      const std::uint64_t m = opt_.schedule.iterations_to_reach(te, n_);
      if (m == 0 || m > opt_.n_iterations) continue;
      if (!cps.empty() && cps.back().first == m) continue;
      cps.emplace_back(m, te);
    }
    return cps;
  }

  double checkpoint_error() const {
    if (opt_.reference_mass.empty() || acc_.total == 0) return -1.0;
    return relative_error(acc_, std::span<const double>(opt_.reference_mass));
  }

  void bump_occupancy(double x, std::int64_t delta) {
    const int b = acc_.bin_index(x);
    if (b < 0)
      occ_overflow_ += delta;
    else
      occ_[static_cast<std::size_t>(b)] += delta;
  }

  // Commits an accepted single-particle move: occupancy, cell list, state.
  void commit_single(int i, const Vec<1>& x_new) {
    bump_occupancy(xs_[static_cast<std::size_t>(i)][0], -1);
    bump_occupancy(x_new[0], +1);
    if (cells_) cells_->move(i, x_new);
    xs_[static_cast<std::size_t>(i)] = x_new;
  }

  bool accept_single(int i, const Vec<1>& x_new) {
    if constexpr (T::has_short_range) {
      const double delta = u2_delta_cells<T>(t_, *cells_, i, x_new, nbr_scratch_);
      const double u = rng_.uniform01();
      if (!metropolis_accept(delta, t_.beta_eff(), u)) return false;
    }
    commit_single(i, x_new);
    return true;
  }

  bool iterate_single(int L, double dt) {
    const int i = static_cast<int>(rng_.below(static_cast<std::uint32_t>(n_)));
    Vec<1> x = xs_[static_cast<std::size_t>(i)];
    Vec<1> p{rng_.normal(std::sqrt(t_.mass() / t_.beta_eff()))};
    const std::span<const Vec<1>> frozen(xs_.data(), xs_.size());
    IntegratorReport rep;
    if (s_ == n_ - 1) {
      rep = leapfrog<1>(x, p, dt, L, t_.mass(),
                        [&](const Vec<1>& y) { return full_force_at<T>(t_, frozen, y, i); });
    } else {
      rep = leapfrog_random_batch<1>(
          x, p, dt, L, t_.mass(), [&]() { redraw_batch(i); },
          [&](const Vec<1>& y) { return batch_force_at<T>(t_, frozen, y, cur_batch_); });
    }
    if (!rep.finite) return false;
    return accept_single(i, x);
  }

  bool iterate_rbmc(int L, double dt) {
    const int i = static_cast<int>(rng_.below(static_cast<std::uint32_t>(n_)));
    Vec<1> x = xs_[static_cast<std::size_t>(i)];
    const std::span<const Vec<1>> frozen(xs_.data(), xs_.size());
    IntegratorReport rep;
    if (s_ == n_ - 1) {
      rep = euler_maruyama<1>(
          x, dt, L, t_.beta_eff(), []() {},
          [&](const Vec<1>& y) { return full_force_at<T>(t_, frozen, y, i); }, rng_);
    } else {
      rep = euler_maruyama<1>(
          x, dt, L, t_.beta_eff(), [&]() { redraw_batch(i); },
          [&](const Vec<1>& y) { return batch_force_at<T>(t_, frozen, y, cur_batch_); }, rng_);
    }
    if (!rep.finite) return false;
    return accept_single(i, x);
  }

  void redraw_batch(int i) {
    if (s_ == 1) {
      batch_one_[0] = static_cast<int>(
          rng_.below_excluding(static_cast<std::uint32_t>(n_), static_cast<std::uint32_t>(i)));
      cur_batch_ = std::span<const int>(batch_one_.data(), 1);
    } else {
      batch_draw_.draw_excluding(rng_, s_, i);
      cur_batch_ = std::span<const int>(batch_draw_.indices().data(), static_cast<std::size_t>(s_));
    }
  }

  bool iterate_all(int L, double dt) {
    const double sd = std::sqrt(t_.mass() / t_.beta_eff());
    for (int i = 0; i < n_; ++i) ps_[static_cast<std::size_t>(i)] = {rng_.normal(sd)};
    xsave_ = xs_;
    const std::span<Vec<1>> xspan(xs_.data(), xs_.size());
    const std::span<Vec<1>> pspan(ps_.data(), ps_.size());
    const std::span<Vec<1>> fspan(fbuf_.data(), fbuf_.size());
    IntegratorReport rep;
    if (s_ == n_ - 1) {
      auto force = [&](std::span<const Vec<1>> xs, std::span<Vec<1>> out) {
        for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = full_force_at<T>(t_, xs, xs[static_cast<std::size_t>(i)], i);
      };
      rep = leapfrog_all<1>(xspan, pspan, dt, L, t_.mass(), force, fspan);
    } else {
      auto begin = [&]() { redraw_all_batches(); };
      auto force = [&](std::span<const Vec<1>> xs, std::span<Vec<1>> out) {
        const double inv_s = 1.0 / static_cast<double>(s_);
        for (int i = 0; i < n_; ++i) {
          const Vec<1> xi = xs[static_cast<std::size_t>(i)];
          const int* row = full_batches_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s_);
          double acc = 0.0;
          for (int c = 0; c < s_; ++c) acc += t_.pair_force(vsub<1>(xi, xs[static_cast<std::size_t>(row[c])]))[0];
          out[static_cast<std::size_t>(i)][0] = t_.confinement_force(xi)[0] + inv_s * acc;
        }
      };
      rep = leapfrog_all_random_batch<1>(xspan, pspan, dt, L, t_.mass(), begin, force, fspan);
    }
    if (!rep.finite) {
      xs_ = xsave_;
      return false;
    }
    if constexpr (T::has_short_range) {
      const double delta = total_u2<T>(t_, std::span<const Vec<1>>(xs_.data(), xs_.size())) -
                           total_u2<T>(t_, std::span<const Vec<1>>(xsave_.data(), xsave_.size()));
      const double u = rng_.uniform01();
      if (!metropolis_accept(delta, t_.beta_eff(), u)) {
        xs_ = xsave_;
        return false;
      }
    }
    return true;
  }

  void redraw_all_batches() {
    if (s_ == 1) {
      for (int i = 0; i < n_; ++i)
        full_batches_[static_cast<std::size_t>(i)] = static_cast<int>(
            rng_.below_excluding(static_cast<std::uint32_t>(n_), static_cast<std::uint32_t>(i)));
      return;
    }
    for (int i = 0; i < n_; ++i) {
      batch_draw_.draw_excluding(rng_, s_, i);
      std::copy_n(batch_draw_.indices().data(), s_,
                  full_batches_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s_));
    }
  }

  T t_;
  ParticleChainOptions opt_;
  RngStream rng_;
  int n_;
  int s_ = 1;
  bool ran_ = false;

  std::vector<Vec<1>> xs_;
  std::optional<CellList<1>> cells_;
  BatchDraw batch_draw_;
  std::vector<int> batch_one_ = std::vector<int>(1, 0);
  std::span<const int> cur_batch_{};
  std::vector<int> full_batches_;
  std::vector<Vec<1>> ps_, xsave_, fbuf_;
  std::vector<int> nbr_scratch_;

  DensityHistogram acc_;
  std::vector<std::int64_t> occ_;
  std::int64_t occ_overflow_ = 0;
};

}  // namespace shmc
