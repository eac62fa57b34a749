#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shmc/chain_record.hpp"
#include "shmc/forces/batch.hpp"
#include "shmc/forces/bayes_grad.hpp"
#include "shmc/integrators/euler_maruyama.hpp"
#include "shmc/integrators/leapfrog.hpp"
#include "shmc/metropolis.hpp"
#include "shmc/rng.hpp"
#include "shmc/samplers/kind.hpp"
#include "shmc/schedule.hpp"

namespace shmc {

// Low-dimensional target with a smooth/rough split: u1 drives trajectories,
// u2 decides acceptance, potential() = u1 + u2 is the full energy (used by
// the hmc baseline).
template <typename T>
concept VectorTarget = requires(const T t, const Vec<T::dim>& x) {
  requires T::dim >= 1;
  { t.beta() } -> std::convertible_to<double>;
  { t.mass() } -> std::convertible_to<double>;
  { t.potential(x) } -> std::convertible_to<double>;
  { t.u1(x) } -> std::convertible_to<double>;
  { t.grad_u1(x) } -> std::convertible_to<Vec<T::dim>>;
  { t.u2(x) } -> std::convertible_to<double>;
  { t.grad_total(x) } -> std::convertible_to<Vec<T::dim>>;
};

struct VectorChainOptions {
  SamplerKind kind = SamplerKind::shmc;
  int batch_size = 0;  // rb-shmc: data batch size, <= 0 means all data
  SamplerSchedule schedule = SamplerSchedule::constant(10, 1e-2);
  std::uint64_t n_iterations = 0;
  std::uint64_t n_burnin = 0;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::vector<double> init_position;  // size dim
  std::uint64_t thin = 1;             // keep every thin-th post-burn-in state
  bool record_accept_flags = false;
};

// Markov chain over a VectorTarget. Variants:
//
//   shmc     leapfrog on u1 with the exact gradient, accepts on dU2
//   rb-shmc  leapfrog on u1 with a random data batch per step (targets that
//            expose a per-datum gradient), accepts on dU2
//   rbmc     overdamped Langevin proposals on u1, accepts on dU2
//   hmc      leapfrog on the full potential, accepts on the energy change
//
// Draw order per iteration: momentum refresh (dim normals; none for rbmc),
// per step the data batch (rb-shmc; nothing at full batch) or dim noise
// draws (rbmc), then one acceptance uniform for a finite trajectory.
// The recorded state is the post-decision position of each iteration;
// grad_seconds accumulates trajectory integration time, which the data
// batching is meant to cut.
template <VectorTarget T>
class VectorChain {
 public:
  static constexpr int D = T::dim;

  VectorChain(const T& target, VectorChainOptions opt)
      : t_(target), opt_(std::move(opt)), rng_(opt_.seed, opt_.stream), batch_draw_(1) {
    if (opt_.n_iterations == 0)
      throw std::invalid_argument("VectorChain: n_iterations must be positive");
    if (opt_.n_burnin >= opt_.n_iterations)
      throw std::invalid_argument("VectorChain: burn-in must leave at least one iteration");
    if (opt_.thin == 0) throw std::invalid_argument("VectorChain: thin must be positive");
    if (static_cast<int>(opt_.init_position.size()) != D)
      throw std::invalid_argument("VectorChain: init_position does not match the target dimension");
    for (int k = 0; k < D; ++k) x_[k] = opt_.init_position[static_cast<std::size_t>(k)];
    if (!vfinite<D>(x_)) throw std::invalid_argument("VectorChain: init_position must be finite");
    resolve_batch_size();
  }

  const Vec<D>& position() const { return x_; }

  ChainRecord run() {
    if (ran_) throw std::logic_error("VectorChain::run: chain already consumed");
    ran_ = true;
    const auto t0 = std::chrono::steady_clock::now();

    ChainRecord rec;
    rec.n_burnin = opt_.n_burnin;
    rec.n_samples = opt_.n_iterations - opt_.n_burnin;
    const std::uint64_t kept = (rec.n_samples + opt_.thin - 1) / opt_.thin;
    rec.samples.reserve(kept);
    rec.sample_iterations.reserve(kept);
    if (opt_.record_accept_flags) rec.accept_flags.reserve(rec.n_samples);

    for (std::uint64_t m = 1; m <= opt_.n_iterations; ++m) {
      const auto [steps, dt] = opt_.schedule.entry(m);
      bool accepted = false;
      try {
        switch (opt_.kind) {
          case SamplerKind::shmc: accepted = iterate_shmc(steps, dt); break;
          case SamplerKind::rb_shmc: accepted = iterate_rb_shmc(steps, dt); break;
          case SamplerKind::rbmc: accepted = iterate_rbmc(steps, dt); break;
          case SamplerKind::hmc: accepted = iterate_hmc(steps, dt); break;
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
        if ((m - opt_.n_burnin - 1) % opt_.thin == 0) {
          rec.sample_iterations.push_back(m);
          rec.samples.emplace_back(x_.begin(), x_.end());
        }
      }
    }

    rec.evolution_time = opt_.schedule.evolution_time_after(opt_.n_iterations, 1);
    rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.grad_seconds = grad_seconds_;
    return rec;
  }

 private:
  void resolve_batch_size() {
    if constexpr (BayesTarget<T>) {
      const int n = t_.n_data();
      s_ = opt_.batch_size <= 0 ? n : opt_.batch_size;
      if (s_ < 1 || s_ > n)
        throw std::invalid_argument("VectorChain: batch size must lie in [1, n_data]");
      batch_draw_ = BatchDraw(n);
    } else {
      if (opt_.kind == SamplerKind::rb_shmc)
        throw std::invalid_argument("VectorChain: rb-shmc needs a target with per-datum gradients");
      s_ = 1;
    }
  }

  Vec<D> draw_momentum() {
    const double sd = std::sqrt(t_.mass() / t_.beta());
    Vec<D> p;
    for (int k = 0; k < D; ++k) p[k] = rng_.normal(sd);
    return p;
  }

  bool accept_on_u2(const Vec<D>& proposal) {
    const double delta = t_.u2(proposal) - t_.u2(x_);
    const double u = rng_.uniform01();
    if (!metropolis_accept(delta, t_.beta(), u)) return false;
    x_ = proposal;
    return true;
  }

  // Exact smooth gradient; on data-batched targets this is the full-batch
  // accumulation, so an rb-shmc run at s = n_data reproduces shmc bitwise.
  Vec<D> smooth_grad(const Vec<D>& y) const {
    if constexpr (BayesTarget<T>)
      return bayes_grad_u1_full<T>(t_, y);
    else
      return t_.grad_u1(y);
  }

  bool iterate_shmc(int L, double dt) {
    Vec<D> x = x_;
    Vec<D> p = draw_momentum();
    const auto g0 = std::chrono::steady_clock::now();
    const IntegratorReport rep = leapfrog<D>(x, p, dt, L, t_.mass(), [&](const Vec<D>& y) {
      return vscale<D>(-1.0, smooth_grad(y));
    });
    grad_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - g0).count();
    if (!rep.finite) return false;
    return accept_on_u2(x);
  }

  bool iterate_rb_shmc(int L, double dt) {
    if constexpr (!BayesTarget<T>) {
      throw std::logic_error("VectorChain: rb-shmc dispatched on a target without data");
    } else {
      Vec<D> x = x_;
      Vec<D> p = draw_momentum();
      const auto g0 = std::chrono::steady_clock::now();
      IntegratorReport rep;
      if (s_ == t_.n_data()) {
        rep = leapfrog<D>(x, p, dt, L, t_.mass(), [&](const Vec<D>& y) {
          return vscale<D>(-1.0, bayes_grad_u1_full<T>(t_, y));
        });
      } else {
        rep = leapfrog_random_batch<D>(
            x, p, dt, L, t_.mass(), [&]() { batch_draw_.draw(rng_, s_); },
            [&](const Vec<D>& y) {
              const std::span<const int> b(batch_draw_.indices().data(), static_cast<std::size_t>(s_));
              return vscale<D>(-1.0, bayes_grad_u1_batch<T>(t_, y, b));
            });
      }
      grad_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - g0).count();
      if (!rep.finite) return false;
      return accept_on_u2(x);
    }
  }

  bool iterate_rbmc(int L, double dt) {
    Vec<D> x = x_;
    const auto g0 = std::chrono::steady_clock::now();
    const IntegratorReport rep = euler_maruyama<D>(
        x, dt, L, t_.beta(), []() {},
        [&](const Vec<D>& y) { return vscale<D>(-1.0, smooth_grad(y)); }, rng_);
    grad_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - g0).count();
    if (!rep.finite) return false;
    return accept_on_u2(x);
  }

  bool iterate_hmc(int L, double dt) {
    Vec<D> x = x_;
    Vec<D> p = draw_momentum();
    const double h_before = t_.potential(x_) + 0.5 * vnorm_sq<D>(p) / t_.mass();
    const auto g0 = std::chrono::steady_clock::now();
    const IntegratorReport rep = leapfrog<D>(x, p, dt, L, t_.mass(), [&](const Vec<D>& y) {
      return vscale<D>(-1.0, t_.grad_total(y));
    });
    grad_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - g0).count();
    if (!rep.finite) return false;
    const double h_after = t_.potential(x) + 0.5 * vnorm_sq<D>(p) / t_.mass();
    const double u = rng_.uniform01();
    if (!metropolis_accept(h_after - h_before, t_.beta(), u)) return false;
    x_ = x;
    return true;
  }

  T t_;
  VectorChainOptions opt_;
  RngStream rng_;
  BatchDraw batch_draw_;
  int s_ = 1;
  bool ran_ = false;
  Vec<D> x_{};
  double grad_seconds_ = 0.0;
};

}  // namespace shmc
