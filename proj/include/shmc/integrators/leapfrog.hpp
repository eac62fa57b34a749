#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "shmc/vec.hpp"

namespace shmc {

struct IntegratorReport {
  std::int64_t force_evals = 0;
  // False when the final state contains inf or NaN; the caller treats the
  // whole trajectory as a rejected proposal.
  bool finite = true;
};

// Velocity Verlet with force reuse across steps: n_steps + 1 evaluations.
// Force must be deterministic for the reuse to be exact; randomized forces
// go through the *_random_batch variants below.
//
// Force: (const Vec<D>&) -> Vec<D>.
template <int D, typename Force>
IntegratorReport leapfrog(Vec<D>& x, Vec<D>& p, double dt, int n_steps, double mass, Force&& force) {
  const double half = 0.5 * dt;
  const double inv_m = 1.0 / mass;
  IntegratorReport rep;
  Vec<D> f = force(x);
  ++rep.force_evals;
  for (int step = 0; step < n_steps; ++step) {
    for (int k = 0; k < D; ++k) p[k] += half * f[k];
    for (int k = 0; k < D; ++k) x[k] += dt * inv_m * p[k];
    f = force(x);
    ++rep.force_evals;
    for (int k = 0; k < D; ++k) p[k] += half * f[k];
  }
  rep.finite = vfinite<D>(x) && vfinite<D>(p);
  return rep;
}

// Same scheme with a randomized force: begin_step runs once per step (this
// is where a fresh batch is drawn), and both half kicks of that step use the
// same randomization. No reuse across steps, so 2 * n_steps evaluations.
template <int D, typename BeginStep, typename Force>
IntegratorReport leapfrog_random_batch(Vec<D>& x, Vec<D>& p, double dt, int n_steps, double mass,
                                       BeginStep&& begin_step, Force&& force) {
  const double half = 0.5 * dt;
  const double inv_m = 1.0 / mass;
  IntegratorReport rep;
  for (int step = 0; step < n_steps; ++step) {
    begin_step();
    Vec<D> f = force(x);
    ++rep.force_evals;
    for (int k = 0; k < D; ++k) p[k] += half * f[k];
    for (int k = 0; k < D; ++k) x[k] += dt * inv_m * p[k];
    f = force(x);
    ++rep.force_evals;
    for (int k = 0; k < D; ++k) p[k] += half * f[k];
  }
  rep.finite = vfinite<D>(x) && vfinite<D>(p);
  return rep;
}

// Whole-configuration variants: every particle drifts and kicks together.
// Force: (span<const Vec<D>> xs, span<Vec<D>> out). `fbuf` is caller-owned
// scratch of the same length as xs.
template <int D, typename Force>
IntegratorReport leapfrog_all(std::span<Vec<D>> xs, std::span<Vec<D>> ps, double dt, int n_steps,
                              double mass, Force&& force, std::span<Vec<D>> fbuf) {
  const double half = 0.5 * dt;
  const double inv_m = 1.0 / mass;
  const std::size_t n = xs.size();
  IntegratorReport rep;
  force(std::span<const Vec<D>>(xs.data(), n), fbuf);
  ++rep.force_evals;
  for (int step = 0; step < n_steps; ++step) {
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < D; ++k) ps[i][k] += half * fbuf[i][k];
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < D; ++k) xs[i][k] += dt * inv_m * ps[i][k];
    force(std::span<const Vec<D>>(xs.data(), n), fbuf);
    ++rep.force_evals;
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < D; ++k) ps[i][k] += half * fbuf[i][k];
  }
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) ok = ok && vfinite<D>(xs[i]) && vfinite<D>(ps[i]);
  rep.finite = ok;
  return rep;
}

template <int D, typename BeginStep, typename Force>
IntegratorReport leapfrog_all_random_batch(std::span<Vec<D>> xs, std::span<Vec<D>> ps, double dt,
                                           int n_steps, double mass, BeginStep&& begin_step,
                                           Force&& force, std::span<Vec<D>> fbuf) {
  const double half = 0.5 * dt;
  const double inv_m = 1.0 / mass;
  const std::size_t n = xs.size();
  IntegratorReport rep;
  for (int step = 0; step < n_steps; ++step) {
    begin_step();
    force(std::span<const Vec<D>>(xs.data(), n), fbuf);
    ++rep.force_evals;
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < D; ++k) ps[i][k] += half * fbuf[i][k];
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < D; ++k) xs[i][k] += dt * inv_m * ps[i][k];
    force(std::span<const Vec<D>>(xs.data(), n), fbuf);
    ++rep.force_evals;
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < D; ++k) ps[i][k] += half * fbuf[i][k];
  }
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) ok = ok && vfinite<D>(xs[i]) && vfinite<D>(ps[i]);
  rep.finite = ok;
  return rep;
}

}  // namespace shmc
