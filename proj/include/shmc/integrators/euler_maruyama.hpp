#pragma once

#include <cmath>

#include "shmc/integrators/leapfrog.hpp"
#include "shmc/rng.hpp"
#include "shmc/vec.hpp"

namespace shmc {

// Overdamped Langevin proposal chain on the smooth part of the potential:
//
//   x <- x + dt * force(x) + sqrt(2 dt / beta_eff) * z,  z ~ N(0, I)
//
// Per step, begin_step runs first (fresh batch), then the force, then D
// noise draws. One force evaluation per step; no acceptance here, the caller
// corrects with the short-range factor.
template <int D, typename BeginStep, typename Force>
IntegratorReport euler_maruyama(Vec<D>& x, double dt, int n_steps, double beta_eff,
                                BeginStep&& begin_step, Force&& force, RngStream& rng) {
  const double noise = std::sqrt(2.0 * dt / beta_eff);
  IntegratorReport rep;
  for (int step = 0; step < n_steps; ++step) {
    begin_step();
    const Vec<D> f = force(x);
    ++rep.force_evals;
    for (int k = 0; k < D; ++k) x[k] += dt * f[k] + noise * rng.normal();
  }
  rep.finite = vfinite<D>(x);
  return rep;
}

}  // namespace shmc
