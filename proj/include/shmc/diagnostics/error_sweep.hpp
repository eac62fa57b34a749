#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace shmc {

// Trajectory-error study on the smooth interacting-particle system: random
// batch leapfrog against full-force leapfrog from the same start, paired per
// replica so the weak estimate keeps its signal at small step sizes.
struct SweepOptions {
  int n_particles = 50;
  int batch_size = 1;
  double horizon = 1.0;  // trajectory time T; step counts are T / dt
  int n_replicas = 1000;
  std::vector<double> step_sizes;
  double init_sigma = 1.0;  // initial positions ~ N(0, sigma^2)
  std::uint64_t seed = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double mass = 1.0;
};

// Both errors are measured on the per-particle Hamiltonian h = H/N (kinetic
// plus smooth potential), evaluated at the endpoints of the paired batched
// and exact trajectories. Dividing by N keeps h order one so the bounded
// test function tanh stays far from saturation.
struct SweepPoint {
  double dt = 0.0;
  double strong_error = 0.0;  // sqrt(mean over replicas of (h_batch - h_exact)^2)
  double weak_error = 0.0;    // |mean of tanh(h_batch) - tanh(h_exact)|
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double strong_slope = 0.0;  // log-log least-squares slopes over step_sizes;
  double weak_slope = 0.0;    // left 0 when any error vanishes (full batch)
};

// The weak estimator |mean of tanh(h_b) - tanh(h_e)| sits close to its Monte
// Carlo noise floor at the small-dt end of the ladder, where |mean| of a
// noisy mean under- or overshoots wildly. The weak slope is therefore fitted
// by least squares weighted with each point's delta-method precision
// 1 / Var(ln|mean|) = mean^2 / SE^2, estimated from the replica spread, so
// noise-floor points carry the little weight they deserve. The strong series
// averages squares and has uniformly small relative error; its slope (and
// the deterministic one) use the plain fit.

SweepResult hamiltonian_error_sweep(const SweepOptions& opts);

// Energy-conservation error of full-force leapfrog over the same horizon:
// RMS over replicas of h(T) - h(0). Exposes the integrator's own
// discretization order with no batch noise in the picture.
struct DeterministicOrderResult {
  std::vector<double> step_sizes;
  std::vector<double> errors;
  double slope = 0.0;
};

DeterministicOrderResult deterministic_order_curve(const SweepOptions& opts);

// Fourth moment of the momenta along random-batch trajectories: mean over
// replicas and particles of p^4 after every step (times[0] = 0 is the
// initial draw). The stability analysis bounds sup_t E p^4 by c0 (1 + T^4);
// max_moment is what that envelope gets checked against.
struct FourthMomentTrace {
  std::vector<double> times;
  std::vector<double> moments;
  double max_moment = 0.0;
};

FourthMomentTrace fourth_moment_trace(const SweepOptions& opts, double dt);

// Least-squares slope of ln(err) against ln(dt).
double fit_log_slope(std::span<const double> dts, std::span<const double> errs);

// Same fit with per-point weights (zero weight drops a point; at least two
// weighted points required).
double fit_log_slope_weighted(std::span<const double> dts, std::span<const double> errs,
                              std::span<const double> weights);

}  // namespace shmc
