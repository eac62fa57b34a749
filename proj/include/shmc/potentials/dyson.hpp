#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shmc/vec.hpp"

namespace shmc {

// Log-gas in a quadratic trap (equilibrium measure: Wigner semicircle on
// [-sqrt(2), sqrt(2)] as N grows):
//
//   mu(x) ∝ exp(-[(N-1)/2 sum_i x_i^2 - sum_{i<j} ln|x_i - x_j|])
//
// In rescaled per-pair form the confinement force is -x, the pair weight is
// 1/(N-1), and the effective inverse temperature is w^2 (N-1). The singular
// kernel phi(r) = -ln|r| is split at delta0: the smooth surrogate phi1
// replaces it inside |r| < delta0 by the tangent line a - slope*|r| with
// slope = 1/delta0 and a = ln(1/delta0) + 1, which matches value and slope at
// |r| = delta0. The short-range remainder phi2 = phi - phi1 is supported on
// |r| < delta0, decreasing from +inf at contact to 0 at delta0.
struct DysonTarget {
  static constexpr int dim = 1;
  static constexpr bool has_short_range = true;

  explicit DysonTarget(int n_particles, double delta0 = 0.01, double w = 1.0, double mass = 1.0)
      : n_(n_particles), delta0_(delta0), w_(w), mass_(mass) {
    if (n_particles < 2) throw std::invalid_argument("DysonTarget: needs at least 2 particles");
    if (!(delta0 > 0.0)) throw std::invalid_argument("DysonTarget: delta0 must be positive");
    if (!(w > 0.0) || !(mass > 0.0)) throw std::invalid_argument("DysonTarget: w and mass must be positive");
    slope_ = 1.0 / delta0_;
    intercept_ = std::log(1.0 / delta0_) + 1.0;
    beta_eff_ = w_ * w_ * (n_ - 1);
  }

  int n_particles() const { return n_; }
  double beta_eff() const { return beta_eff_; }
  double mass() const { return mass_; }
  double cutoff() const { return delta0_; }
  double delta0() const { return delta0_; }
  double surrogate_slope() const { return slope_; }
  double surrogate_intercept() const { return intercept_; }
  // Scale that takes a pair sum of phi2 into the rescaled U2.
  double u2_pair_scale() const { return 1.0 / (n_ - 1); }

  Vec<1> confinement_force(const Vec<1>& x) const { return {-x[0]}; }
  double confinement_energy(const Vec<1>& x) const { return 0.5 * x[0] * x[0]; }

  // d phi1 / dr: -slope * sign(r) inside the cutoff, -1/r outside.
  double phi1_grad(double r) const {
    if (r == 0.0) throw std::domain_error("DysonTarget::phi1_grad: r = 0");
    const double a = std::fabs(r);
    if (a < delta0_) return r > 0.0 ? -slope_ : slope_;
    return -1.0 / r;
  }

  double phi1(double r) const {
    const double a = std::fabs(r);
    if (a < delta0_) return intercept_ - slope_ * a;
    return -std::log(a);
  }

  double phi(double r) const {
    const double a = std::fabs(r);
    if (a == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(a);
  }

  // phi2 = phi - phi1: zero outside the cutoff, +inf at contact.
  double phi2_scalar(double r) const {
    const double a = std::fabs(r);
    if (a >= delta0_) return 0.0;
    if (a == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(a) - (intercept_ - slope_ * a);
  }

  // Contact (r = 0) yields an infinite force so the integrator aborts the
  // proposal instead of throwing mid-trajectory.
  Vec<1> pair_force(const Vec<1>& dx) const {
    if (dx[0] == 0.0) return {std::numeric_limits<double>::infinity()};
    return {-phi1_grad(dx[0])};
  }
  double pair_energy(const Vec<1>& dx) const { return phi1(dx[0]); }
  double phi2(const Vec<1>& dx) const { return phi2_scalar(dx[0]); }

  // Unsplit kernel, for a full-potential HMC baseline.
  Vec<1> pair_force_full(const Vec<1>& dx) const {
    const double r = dx[0];
    if (r == 0.0) return {std::numeric_limits<double>::infinity()};
    return {1.0 / r};
  }
  double pair_energy_full(const Vec<1>& dx) const { return phi(dx[0]); }

 private:
  int n_;
  double delta0_;
  double w_;
  double mass_;
  double slope_;
  double intercept_;
  double beta_eff_;
};

}  // namespace shmc
