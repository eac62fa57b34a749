#pragma once

#include <cmath>
#include <stdexcept>

#include "shmc/vec.hpp"

namespace shmc {

// 1-D interacting-particle system with harmonic confinement and the bounded
// pair kernel phi(r) = -(1/2) ln(1 + r^2), already in rescaled form:
//
//   U(x) = (alpha/2) sum_i x_i^2 - (1/(2(N-1))) sum_{i<j} ln(1 + (x_i-x_j)^2)
//
// The pair force -phi'(r) = r/(1+r^2) is bounded by 1/2, which makes this the
// standard smooth test system for random-batch force error studies. There is
// no short-range correction: phi2 = 0, so every proposal is accepted.
struct SmoothPairTarget {
  static constexpr int dim = 1;
  static constexpr bool has_short_range = false;

  SmoothPairTarget(int n_particles, double alpha = 1.0, double beta = 1.0, double mass = 1.0)
      : n_(n_particles), alpha_(alpha), beta_(beta), mass_(mass) {
    if (n_particles < 2) throw std::invalid_argument("SmoothPairTarget: needs at least 2 particles");
    if (!(alpha > 0.0) || !(beta > 0.0) || !(mass > 0.0))
      throw std::invalid_argument("SmoothPairTarget: alpha, beta, mass must be positive");
  }

  int n_particles() const { return n_; }
  double beta_eff() const { return beta_; }
  double mass() const { return mass_; }
  double alpha() const { return alpha_; }

  Vec<1> confinement_force(const Vec<1>& x) const { return {-alpha_ * x[0]}; }
  double confinement_energy(const Vec<1>& x) const { return 0.5 * alpha_ * x[0] * x[0]; }

  // -phi1'(r): bounded, |force| <= 1/2 attained at |r| = 1.
  Vec<1> pair_force(const Vec<1>& dx) const {
    const double r = dx[0];
    return {r / (1.0 + r * r)};
  }
  double pair_energy(const Vec<1>& dx) const { return -0.5 * std::log1p(dx[0] * dx[0]); }

  // Full kernel coincides with the smooth kernel (phi2 = 0).
  Vec<1> pair_force_full(const Vec<1>& dx) const { return pair_force(dx); }
  double pair_energy_full(const Vec<1>& dx) const { return pair_energy(dx); }

 private:
  int n_;
  double alpha_;
  double beta_;
  double mass_;
};

}  // namespace shmc
