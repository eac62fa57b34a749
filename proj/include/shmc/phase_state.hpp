#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "shmc/vec.hpp"

namespace shmc {

// Positions and momenta of an N-particle system in D dimensions. Momenta are
// refreshed by the samplers, so a default-constructed (zero) momentum set is
// a valid start.
template <int D>
struct PhaseState {
  std::vector<Vec<D>> positions;
  std::vector<Vec<D>> momenta;

  PhaseState() = default;

  explicit PhaseState(std::vector<Vec<D>> pos)
      : positions(std::move(pos)), momenta(positions.size(), vzero<D>()) {}

  PhaseState(std::vector<Vec<D>> pos, std::vector<Vec<D>> mom)
      : positions(std::move(pos)), momenta(std::move(mom)) {
    if (positions.size() != momenta.size())
      throw std::invalid_argument("PhaseState: positions and momenta must have the same shape");
  }

  int n() const { return static_cast<int>(positions.size()); }

  bool all_finite() const {
    for (const auto& x : positions)
      if (!vfinite<D>(x)) return false;
    for (const auto& p : momenta)
      if (!vfinite<D>(p)) return false;
    return true;
  }

  // Flattened row-major (particle-major) coordinates, for recording.
  std::vector<double> flat_positions() const {
    std::vector<double> out;
    out.reserve(positions.size() * D);
    for (const auto& x : positions)
      for (int k = 0; k < D; ++k) out.push_back(x[k]);
    return out;
  }
};

// Draw every momentum entry from N(0, mass/beta_eff). This is the Gibbs
// momentum marginal of the kinetic energy |p|^2/(2m) at inverse temperature
// beta_eff, so a refresh leaves the joint target invariant.
template <int D, class Rng>
void resample_momenta(std::vector<Vec<D>>& momenta, double mass, double beta_eff, Rng& rng) {
  if (!(mass > 0.0) || !(beta_eff > 0.0))
    throw std::invalid_argument("resample_momenta: mass and beta_eff must be positive");
  const double sd = std::sqrt(mass / beta_eff);
  for (auto& p : momenta)
    for (int k = 0; k < D; ++k) p[k] = rng.normal(sd);
}

template <int D, class Rng>
Vec<D> resample_momentum(double mass, double beta_eff, Rng& rng) {
  if (!(mass > 0.0) || !(beta_eff > 0.0))
    throw std::invalid_argument("resample_momentum: mass and beta_eff must be positive");
  const double sd = std::sqrt(mass / beta_eff);
  Vec<D> p;
  for (int k = 0; k < D; ++k) p[k] = rng.normal(sd);
  return p;
}

}  // namespace shmc
