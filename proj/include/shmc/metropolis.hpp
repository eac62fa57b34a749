#pragma once

#include <cmath>
#include <stdexcept>

namespace shmc {

// Metropolis decision for the split acceptance step: accept with probability
// min(1, exp(-beta * delta_u2)), evaluated in log space so that huge energy
// differences neither overflow nor underflow. delta_u2 = +inf (hard-core
// overlap) rejects outright; NaN anywhere is a hard error, never a silent
// accept/reject. uniform_draw is expected in [0, 1).
inline bool metropolis_accept(double delta_u2, double beta, double uniform_draw) {
  if (std::isnan(delta_u2) || std::isnan(beta) || std::isnan(uniform_draw))
    throw std::domain_error("metropolis_accept: NaN input");
  if (!(beta > 0.0)) throw std::domain_error("metropolis_accept: beta must be positive");
  if (uniform_draw < 0.0 || uniform_draw >= 1.0)
    throw std::domain_error("metropolis_accept: uniform_draw outside [0, 1)");
  if (std::isinf(delta_u2) && delta_u2 > 0.0) return false;
  const double log_threshold = -beta * delta_u2;
  if (std::isinf(log_threshold) && log_threshold < 0.0) return false;
  return std::log(uniform_draw) <= log_threshold;
}

}  // namespace shmc
