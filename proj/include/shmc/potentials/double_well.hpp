#pragma once

#include <stdexcept>

#include "shmc/vec.hpp"

namespace shmc {

// Symmetric quartic double well U(x) = (H/W^4) (x^2 - W^2)^2 with minima at
// +-W and barrier height H. The proposal potential keeps only a lambda
// fraction of the barrier between the wells:
//
//   U1 = lambda * U   for |x| < W,     U1 = U   for |x| >= W
//   U2 = U - U1  (supported strictly inside the wells)
//
// U'(+-W) = 0, so U1' is continuous at the matching points even though the
// definition switches branches there.
struct DoubleWellTarget {
  static constexpr int dim = 1;

  DoubleWellTarget(double barrier_height, double half_width, double lambda,
                   double beta = 1.0, double mass = 1.0)
      : h_(barrier_height), w_(half_width), lambda_(lambda), beta_(beta), mass_(mass) {
    if (!(barrier_height > 0.0) || !(half_width > 0.0))
      throw std::invalid_argument("DoubleWellTarget: H and W must be positive");
    if (!(lambda > 0.0) || lambda > 1.0)
      throw std::invalid_argument("DoubleWellTarget: lambda must lie in (0, 1]");
    if (!(beta > 0.0) || !(mass > 0.0))
      throw std::invalid_argument("DoubleWellTarget: beta and mass must be positive");
    scale_ = h_ / (w_ * w_ * w_ * w_);
  }

  double beta() const { return beta_; }
  double mass() const { return mass_; }
  double barrier_height() const { return h_; }
  double half_width() const { return w_; }
  double lambda() const { return lambda_; }

  double potential(const Vec<1>& x) const { return potential_scalar(x[0]); }
  double potential_scalar(double x) const {
    const double q = x * x - w_ * w_;
    return scale_ * q * q;
  }

  double grad_scalar(double x) const { return scale_ * 4.0 * x * (x * x - w_ * w_); }
  Vec<1> grad_total(const Vec<1>& x) const { return {grad_scalar(x[0])}; }

  bool inside_wells(double x) const { return x > -w_ && x < w_; }

  double u1(const Vec<1>& x) const {
    const double u = potential_scalar(x[0]);
    return inside_wells(x[0]) ? lambda_ * u : u;
  }
  Vec<1> grad_u1(const Vec<1>& x) const {
    const double g = grad_scalar(x[0]);
    return {inside_wells(x[0]) ? lambda_ * g : g};
  }
  double u2(const Vec<1>& x) const {
    return inside_wells(x[0]) ? (1.0 - lambda_) * potential_scalar(x[0]) : 0.0;
  }

 private:
  double h_;
  double w_;
  double lambda_;
  double beta_;
  double mass_;
  double scale_;
};

// Quartic double-well value for a given barrier/width pair.
inline double double_well_potential(double x, double barrier_height, double half_width) {
  const double q = x * x - half_width * half_width;
  return barrier_height / (half_width * half_width * half_width * half_width) * q * q;
}

}  // namespace shmc
