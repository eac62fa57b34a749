#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "shmc/vec.hpp"

namespace shmc {

// Posterior for a two-component location mixture with an unknown offset:
//
//   theta1 ~ N(0, sigma1^2),  theta2 ~ N(0, sigma2^2)
//   y_i ~ (1/2) N(theta1, sigma_y^2) + (1/2) N(theta1 + theta2, sigma_y^2)
//
// Working in tempered form with beta = N, the per-sample potential is
//
//   U(theta) = (1/N) [ prior_nll(theta) + sum_i datum_nll(theta, y_i) ]
//
// so exp(-beta U) is exactly the posterior. The likelihood is invariant under
// the label swap (theta1, theta2) -> (theta1 + theta2, -theta2), which gives
// the posterior two well-separated modes.
//
// The proposal potential adds a "sand" term filling both modes: a pair of
// unit-covariance Gaussian bumps of common height placed at the mode
// estimates. U1 = U + G with G >= 0, hence U2 = -G <= 0, and the acceptance
// ratio exp(-beta dU2) = exp(beta dG) depends only on the bumps.
class GmmPosteriorTarget {
 public:
  static constexpr int dim = 2;

  GmmPosteriorTarget(std::vector<double> data, double sigma1_sq = 10.0, double sigma2_sq = 1.0,
                     double sigma_y_sq = 0.5, double mass = 1.0)
      : data_(std::move(data)),
        sigma1_sq_(sigma1_sq),
        sigma2_sq_(sigma2_sq),
        sigma_y_sq_(sigma_y_sq),
        mass_(mass) {
    if (data_.empty()) throw std::invalid_argument("GmmPosteriorTarget: needs data");
    if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0) || !(sigma_y_sq > 0.0) || !(mass > 0.0))
      throw std::invalid_argument("GmmPosteriorTarget: variances and mass must be positive");
  }

  int n_data() const { return static_cast<int>(data_.size()); }
  const std::vector<double>& data() const { return data_; }
  double beta() const { return static_cast<double>(data_.size()); }
  double mass() const { return mass_; }
  double sigma_y_sq() const { return sigma_y_sq_; }

  double prior_nll(const Vec<2>& t) const {
    return 0.5 * t[0] * t[0] / sigma1_sq_ + 0.5 * t[1] * t[1] / sigma2_sq_;
  }
  Vec<2> prior_grad(const Vec<2>& t) const { return {t[0] / sigma1_sq_, t[1] / sigma2_sq_}; }

  // -log of the (unnormalized) mixture likelihood of datum j, stabilized.
  double datum_nll(const Vec<2>& t, int j) const {
    const double y = data_[static_cast<std::size_t>(j)];
    const double r1 = t[0] - y;
    const double r2 = t[0] + t[1] - y;
    const double a = -0.5 * r1 * r1 / sigma_y_sq_;
    const double b = -0.5 * r2 * r2 / sigma_y_sq_;
    const double m = a > b ? a : b;
    const double other = a > b ? b : a;
    return -(m + std::log1p(std::exp(other - m)));
  }

  Vec<2> datum_grad(const Vec<2>& t, int j) const {
    const double y = data_[static_cast<std::size_t>(j)];
    const double r1 = t[0] - y;
    const double r2 = t[0] + t[1] - y;
    const double a = -0.5 * r1 * r1 / sigma_y_sq_;
    const double b = -0.5 * r2 * r2 / sigma_y_sq_;
    const double m = a > b ? a : b;
    const double wa = std::exp(a - m);
    const double wb = std::exp(b - m);
    const double inv = 1.0 / ((wa + wb) * sigma_y_sq_);
    return {(wa * r1 + wb * r2) * inv, wb * r2 * inv};
  }

  // Tempered potential: exp(-beta * potential) is the posterior.
  double potential(const Vec<2>& t) const {
    double s = prior_nll(t);
    for (int j = 0; j < n_data(); ++j) s += datum_nll(t, j);
    return s / beta();
  }
  Vec<2> grad_potential(const Vec<2>& t) const {
    Vec<2> g = prior_grad(t);
    for (int j = 0; j < n_data(); ++j) {
      const Vec<2> d = datum_grad(t, j);
      g[0] += d[0];
      g[1] += d[1];
    }
    const double inv_n = 1.0 / beta();
    return {g[0] * inv_n, g[1] * inv_n};
  }

  void set_sand(const std::array<Vec<2>, 2>& centers, double height) {
    if (!(height >= 0.0)) throw std::invalid_argument("GmmPosteriorTarget: sand height must be nonnegative");
    sand_centers_ = centers;
    sand_height_ = height;
    has_sand_ = true;
  }
  bool has_sand() const { return has_sand_; }
  const std::array<Vec<2>, 2>& sand_centers() const { return sand_centers_; }
  double sand_height() const { return sand_height_; }

  // Unit-covariance Gaussian bumps of height sand_height at both centers.
  double sand_value(const Vec<2>& t) const {
    if (!has_sand_) return 0.0;
    double s = 0.0;
    for (const auto& c : sand_centers_) {
      const double dx = t[0] - c[0];
      const double dy = t[1] - c[1];
      s += std::exp(-0.5 * (dx * dx + dy * dy));
    }
    return sand_height_ * s;
  }
  Vec<2> sand_grad(const Vec<2>& t) const {
    Vec<2> g{0.0, 0.0};
    if (!has_sand_) return g;
    for (const auto& c : sand_centers_) {
      const double dx = t[0] - c[0];
      const double dy = t[1] - c[1];
      const double e = sand_height_ * std::exp(-0.5 * (dx * dx + dy * dy));
      g[0] -= e * dx;
      g[1] -= e * dy;
    }
    return g;
  }

  // Split interface. U1 carries the sand, U2 = -G removes it in acceptance.
  double u1(const Vec<2>& t) const { return potential(t) + sand_value(t); }
  Vec<2> grad_u1(const Vec<2>& t) const {
    Vec<2> g = grad_potential(t);
    const Vec<2> s = sand_grad(t);
    return {g[0] + s[0], g[1] + s[1]};
  }
  double u2(const Vec<2>& t) const { return -sand_value(t); }
  Vec<2> grad_total(const Vec<2>& t) const { return grad_potential(t); }

 private:
  std::vector<double> data_;
  double sigma1_sq_;
  double sigma2_sq_;
  double sigma_y_sq_;
  double mass_;
  std::array<Vec<2>, 2> sand_centers_{};
  double sand_height_ = 0.0;
  bool has_sand_ = false;
};

// Draw a synthetic dataset from the mixture at known (theta1, theta2). The
// stream consumes, per datum, one component coin then one normal.
std::vector<double> generate_gmm_data(int n, double theta1, double theta2, double sigma_y_sq,
                                      std::uint64_t seed);

// Where the sand goes and the geometry it was derived from.
struct SandPlacement {
  std::array<Vec<2>, 2> centers;          // best mode first
  std::array<double, 2> marginal_modes_1; // modes of the first-coordinate marginal
  std::array<double, 2> marginal_modes_2;
  double well_distance = 0.0;             // |c1 - c2|
  double barrier_height = 0.0;            // U(midpoint) - mean(U(c1), U(c2))
};

// Locate the two posterior modes from 1-D marginal grid scans of the
// numerically integrated density exp(-beta u), refine them to fine_res, pair
// per-coordinate modes into two centers, and measure the inter-well barrier.
// Throws when either marginal does not show two separated peaks.
SandPlacement estimate_sand_centers(const std::function<double(double, double)>& u, double beta,
                                    std::array<double, 2> bracket1, std::array<double, 2> bracket2,
                                    double coarse_res = 1e-2, double fine_res = 1e-3);

SandPlacement estimate_sand_centers(const GmmPosteriorTarget& target,
                                    std::array<double, 2> bracket1 = {-4.0, 6.0},
                                    std::array<double, 2> bracket2 = {-6.0, 6.0},
                                    double coarse_res = 1e-2, double fine_res = 1e-3);

// Bump height that overfills the measured barrier by the 10/beta safety term.
inline double recommended_sand_height(double barrier_height, double beta) {
  return barrier_height + 10.0 / beta;
}

}  // namespace shmc
