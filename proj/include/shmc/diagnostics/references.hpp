#pragma once

#include <functional>
#include <vector>

namespace shmc {

// Mass of the density (1/pi) sqrt(2 - x^2) on [-sqrt(2), sqrt(2)] below x.
double semicircle_cdf(double x);

// Per-bin masses of the semicircle law over an equal-width binning.
std::vector<double> semicircle_bin_mass(double lo, double hi, int n_bins);

// Per-bin masses of an unnormalized density, integrated with composite
// Simpson rule (subdivisions panels per bin) and normalized over the window.
std::vector<double> quadrature_bin_mass(const std::function<double(double)>& density,
                                        double lo, double hi, int n_bins, int subdivisions = 64);

struct MeanFieldOptions {
  double box = 8.0;       // solve on [-box, box]
  int grid = 1601;        // grid points (odd keeps 0 on the grid)
  double damping = 0.5;   // Picard damping factor
  int max_iters = 2000;
  double tol = 1e-12;     // sup-norm fixed-point residual
};

struct MeanFieldResult {
  std::vector<double> x;        // grid
  std::vector<double> density;  // normalized on the grid
  int iterations = 0;
  double residual = 0.0;
};

// Self-consistent single-particle density of the harmonic trap with the
// bounded pair kernel: the fixed point of
//
//   rho(x) = Z^-1 exp(-beta [alpha x^2 / 2 - (1/2) int ln(1 + (x-y)^2) rho(y) dy])
//
// computed by damped Picard iteration with a Toeplitz kernel product.
MeanFieldResult mean_field_density(double alpha, double beta, const MeanFieldOptions& opts = {});

// Bin masses of the mean-field density, normalized over [lo, hi].
std::vector<double> mean_field_bin_mass(double alpha, double beta, double lo, double hi,
                                        int n_bins, const MeanFieldOptions& opts = {});

}  // namespace shmc
