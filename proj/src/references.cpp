#include "shmc/diagnostics/references.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shmc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_binning(double lo, double hi, int n_bins) {
  if (!(hi > lo)) throw std::invalid_argument("bin masses: needs hi > lo");
  if (n_bins <= 0) throw std::invalid_argument("bin masses: needs n_bins > 0");
}

}  // namespace

double semicircle_cdf(double x) {
  const double r = std::sqrt(2.0);
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  // Antiderivative of sqrt(2 - t^2): t sqrt(2 - t^2) / 2 + asin(t / sqrt(2)).
  const double f = 0.5 * x * std::sqrt(2.0 - x * x) + std::asin(x / r);
  return (f + 0.5 * kPi) / kPi;
}

std::vector<double> semicircle_bin_mass(double lo, double hi, int n_bins) {
  check_binning(lo, hi, n_bins);
  const double w = (hi - lo) / n_bins;
  std::vector<double> mass(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b)
    mass[static_cast<std::size_t>(b)] = semicircle_cdf(lo + (b + 1) * w) - semicircle_cdf(lo + b * w);
  const double total = semicircle_cdf(hi) - semicircle_cdf(lo);
  if (!(total > 0.0)) throw std::invalid_argument("semicircle_bin_mass: window misses the support");
  for (auto& m : mass) m /= total;
  return mass;
}

std::vector<double> quadrature_bin_mass(const std::function<double(double)>& density, double lo,
                                        double hi, int n_bins, int subdivisions) {
  check_binning(lo, hi, n_bins);
  if (subdivisions < 2) throw std::invalid_argument("quadrature_bin_mass: needs >= 2 subdivisions");
  const int panels = subdivisions + (subdivisions % 2);  // Simpson needs an even count
  const double w = (hi - lo) / n_bins;
  const double h = w / panels;
  std::vector<double> mass(static_cast<std::size_t>(n_bins));
  double total = 0.0;
  for (int b = 0; b < n_bins; ++b) {
    const double a = lo + b * w;
    double s = density(a) + density(a + w);
    for (int j = 1; j < panels; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * density(a + j * h);
    const double m = s * h / 3.0;
    if (!(m >= 0.0) || !std::isfinite(m))
      throw std::domain_error("quadrature_bin_mass: density produced a bad bin integral");
    mass[static_cast<std::size_t>(b)] = m;
    total += m;
  }
  if (!(total > 0.0)) throw std::domain_error("quadrature_bin_mass: zero total mass on the window");
  for (auto& m : mass) m /= total;
  return mass;
}

MeanFieldResult mean_field_density(double alpha, double beta, const MeanFieldOptions& opts) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("mean_field_density: alpha and beta must be positive");
  if (opts.grid < 3 || !(opts.box > 0.0) || !(opts.damping > 0.0) || opts.damping > 1.0)
    throw std::invalid_argument("mean_field_density: bad solver options");
  const int m = opts.grid;
  const double h = 2.0 * opts.box / (m - 1);

  MeanFieldResult res;
  res.x.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) res.x[static_cast<std::size_t>(i)] = -opts.box + i * h;

  // Trapezoid weights folded into the density for the kernel product.
  auto normalize = [&](std::vector<double>& rho) {
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
      const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
      z += w * rho[static_cast<std::size_t>(i)];
    }
    z *= h;
    for (auto& v : rho) v /= z;
  };

  std::vector<double> rho(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    rho[static_cast<std::size_t>(i)] = std::exp(-0.5 * beta * alpha * res.x[static_cast<std::size_t>(i)] * res.x[static_cast<std::size_t>(i)]);
  normalize(rho);

  // Toeplitz table: kernel(d) = (1/2) ln(1 + (d h)^2), d = 0 .. m-1.
  std::vector<double> kernel(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) kernel[static_cast<std::size_t>(d)] = 0.5 * std::log1p(d * h * d * h);

  std::vector<double> weighted(static_cast<std::size_t>(m));
  std::vector<double> conv(static_cast<std::size_t>(m));
  std::vector<double> next(static_cast<std::size_t>(m));
  double residual = 0.0;
  int it = 0;
  for (it = 1; it <= opts.max_iters; ++it) {
    for (int i = 0; i < m; ++i) {
      const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
      weighted[static_cast<std::size_t>(i)] = w * rho[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j)
        s += kernel[static_cast<std::size_t>(std::abs(i - j))] * weighted[static_cast<std::size_t>(j)];
      conv[static_cast<std::size_t>(i)] = s * h;
    }
    double peak = -1e300;
    for (int i = 0; i < m; ++i) {
      const double e = beta * (-0.5 * alpha * res.x[static_cast<std::size_t>(i)] * res.x[static_cast<std::size_t>(i)] + conv[static_cast<std::size_t>(i)]);
      next[static_cast<std::size_t>(i)] = e;
      peak = std::max(peak, e);
    }
    for (int i = 0; i < m; ++i) next[static_cast<std::size_t>(i)] = std::exp(next[static_cast<std::size_t>(i)] - peak);
    normalize(next);
    residual = 0.0;
    for (int i = 0; i < m; ++i)
      residual = std::max(residual, std::fabs(next[static_cast<std::size_t>(i)] - rho[static_cast<std::size_t>(i)]));
    for (int i = 0; i < m; ++i)
      rho[static_cast<std::size_t>(i)] = (1.0 - opts.damping) * rho[static_cast<std::size_t>(i)] + opts.damping * next[static_cast<std::size_t>(i)];
    if (residual < opts.tol) break;
  }
  res.density = std::move(rho);
  res.iterations = std::min(it, opts.max_iters);
  res.residual = residual;
  if (residual >= opts.tol)
    throw std::runtime_error("mean_field_density: Picard iteration did not converge");
  return res;
}

std::vector<double> mean_field_bin_mass(double alpha, double beta, double lo, double hi, int n_bins,
                                        const MeanFieldOptions& opts) {
  check_binning(lo, hi, n_bins);
  const MeanFieldResult mf = mean_field_density(alpha, beta, opts);
  const int m = static_cast<int>(mf.x.size());
  const double h = mf.x[1] - mf.x[0];

  // Cumulative trapezoid, then linear interpolation of the CDF at bin edges.
  std::vector<double> cdf(static_cast<std::size_t>(m), 0.0);
  for (int i = 1; i < m; ++i)
    cdf[static_cast<std::size_t>(i)] = cdf[static_cast<std::size_t>(i - 1)] +
                                       0.5 * h * (mf.density[static_cast<std::size_t>(i - 1)] + mf.density[static_cast<std::size_t>(i)]);
  auto cdf_at = [&](double x) {
    if (x <= mf.x.front()) return 0.0;
    if (x >= mf.x.back()) return cdf.back();
    const double f = (x - mf.x.front()) / h;
    const int i = std::min(static_cast<int>(f), m - 2);
    const double frac = f - i;
    return cdf[static_cast<std::size_t>(i)] * (1.0 - frac) + cdf[static_cast<std::size_t>(i + 1)] * frac;
  };

  const double w = (hi - lo) / n_bins;
  std::vector<double> mass(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b)
    mass[static_cast<std::size_t>(b)] = cdf_at(lo + (b + 1) * w) - cdf_at(lo + b * w);
  const double total = cdf_at(hi) - cdf_at(lo);
  if (!(total > 0.0)) throw std::invalid_argument("mean_field_bin_mass: window misses the support");
  for (auto& v : mass) v /= total;
  return mass;
}

}  // namespace shmc
