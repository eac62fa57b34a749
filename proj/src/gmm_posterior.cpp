#include "shmc/potentials/gmm_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "shmc/rng.hpp"

namespace shmc {

std::vector<double> generate_gmm_data(int n, double theta1, double theta2, double sigma_y_sq,
                                      std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("generate_gmm_data: n must be positive");
  if (!(sigma_y_sq > 0.0)) throw std::invalid_argument("generate_gmm_data: sigma_y_sq must be positive");
  RngStream rng(seed);
  const double sd = std::sqrt(sigma_y_sq);
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (auto& y : ys) {
    const double mean = rng.uniform01() < 0.5 ? theta1 : theta1 + theta2;
    y = mean + rng.normal(sd);
  }
  return ys;
}

namespace {

double log_sum_exp(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, v[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

struct Axis {
  double lo, res;
  int n;
  double at(int i) const { return lo + res * i; }
};

Axis make_axis(std::array<double, 2> bracket, double res) {
  if (!(bracket[1] > bracket[0])) throw std::invalid_argument("estimate_sand_centers: bad bracket");
  if (!(res > 0.0)) throw std::invalid_argument("estimate_sand_centers: bad resolution");
  const int n = static_cast<int>(std::floor((bracket[1] - bracket[0]) / res)) + 1;
  if (n < 5) throw std::invalid_argument("estimate_sand_centers: bracket too narrow for resolution");
  return {bracket[0], res, n};
}

// Top-2 strict local maxima of a sampled curve, by height. Throws if fewer
// than two peaks exist, since the sand needs two distinct wells.
std::array<int, 2> top_two_peaks(const std::vector<double>& curve) {
  std::vector<int> peaks;
  for (int i = 1; i + 1 < static_cast<int>(curve.size()); ++i) {
    if (curve[static_cast<std::size_t>(i)] > curve[static_cast<std::size_t>(i) - 1] &&
        curve[static_cast<std::size_t>(i)] > curve[static_cast<std::size_t>(i) + 1])
      peaks.push_back(i);
  }
  if (peaks.size() < 2)
    throw std::runtime_error(
        "estimate_sand_centers: found fewer than two marginal modes; "
        "specify the sand centers manually");
  std::sort(peaks.begin(), peaks.end(),
            [&](int a, int b) { return curve[static_cast<std::size_t>(a)] > curve[static_cast<std::size_t>(b)]; });
  return {peaks[0], peaks[1]};
}

}  // namespace

SandPlacement estimate_sand_centers(const std::function<double(double, double)>& u, double beta,
                                    std::array<double, 2> bracket1, std::array<double, 2> bracket2,
                                    double coarse_res, double fine_res) {
  if (!(beta > 0.0)) throw std::invalid_argument("estimate_sand_centers: beta must be positive");
  const Axis ax1 = make_axis(bracket1, coarse_res);
  const Axis ax2 = make_axis(bracket2, coarse_res);

  // Log-density table on the coarse grid; both marginals come from it.
  std::vector<double> table(static_cast<std::size_t>(ax1.n) * static_cast<std::size_t>(ax2.n));
  for (int i = 0; i < ax1.n; ++i) {
    const double x1 = ax1.at(i);
    double* row = table.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ax2.n);
    for (int j = 0; j < ax2.n; ++j) row[j] = -beta * u(x1, ax2.at(j));
  }

  std::vector<double> marg1(static_cast<std::size_t>(ax1.n));
  for (int i = 0; i < ax1.n; ++i)
    marg1[static_cast<std::size_t>(i)] =
        log_sum_exp(table.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ax2.n),
                    static_cast<std::size_t>(ax2.n));
  std::vector<double> marg2(static_cast<std::size_t>(ax2.n));
  std::vector<double> col(static_cast<std::size_t>(ax1.n));
  for (int j = 0; j < ax2.n; ++j) {
    for (int i = 0; i < ax1.n; ++i)
      col[static_cast<std::size_t>(i)] =
          table[static_cast<std::size_t>(i) * static_cast<std::size_t>(ax2.n) + static_cast<std::size_t>(j)];
    marg2[static_cast<std::size_t>(j)] = log_sum_exp(col.data(), col.size());
  }

  const auto peaks1 = top_two_peaks(marg1);
  const auto peaks2 = top_two_peaks(marg2);

  // Refine one marginal mode to fine_res; the inner integral stays on the
  // coarse grid of the other axis, which only shifts the marginal by a
  // smooth, mode-preserving amount.
  const auto refine1 = [&](int peak) {
    double best_x = ax1.at(peak), best_v = marg1[static_cast<std::size_t>(peak)];
    std::vector<double> row(static_cast<std::size_t>(ax2.n));
    for (double x = ax1.at(peak) - coarse_res; x <= ax1.at(peak) + coarse_res + 0.5 * fine_res; x += fine_res) {
      for (int j = 0; j < ax2.n; ++j) row[static_cast<std::size_t>(j)] = -beta * u(x, ax2.at(j));
      const double v = log_sum_exp(row.data(), row.size());
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
    return best_x;
  };
  const auto refine2 = [&](int peak) {
    double best_x = ax2.at(peak), best_v = marg2[static_cast<std::size_t>(peak)];
    std::vector<double> colv(static_cast<std::size_t>(ax1.n));
    for (double x = ax2.at(peak) - coarse_res; x <= ax2.at(peak) + coarse_res + 0.5 * fine_res; x += fine_res) {
      for (int i = 0; i < ax1.n; ++i) colv[static_cast<std::size_t>(i)] = -beta * u(ax1.at(i), x);
      const double v = log_sum_exp(colv.data(), colv.size());
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
    return best_x;
  };

  std::array<double, 2> modes1{refine1(peaks1[0]), refine1(peaks1[1])};
  std::array<double, 2> modes2{refine2(peaks2[0]), refine2(peaks2[1])};

  // Pair the per-coordinate modes: the best of the four combinations anchors
  // the first center; the second center takes the remaining mode on each
  // axis, which is the combination disjoint from the first.
  double best = -std::numeric_limits<double>::infinity();
  int bi = 0, bj = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double v = -beta * u(modes1[static_cast<std::size_t>(i)], modes2[static_cast<std::size_t>(j)]);
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }

  SandPlacement out;
  out.centers[0] = {modes1[static_cast<std::size_t>(bi)], modes2[static_cast<std::size_t>(bj)]};
  out.centers[1] = {modes1[static_cast<std::size_t>(1 - bi)], modes2[static_cast<std::size_t>(1 - bj)]};
  out.marginal_modes_1 = modes1;
  out.marginal_modes_2 = modes2;
  const double dx = out.centers[0][0] - out.centers[1][0];
  const double dy = out.centers[0][1] - out.centers[1][1];
  out.well_distance = std::sqrt(dx * dx + dy * dy);
  const double mid1 = 0.5 * (out.centers[0][0] + out.centers[1][0]);
  const double mid2 = 0.5 * (out.centers[0][1] + out.centers[1][1]);
  out.barrier_height = u(mid1, mid2) - 0.5 * (u(out.centers[0][0], out.centers[0][1]) +
                                              u(out.centers[1][0], out.centers[1][1]));
  return out;
}

SandPlacement estimate_sand_centers(const GmmPosteriorTarget& target, std::array<double, 2> bracket1,
                                    std::array<double, 2> bracket2, double coarse_res, double fine_res) {
  return estimate_sand_centers(
      [&target](double a, double b) { return target.potential({a, b}); }, target.beta(), bracket1,
      bracket2, coarse_res, fine_res);
}

}  // namespace shmc
