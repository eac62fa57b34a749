#pragma once

#include <concepts>
#include <span>
#include <vector>

#include "shmc/forces/cell_list.hpp"
#include "shmc/vec.hpp"

namespace shmc {

// Interacting-particle target in rescaled per-pair form:
//
//   U1(x) = sum_i V(x_i) + (1/(N-1)) sum_{i<j} phi1(x_i - x_j)
//
// confinement_force returns -grad V, pair_force returns -phi1'. The effective
// inverse temperature beta_eff() covers momentum resampling and acceptance.
template <typename T>
concept ParticleTarget = requires(const T t, const Vec<T::dim>& x) {
  requires T::dim >= 1;
  { t.n_particles() } -> std::convertible_to<int>;
  { t.beta_eff() } -> std::convertible_to<double>;
  { t.mass() } -> std::convertible_to<double>;
  { t.confinement_force(x) } -> std::convertible_to<Vec<T::dim>>;
  { t.confinement_energy(x) } -> std::convertible_to<double>;
  { t.pair_force(x) } -> std::convertible_to<Vec<T::dim>>;
  { t.pair_energy(x) } -> std::convertible_to<double>;
};

// Adds the short-range remainder phi2 (supported inside cutoff()) and the
// weight that turns a raw pair sum of phi2 into U2.
template <typename T>
concept ShortRangeTarget =
    ParticleTarget<T> && T::has_short_range && requires(const T t, const Vec<T::dim>& r) {
      { t.cutoff() } -> std::convertible_to<double>;
      { t.phi2(r) } -> std::convertible_to<double>;
      { t.u2_pair_scale() } -> std::convertible_to<double>;
    };

// Exact smooth force felt at position xi by the particle with index
// `exclude`: confinement + (1/(N-1)) sum over the others in ascending index
// order. The batch estimator below uses the same accumulation structure, so
// at batch size N-1 the two agree bitwise.
template <ParticleTarget T>
Vec<T::dim> full_force_at(const T& t, std::span<const Vec<T::dim>> xs, const Vec<T::dim>& xi,
                          int exclude) {
  constexpr int D = T::dim;
  const int n = static_cast<int>(xs.size());
  Vec<D> acc = vzero<D>();
  for (int j = 0; j < n; ++j) {
    if (j == exclude) continue;
    const Vec<D> f = t.pair_force(vsub<D>(xi, xs[static_cast<std::size_t>(j)]));
    for (int k = 0; k < D; ++k) acc[k] += f[k];
  }
  const double scale = 1.0 / static_cast<double>(n - 1);
  const Vec<D> cf = t.confinement_force(xi);
  Vec<D> out;
  for (int k = 0; k < D; ++k) out[k] = cf[k] + scale * acc[k];
  return out;
}

template <ParticleTarget T>
Vec<T::dim> full_force_on_particle(const T& t, std::span<const Vec<T::dim>> xs, int i) {
  return full_force_at<T>(t, xs, xs[static_cast<std::size_t>(i)], i);
}

// Random-batch force estimate at xi: confinement + (1/s) sum over the batch,
// in batch order. Batch indices must exclude the moving particle.
template <ParticleTarget T>
Vec<T::dim> batch_force_at(const T& t, std::span<const Vec<T::dim>> xs, const Vec<T::dim>& xi,
                           std::span<const int> batch) {
  constexpr int D = T::dim;
  Vec<D> acc = vzero<D>();
  for (int j : batch) {
    const Vec<D> f = t.pair_force(vsub<D>(xi, xs[static_cast<std::size_t>(j)]));
    for (int k = 0; k < D; ++k) acc[k] += f[k];
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  const Vec<D> cf = t.confinement_force(xi);
  Vec<D> out;
  for (int k = 0; k < D; ++k) out[k] = cf[k] + scale * acc[k];
  return out;
}

template <ParticleTarget T>
double total_u1(const T& t, std::span<const Vec<T::dim>> xs) {
  constexpr int D = T::dim;
  const int n = static_cast<int>(xs.size());
  double conf = 0.0;
  for (int i = 0; i < n; ++i) conf += t.confinement_energy(xs[static_cast<std::size_t>(i)]);
  double pair = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      pair += t.pair_energy(vsub<D>(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]));
  return conf + pair / static_cast<double>(n - 1);
}

template <ShortRangeTarget T>
double total_u2(const T& t, std::span<const Vec<T::dim>> xs) {
  constexpr int D = T::dim;
  const int n = static_cast<int>(xs.size());
  double pair = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      pair += t.phi2(vsub<D>(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]));
  return pair * t.u2_pair_scale();
}

// Change in U2 when particle i moves from xs[i] to `to`, by direct pair sums.
// Reference path for tests and small systems.
template <ShortRangeTarget T>
double u2_delta_brute(const T& t, std::span<const Vec<T::dim>> xs, int i, const Vec<T::dim>& to) {
  constexpr int D = T::dim;
  const int n = static_cast<int>(xs.size());
  const Vec<D>& from = xs[static_cast<std::size_t>(i)];
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const Vec<D>& xj = xs[static_cast<std::size_t>(j)];
    acc += t.phi2(vsub<D>(to, xj)) - t.phi2(vsub<D>(from, xj));
  }
  return acc * t.u2_pair_scale();
}

// Same quantity through a cell list that holds the current configuration.
// phi2 vanishes at the cutoff, so only the two neighbor shells contribute.
// A proposal at contact gives +inf (reject); scratch avoids reallocation.
template <ShortRangeTarget T>
double u2_delta_cells(const T& t, const CellList<T::dim>& cells, int i, const Vec<T::dim>& to,
                      std::vector<int>& scratch) {
  constexpr int D = T::dim;
  double acc = 0.0;
  cells.neighbors_within(to, t.cutoff(), i, scratch);
  for (int j : scratch) acc += t.phi2(vsub<D>(to, cells.position(j)));
  const Vec<D>& from = cells.position(i);
  cells.neighbors_within(from, t.cutoff(), i, scratch);
  for (int j : scratch) acc -= t.phi2(vsub<D>(from, cells.position(j)));
  return acc * t.u2_pair_scale();
}

}  // namespace shmc
