#pragma once

#include <concepts>
#include <span>

#include "shmc/vec.hpp"

namespace shmc {

// Posterior-style target over a fixed data set, scaled so that
//
//   U(t) = (prior_nll(t) + sum_j datum_nll(t, j)) / n_data
//
// is sampled at inverse temperature beta() = n_data. u1 = U + sand,
// u2 = -sand, where the sand bump is a smooth barrier filler that the
// acceptance step removes again.
template <typename T>
concept BayesTarget = requires(const T t, const Vec<T::dim>& x, int j) {
  requires T::dim >= 1;
  { t.n_data() } -> std::convertible_to<int>;
  { t.beta() } -> std::convertible_to<double>;
  { t.mass() } -> std::convertible_to<double>;
  { t.prior_grad(x) } -> std::convertible_to<Vec<T::dim>>;
  { t.datum_grad(x, j) } -> std::convertible_to<Vec<T::dim>>;
  { t.sand_grad(x) } -> std::convertible_to<Vec<T::dim>>;
  { t.u1(x) } -> std::convertible_to<double>;
  { t.u2(x) } -> std::convertible_to<double>;
};

// Random-batch estimate of grad u1: the data sum is subsampled,
//
//   prior_grad / n + (1/s) sum_{j in batch} datum_grad(j) + sand_grad.
//
template <BayesTarget T>
Vec<T::dim> bayes_grad_u1_batch(const T& t, const Vec<T::dim>& x, std::span<const int> batch) {
  constexpr int D = T::dim;
  Vec<D> acc = vzero<D>();
  for (int j : batch) {
    const Vec<D> g = t.datum_grad(x, j);
    for (int k = 0; k < D; ++k) acc[k] += g[k];
  }
  const double inv_n = 1.0 / t.beta();
  const double scale = 1.0 / static_cast<double>(batch.size());
  const Vec<D> pg = t.prior_grad(x);
  const Vec<D> sg = t.sand_grad(x);
  Vec<D> out;
  for (int k = 0; k < D; ++k) out[k] = pg[k] * inv_n + scale * acc[k] + sg[k];
  return out;
}

// Full-data gradient with the same accumulation structure, so the batch
// estimate at s = n_data matches it bitwise.
template <BayesTarget T>
Vec<T::dim> bayes_grad_u1_full(const T& t, const Vec<T::dim>& x) {
  constexpr int D = T::dim;
  const int n = t.n_data();
  Vec<D> acc = vzero<D>();
  for (int j = 0; j < n; ++j) {
    const Vec<D> g = t.datum_grad(x, j);
    for (int k = 0; k < D; ++k) acc[k] += g[k];
  }
  const double inv_n = 1.0 / t.beta();
  const double scale = 1.0 / static_cast<double>(n);
  const Vec<D> pg = t.prior_grad(x);
  const Vec<D> sg = t.sand_grad(x);
  Vec<D> out;
  for (int k = 0; k < D; ++k) out[k] = pg[k] * inv_n + scale * acc[k] + sg[k];
  return out;
}

}  // namespace shmc
