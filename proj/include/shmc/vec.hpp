#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace shmc {

// Fixed-dimension coordinate/momentum vector. D is small (1 or 2 in practice),
// so everything stays on the stack and unrolls.
template <int D>
using Vec = std::array<double, D>;

template <int D>
inline Vec<D> vzero() {
  Vec<D> v{};
  return v;
}

template <int D>
inline Vec<D> vsub(const Vec<D>& a, const Vec<D>& b) {
  Vec<D> r;
  for (int k = 0; k < D; ++k) r[k] = a[k] - b[k];
  return r;
}

template <int D>
inline Vec<D> vadd(const Vec<D>& a, const Vec<D>& b) {
  Vec<D> r;
  for (int k = 0; k < D; ++k) r[k] = a[k] + b[k];
  return r;
}

template <int D>
inline Vec<D> vscale(double c, const Vec<D>& a) {
  Vec<D> r;
  for (int k = 0; k < D; ++k) r[k] = c * a[k];
  return r;
}

// a += c * b
template <int D>
inline void vaxpy(Vec<D>& a, double c, const Vec<D>& b) {
  for (int k = 0; k < D; ++k) a[k] += c * b[k];
}

template <int D>
inline double vdot(const Vec<D>& a, const Vec<D>& b) {
  double s = 0.0;
  for (int k = 0; k < D; ++k) s += a[k] * b[k];
  return s;
}

template <int D>
inline double vnorm_sq(const Vec<D>& a) {
  return vdot<D>(a, a);
}

template <int D>
inline double vnorm(const Vec<D>& a) {
  return std::sqrt(vnorm_sq<D>(a));
}

template <int D>
inline bool vfinite(const Vec<D>& a) {
  for (int k = 0; k < D; ++k)
    if (!std::isfinite(a[k])) return false;
  return true;
}

}  // namespace shmc
