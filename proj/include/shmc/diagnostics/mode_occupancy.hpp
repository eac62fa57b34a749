#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "shmc/vec.hpp"

namespace shmc {

struct WellFractions {
  double left = 0.0;
  double right = 0.0;
};

// Fraction of 1-D samples on each side of `split` (ties count as right).
inline WellFractions well_fractions(std::span<const std::vector<double>> samples,
                                    double split = 0.0) {
  if (samples.empty()) throw std::invalid_argument("well_fractions: no samples");
  std::size_t left = 0;
  for (const auto& s : samples) {
    if (s.empty()) throw std::invalid_argument("well_fractions: empty sample");
    if (s[0] < split) ++left;
  }
  WellFractions f;
  f.left = static_cast<double>(left) / static_cast<double>(samples.size());
  f.right = 1.0 - f.left;
  return f;
}

struct ModeFractions {
  double first = 0.0;
  double second = 0.0;
};

// Fraction of 2-D samples nearer each of two reference points (squared
// Euclidean distance; ties count for the first).
inline ModeFractions mode_fractions(std::span<const std::vector<double>> samples, const Vec<2>& c1,
                                    const Vec<2>& c2) {
  if (samples.empty()) throw std::invalid_argument("mode_fractions: no samples");
  std::size_t first = 0;
  for (const auto& s : samples) {
    if (s.size() != 2) throw std::invalid_argument("mode_fractions: samples must be 2-D");
    const double d1 = (s[0] - c1[0]) * (s[0] - c1[0]) + (s[1] - c1[1]) * (s[1] - c1[1]);
    const double d2 = (s[0] - c2[0]) * (s[0] - c2[0]) + (s[1] - c2[1]) * (s[1] - c2[1]);
    if (d1 <= d2) ++first;
  }
  ModeFractions f;
  f.first = static_cast<double>(first) / static_cast<double>(samples.size());
  f.second = 1.0 - f.first;
  return f;
}

}  // namespace shmc
