#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace shmc {

// Fixed uniform binning over [lo, hi). Out-of-range samples land in the
// overflow tally and are excluded from the in-range total, so frequencies and
// densities are conditional on the binned window.
struct DensityHistogram {
  double lo = 0.0;
  double hi = 1.0;
  int n_bins = 0;
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;     // in-range samples
  std::int64_t overflow = 0;  // out-of-range samples

  DensityHistogram() = default;

  DensityHistogram(double lo_, double hi_, int n_bins_) : lo(lo_), hi(hi_), n_bins(n_bins_) {
    if (!(hi > lo)) throw std::invalid_argument("DensityHistogram: needs hi > lo");
    if (n_bins <= 0) throw std::invalid_argument("DensityHistogram: needs n_bins > 0");
    counts.assign(static_cast<std::size_t>(n_bins), 0);
    inv_width_ = n_bins / (hi - lo);
  }

  double bin_width() const { return (hi - lo) / n_bins; }

  double bin_center(int j) const { return lo + (j + 0.5) * bin_width(); }

  // Bin of x, or -1 when x falls outside [lo, hi).
  int bin_index(double x) const {
    if (!(x >= lo) || !(x < hi)) return -1;
    const int j = static_cast<int>((x - lo) * inv_width_);
    return j < n_bins ? j : n_bins - 1;
  }

  void add(double x) {
    const int j = bin_index(x);
    if (j < 0) {
      ++overflow;
    } else {
      ++counts[static_cast<std::size_t>(j)];
      ++total;
    }
  }

  void add(std::span<const double> xs) {
    for (double x : xs) add(x);
  }

  // Accumulate raw per-bin counts (e.g. one configuration's occupancy).
  void add_counts(std::span<const std::int64_t> occupancy, std::int64_t occupancy_overflow) {
    if (static_cast<int>(occupancy.size()) != n_bins)
      throw std::invalid_argument("DensityHistogram::add_counts: size mismatch");
    for (int j = 0; j < n_bins; ++j) {
      counts[static_cast<std::size_t>(j)] += occupancy[static_cast<std::size_t>(j)];
      total += occupancy[static_cast<std::size_t>(j)];
    }
    overflow += occupancy_overflow;
  }

  double frequency(int j) const {
    return total == 0 ? 0.0 : static_cast<double>(counts[static_cast<std::size_t>(j)]) / static_cast<double>(total);
  }

  // Empirical density estimate in bin j: count / (total * h).
  double density(int j) const { return frequency(j) / bin_width(); }

  bool same_binning(const DensityHistogram& o) const {
    return lo == o.lo && hi == o.hi && n_bins == o.n_bins;
  }

  void merge(const DensityHistogram& o) {
    if (!same_binning(o)) throw std::invalid_argument("DensityHistogram::merge: binning mismatch");
    for (int j = 0; j < n_bins; ++j) counts[static_cast<std::size_t>(j)] += o.counts[static_cast<std::size_t>(j)];
    total += o.total;
    overflow += o.overflow;
  }

 private:
  double inv_width_ = 1.0;
};

// Bin a sample set in one pass.
inline DensityHistogram bin_count(std::span<const double> xs, double lo, double hi, int n_bins) {
  DensityHistogram h(lo, hi, n_bins);
  h.add(xs);
  return h;
}

// Total-variation-style discrepancy between two binned frequency vectors:
// sum_j |N_j/N_tot - M_j/M_tot|. A pseudometric on histograms over the same
// binning; zero iff the frequency vectors coincide.
inline double relative_error(const DensityHistogram& a, const DensityHistogram& b) {
  if (!a.same_binning(b)) throw std::invalid_argument("relative_error: binning mismatch");
  double s = 0.0;
  for (int j = 0; j < a.n_bins; ++j) {
    const double d = a.frequency(j) - b.frequency(j);
    s += d < 0 ? -d : d;
  }
  return s;
}

// Same discrepancy against an analytic reference given as per-bin masses.
inline double relative_error(const DensityHistogram& a, std::span<const double> ref_mass) {
  if (static_cast<int>(ref_mass.size()) != a.n_bins)
    throw std::invalid_argument("relative_error: reference size mismatch");
  double s = 0.0;
  for (int j = 0; j < a.n_bins; ++j) {
    const double d = a.frequency(j) - ref_mass[static_cast<std::size_t>(j)];
    s += d < 0 ? -d : d;
  }
  return s;
}

}  // namespace shmc
