#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "shmc/vec.hpp"

namespace shmc {

// Uniform-grid neighbor structure over a dense bounding box, for short-range
// pair sums with cutoff <= cell_size. In 1-D this is just a sorted bucket
// array; in higher dimensions the cells are flattened row-major. Particle
// moves update buckets only when the particle actually crosses a cell
// boundary; a move outside the current box triggers a transparent regrow.
template <int D>
class CellList {
 public:
  explicit CellList(double cell_size) : cell_size_(cell_size) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("CellList: cell_size must be positive");
  }

  double cell_size() const { return cell_size_; }
  int size() const { return static_cast<int>(positions_.size()); }

  void rebuild(std::span<const Vec<D>> xs) {
    positions_.assign(xs.begin(), xs.end());
    if (positions_.empty()) throw std::invalid_argument("CellList::rebuild: empty configuration");
    for (const auto& x : positions_)
      if (!vfinite<D>(x)) throw std::invalid_argument("CellList::rebuild: non-finite position");
    Vec<D> lo = positions_[0], hi = positions_[0];
    for (const auto& x : positions_)
      for (int k = 0; k < D; ++k) {
        lo[k] = std::min(lo[k], x[k]);
        hi[k] = std::max(hi[k], x[k]);
      }
    // One margin cell on each side keeps boundary queries in range; extra
    // slack postpones regrows while the configuration breathes.
    std::int64_t n_cells = 1;
    for (int k = 0; k < D; ++k) {
      origin_[k] = lo[k] - 2.0 * cell_size_;
      extent_[k] = static_cast<int>(std::floor((hi[k] - origin_[k]) / cell_size_)) + 3;
      n_cells *= extent_[k];
    }
    if (n_cells > (1 << 26)) throw std::runtime_error("CellList: grid too large for configuration spread");
    buckets_.assign(static_cast<std::size_t>(n_cells), {});
    cell_of_.resize(positions_.size());
    for (int i = 0; i < size(); ++i) {
      const int c = cell_index(positions_[static_cast<std::size_t>(i)]);
      cell_of_[static_cast<std::size_t>(i)] = c;
      buckets_[static_cast<std::size_t>(c)].push_back(i);
    }
  }

  // Record that particle i moved to `to`. Bucket membership changes only on
  // cell crossings.
  void move(int i, const Vec<D>& to) {
    if (i < 0 || i >= size()) throw std::invalid_argument("CellList::move: index out of range");
    if (!vfinite<D>(to)) throw std::invalid_argument("CellList::move: non-finite position");
    positions_[static_cast<std::size_t>(i)] = to;
    if (!in_box(to)) {
      std::vector<Vec<D>> xs = positions_;
      rebuild(xs);
      return;
    }
    const int c = cell_index(to);
    const int old = cell_of_[static_cast<std::size_t>(i)];
    if (c == old) return;
    auto& ob = buckets_[static_cast<std::size_t>(old)];
    ob.erase(std::find(ob.begin(), ob.end(), i));
    buckets_[static_cast<std::size_t>(c)].push_back(i);
    cell_of_[static_cast<std::size_t>(i)] = c;
  }

  const Vec<D>& position(int i) const { return positions_[static_cast<std::size_t>(i)]; }

  // All particle ids (except `exclude`) within Euclidean distance `cutoff`
  // of x. cutoff must not exceed the cell size, so scanning the 3^D
  // neighborhood of the containing cell covers the ball.
  void neighbors_within(const Vec<D>& x, double cutoff, int exclude, std::vector<int>& out) const {
    if (!(cutoff <= cell_size_))
      throw std::invalid_argument("CellList::neighbors_within: cutoff exceeds cell size");
    out.clear();
    const double c2 = cutoff * cutoff;
    std::array<int, D> base;
    for (int k = 0; k < D; ++k) {
      const double f = std::floor((x[k] - origin_[k]) / cell_size_);
      base[k] = static_cast<int>(f);
    }
    std::array<int, D> off{};
    for (int k = 0; k < D; ++k) off[k] = -1;
    for (;;) {
      bool in_range = true;
      int idx = 0;
      for (int k = 0; k < D; ++k) {
        const int c = base[k] + off[k];
        if (c < 0 || c >= extent_[k]) {
          in_range = false;
          break;
        }
        idx = idx * extent_[k] + c;
      }
      if (in_range) {
        for (int j : buckets_[static_cast<std::size_t>(idx)]) {
          if (j == exclude) continue;
          if (vnorm_sq<D>(vsub<D>(positions_[static_cast<std::size_t>(j)], x)) <= c2) out.push_back(j);
        }
      }
      int k = D - 1;
      for (; k >= 0; --k) {
        if (++off[k] <= 1) break;
        off[k] = -1;
      }
      if (k < 0) break;
    }
  }

 private:
  bool in_box(const Vec<D>& x) const {
    for (int k = 0; k < D; ++k) {
      const double c = std::floor((x[k] - origin_[k]) / cell_size_);
      if (c < 0.0 || c >= static_cast<double>(extent_[k])) return false;
    }
    return true;
  }

  int cell_index(const Vec<D>& x) const {
    int idx = 0;
    for (int k = 0; k < D; ++k) {
      const int c = static_cast<int>(std::floor((x[k] - origin_[k]) / cell_size_));
      idx = idx * extent_[k] + c;
    }
    return idx;
  }

  double cell_size_;
  Vec<D> origin_{};
  std::array<int, D> extent_{};
  std::vector<std::vector<int>> buckets_;
  std::vector<int> cell_of_;
  std::vector<Vec<D>> positions_;
};

}  // namespace shmc
