#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "shmc/rng.hpp"

namespace shmc {

// A without-replacement index batch plus the persistent pool it is drawn
// from. Each draw refills `indices` with s distinct members of {0..n-1}
// (optionally excluding one particle) via a partial Fisher-Yates pass over
// the pool; the pool stays permuted between draws, which keeps every draw
// uniform and allocation-free.
//
// A full-size batch short-circuits: indices are filled in ascending order and
// no randomness is consumed, so an s = max run replays the exact random
// stream of its deterministic counterpart and sums forces in the same order.
class BatchDraw {
 public:
  explicit BatchDraw(int n) : n_(n), pool_(static_cast<std::size_t>(n)), slot_(static_cast<std::size_t>(n)) {
    if (n < 1) throw std::invalid_argument("BatchDraw: pool must be nonempty");
    std::iota(pool_.begin(), pool_.end(), 0);
    std::iota(slot_.begin(), slot_.end(), 0);
  }

  int pool_size() const { return n_; }
  const std::vector<int>& indices() const { return indices_; }

  // s distinct indices from {0..n-1}.
  void draw(RngStream& rng, int s) {
    if (s < 1 || s > n_) throw std::invalid_argument("BatchDraw::draw: batch size out of range");
    if (s == n_) {
      fill_ascending(-1);
      return;
    }
    indices_.resize(static_cast<std::size_t>(s));
    for (int k = 0; k < s; ++k) {
      const int j = k + static_cast<int>(rng.below(static_cast<std::uint32_t>(n_ - k)));
      swap_slots(k, j);
      indices_[static_cast<std::size_t>(k)] = pool_[static_cast<std::size_t>(k)];
    }
  }

  // s distinct indices from {0..n-1} \ {excluded}.
  void draw_excluding(RngStream& rng, int s, int excluded) {
    if (excluded < 0 || excluded >= n_)
      throw std::invalid_argument("BatchDraw::draw_excluding: excluded index out of range");
    if (s < 1 || s > n_ - 1)
      throw std::invalid_argument("BatchDraw::draw_excluding: batch size out of range");
    if (s == n_ - 1) {
      fill_ascending(excluded);
      return;
    }
    // Park the excluded particle in the last slot, then draw from the rest.
    swap_slots(n_ - 1, slot_[static_cast<std::size_t>(excluded)]);
    indices_.resize(static_cast<std::size_t>(s));
    for (int k = 0; k < s; ++k) {
      const int j = k + static_cast<int>(rng.below(static_cast<std::uint32_t>(n_ - 1 - k)));
      swap_slots(k, j);
      indices_[static_cast<std::size_t>(k)] = pool_[static_cast<std::size_t>(k)];
    }
  }

 private:
  void fill_ascending(int excluded) {
    indices_.clear();
    for (int i = 0; i < n_; ++i)
      if (i != excluded) indices_.push_back(i);
  }

  void swap_slots(int a, int b) {
    if (a == b) return;
    const int pa = pool_[static_cast<std::size_t>(a)];
    const int pb = pool_[static_cast<std::size_t>(b)];
    pool_[static_cast<std::size_t>(a)] = pb;
    pool_[static_cast<std::size_t>(b)] = pa;
    slot_[static_cast<std::size_t>(pa)] = b;
    slot_[static_cast<std::size_t>(pb)] = a;
  }

  int n_;
  std::vector<int> pool_;   // permutation of 0..n-1
  std::vector<int> slot_;   // inverse: slot_[pool_[k]] == k
  std::vector<int> indices_;
};

}  // namespace shmc
