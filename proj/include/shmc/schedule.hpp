#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace shmc {

// A run of iterations sharing one (leapfrog step count, step size) pair.
struct ScheduleSegment {
  std::uint64_t iterations = 0;  // how many iterations this segment covers
  int leapfrog_steps = 0;        // L
  double step_size = 0.0;        // dt
};

// Per-iteration trajectory length, T_E(m) = (1/N) sum_{n<=m} L_n dt_n.
// The accumulated trajectory time divided by the particle count is the clock
// every sampler variant is compared on.
inline double evolution_time(std::span<const std::pair<int, double>> prefix, int n_particles) {
  if (n_particles <= 0) throw std::invalid_argument("evolution_time: n_particles must be positive");
  long double acc = 0.0L;
  for (const auto& [steps, dt] : prefix) {
    if (steps <= 0 || !(dt > 0.0))
      throw std::invalid_argument("evolution_time: schedule entries must have L > 0 and dt > 0");
    acc += static_cast<long double>(steps) * dt;
  }
  return static_cast<double>(acc / n_particles);
}

// Piecewise-constant (L, dt) schedule indexed by 1-based iteration number.
// Iterations past the declared total reuse the final segment, so a schedule
// never runs out.
class SamplerSchedule {
 public:
  explicit SamplerSchedule(std::vector<ScheduleSegment> segments)
      : segments_(std::move(segments)) {
    if (segments_.empty())
      throw std::invalid_argument("SamplerSchedule: needs at least one segment");
    for (const auto& s : segments_) {
      if (s.leapfrog_steps <= 0 || !(s.step_size > 0.0))
        throw std::invalid_argument("SamplerSchedule: segments must have L > 0 and dt > 0");
      if (s.iterations == 0)
        throw std::invalid_argument("SamplerSchedule: segments must cover at least one iteration");
    }
  }

  static SamplerSchedule constant(int leapfrog_steps, double step_size) {
    return SamplerSchedule({{std::numeric_limits<std::uint64_t>::max(), leapfrog_steps, step_size}});
  }

  const std::vector<ScheduleSegment>& segments() const { return segments_; }

  // (L, dt) governing iteration n (1-based). Beyond the end: last segment.
  std::pair<int, double> entry(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("SamplerSchedule::entry: iterations are 1-based");
    std::uint64_t consumed = 0;
    for (const auto& s : segments_) {
      if (n - consumed <= s.iterations) return {s.leapfrog_steps, s.step_size};
      consumed += s.iterations;
    }
    const auto& last = segments_.back();
    return {last.leapfrog_steps, last.step_size};
  }

  // T_E after m iterations for an N-particle system, summed segment-wise.
  double evolution_time_after(std::uint64_t m, int n_particles) const {
    if (n_particles <= 0)
      throw std::invalid_argument("SamplerSchedule: n_particles must be positive");
    long double acc = 0.0L;
    std::uint64_t left = m;
    for (const auto& s : segments_) {
      const std::uint64_t take = left < s.iterations ? left : s.iterations;
      acc += static_cast<long double>(take) * s.leapfrog_steps * s.step_size;
      left -= take;
      if (left == 0) break;
    }
    if (left > 0) {
      const auto& last = segments_.back();
      acc += static_cast<long double>(left) * last.leapfrog_steps * last.step_size;
    }
    return static_cast<double>(acc / n_particles);
  }

  // Smallest m with T_E(m) >= te. The target gets a hair of relative slack
  // so that a te sitting exactly on an iteration boundary resolves to that
  // iteration instead of one past it when the two roundings disagree.
  std::uint64_t iterations_to_reach(double te, int n_particles) const {
    if (!(te >= 0.0)) throw std::invalid_argument("SamplerSchedule: te must be nonnegative");
    if (te == 0.0) return 0;
    long double target = static_cast<long double>(te) * n_particles;
    target -= target * 1e-12L;
    long double acc = 0.0L;
    std::uint64_t m = 0;
    for (const auto& s : segments_) {
      const long double seg_inc = static_cast<long double>(s.leapfrog_steps) * s.step_size;
      const long double seg_total = seg_inc * s.iterations;
      if (acc + seg_total >= target) {
        const long double need = (target - acc) / seg_inc;
        std::uint64_t k = static_cast<std::uint64_t>(need);
        while (acc + seg_inc * k < target && k < s.iterations) ++k;
        return m + k;
      }
      acc += seg_total;
      m += s.iterations;
    }
    const auto& last = segments_.back();
    const long double seg_inc = static_cast<long double>(last.leapfrog_steps) * last.step_size;
    const long double need = (target - acc) / seg_inc;
    std::uint64_t k = static_cast<std::uint64_t>(need);
    while (acc + seg_inc * k < target) ++k;
    return m + k;
  }

 private:
  std::vector<ScheduleSegment> segments_;
};

}  // namespace shmc
