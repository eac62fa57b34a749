#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "shmc/integrators/euler_maruyama.hpp"
#include "shmc/integrators/leapfrog.hpp"
#include "shmc/rng.hpp"

using namespace shmc;

namespace {

double harmonic_h(const Vec<1>& x, const Vec<1>& p, double mass) {
  return 0.5 * x[0] * x[0] + 0.5 * p[0] * p[0] / mass;
}

Vec<1> harmonic_force(const Vec<1>& x) { return {-x[0]}; }

// Max |H(t) - H(0)| sampled after every step, via repeated single-step calls
// (the force is a pure function, so this retraces the multi-step trajectory).
template <typename Force, typename Energy>
double max_energy_drift(Vec<1> x, Vec<1> p, double dt, int n_steps, double mass, Force&& force,
                        Energy&& energy) {
  const double h0 = energy(x, p);
  double worst = 0.0;
  for (int k = 0; k < n_steps; ++k) {
    leapfrog<1>(x, p, dt, 1, mass, force);
    worst = std::max(worst, std::fabs(energy(x, p) - h0));
  }
  return worst;
}

}  // namespace

TEST_CASE("leapfrog free flight is exact") {
  auto zero = [](const Vec<1>&) { return Vec<1>{0.0}; };
  Vec<1> x{0.3}, p{-1.7};
  const double dt = 0.25, mass = 2.0;
  leapfrog<1>(x, p, dt, 1, mass, zero);
  CHECK(x[0] == 0.3 + dt * (1.0 / mass) * -1.7);
  CHECK(p[0] == -1.7);
  // With no force the momentum never changes, bit for bit; |p|^4 along the
  // trajectory is therefore constant.
  for (int k = 0; k < 100; ++k) {
    leapfrog<1>(x, p, dt, 1, mass, zero);
    CHECK(p[0] == -1.7);
  }
}

TEST_CASE("leapfrog nearly conserves the harmonic Hamiltonian") {
  Vec<1> x{1.0}, p{0.0};
  const double h0 = harmonic_h(x, p, 1.0);
  leapfrog<1>(x, p, 0.01, 100, 1.0, harmonic_force);
  CHECK(std::fabs(harmonic_h(x, p, 1.0) - h0) < 1e-4 * h0);
}

TEST_CASE("leapfrog is reversible: integrate, flip, integrate, flip") {
  auto force = [](const Vec<1>& x) { return Vec<1>{-x[0] * x[0] * x[0] - 0.3 * std::sin(x[0])}; };
  Vec<1> x{0.7}, p{-0.4};
  const Vec<1> x0 = x, p0 = p;
  leapfrog<1>(x, p, 0.05, 200, 1.3, force);
  p[0] = -p[0];
  leapfrog<1>(x, p, 0.05, 200, 1.3, force);
  p[0] = -p[0];
  CHECK(std::fabs(x[0] - x0[0]) < 1e-10);
  CHECK(std::fabs(p[0] - p0[0]) < 1e-10);
}

TEST_CASE("randomized leapfrog is reversible when the batch script is replayed backwards") {
  // Per-step force parameter stands in for a drawn batch: same value on both
  // half kicks of a step, scripted forward then reversed.
  const std::vector<double> script = {1.0, 2.5, 0.5, 1.7, 3.0, 0.9};
  std::size_t cursor = 0;
  bool backward = false;
  double stiffness = 0.0;
  auto begin_step = [&] {
    stiffness = backward ? script[script.size() - 1 - cursor] : script[cursor];
    ++cursor;
  };
  auto force = [&](const Vec<1>& x) { return Vec<1>{-stiffness * x[0]}; };

  Vec<1> x{0.9}, p{0.2};
  const Vec<1> x0 = x, p0 = p;
  const int n = static_cast<int>(script.size());
  leapfrog_random_batch<1>(x, p, 0.1, n, 1.0, begin_step, force);
  cursor = 0;
  backward = true;
  p[0] = -p[0];
  leapfrog_random_batch<1>(x, p, 0.1, n, 1.0, begin_step, force);
  p[0] = -p[0];
  CHECK(std::fabs(x[0] - x0[0]) < 1e-10);
  CHECK(std::fabs(p[0] - p0[0]) < 1e-10);
}

TEST_CASE("energy error scales as dt^2") {
  SUBCASE("harmonic") {
    const double coarse = max_energy_drift({1.0}, {0.0}, 0.05, 400, 1.0, harmonic_force,
                                           [](const Vec<1>& x, const Vec<1>& p) { return harmonic_h(x, p, 1.0); });
    const double fine = max_energy_drift({1.0}, {0.0}, 0.025, 800, 1.0, harmonic_force,
                                         [](const Vec<1>& x, const Vec<1>& p) { return harmonic_h(x, p, 1.0); });
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.5);
  }
  SUBCASE("anharmonic") {
    auto force = [](const Vec<1>& x) { return Vec<1>{-x[0] - x[0] * x[0] * x[0]}; };
    auto energy = [](const Vec<1>& x, const Vec<1>& p) {
      return 0.5 * x[0] * x[0] + 0.25 * x[0] * x[0] * x[0] * x[0] + 0.5 * p[0] * p[0];
    };
    const double coarse = max_energy_drift({1.1}, {0.3}, 0.02, 1000, 1.0, force, energy);
    const double fine = max_energy_drift({1.1}, {0.3}, 0.01, 2000, 1.0, force, energy);
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.5);
  }
}

TEST_CASE("energy error stays bounded over long runs instead of drifting") {
  Vec<1> x{1.0}, p{0.0};
  const double dt = 0.05, h0 = harmonic_h(x, p, 1.0);
  double early = 0.0, overall = 0.0;
  for (int k = 0; k < 100000; ++k) {
    leapfrog<1>(x, p, dt, 1, 1.0, harmonic_force);
    const double err = std::fabs(harmonic_h(x, p, 1.0) - h0);
    overall = std::max(overall, err);
    if (k < 1000) early = std::max(early, err);
  }
  CHECK(overall <= 2.0 * early);
}

TEST_CASE("force evaluation counts: reuse for deterministic runs, two per randomized step") {
  Vec<1> x{0.4}, p{0.1};
  int calls = 0;
  auto counting = [&](const Vec<1>& q) {
    ++calls;
    return Vec<1>{-q[0]};
  };
  auto rep = leapfrog<1>(x, p, 0.01, 7, 1.0, counting);
  CHECK(rep.force_evals == 8);
  CHECK(calls == 8);
  CHECK(rep.finite);

  calls = 0;
  int begins = 0;
  rep = leapfrog_random_batch<1>(x, p, 0.01, 7, 1.0, [&] { ++begins; }, counting);
  CHECK(rep.force_evals == 14);
  CHECK(calls == 14);
  CHECK(begins == 7);

  std::vector<Vec<1>> xs = {{0.1}, {0.2}, {0.3}}, ps = {{0.0}, {0.0}, {0.0}}, fbuf(3);
  int vec_calls = 0;
  auto vec_force = [&](std::span<const Vec<1>> in, std::span<Vec<1>> out) {
    ++vec_calls;
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = {-in[i][0]};
  };
  rep = leapfrog_all<1>(xs, ps, 0.01, 5, 1.0, vec_force, fbuf);
  CHECK(rep.force_evals == 6);
  CHECK(vec_calls == 6);

  vec_calls = 0;
  begins = 0;
  rep = leapfrog_all_random_batch<1>(xs, ps, 0.01, 5, 1.0, [&] { ++begins; }, vec_force, fbuf);
  CHECK(rep.force_evals == 10);
  CHECK(vec_calls == 10);
  CHECK(begins == 5);
}

TEST_CASE("overflowing trajectories are flagged as non-finite") {
  auto zero = [](const Vec<1>&) { return Vec<1>{0.0}; };
  Vec<1> x{1e308}, p{1e308};
  const auto rep = leapfrog<1>(x, p, 10.0, 3, 1.0, zero);
  CHECK_FALSE(rep.finite);
}

TEST_CASE("randomized leapfrog with a deterministic force retraces plain leapfrog bitwise") {
  Vec<1> xa{0.8}, pa{-0.2}, xb{0.8}, pb{-0.2};
  leapfrog<1>(xa, pa, 0.03, 50, 1.0, harmonic_force);
  leapfrog_random_batch<1>(xb, pb, 0.03, 50, 1.0, [] {}, harmonic_force);
  CHECK(xa[0] == xb[0]);
  CHECK(pa[0] == pb[0]);
}

TEST_CASE("whole-configuration leapfrog matches independent per-particle runs for separable forces") {
  std::vector<Vec<1>> xs = {{0.3}, {-1.2}, {0.9}}, ps = {{0.5}, {0.0}, {-0.7}}, fbuf(3);
  auto vec_force = [](std::span<const Vec<1>> in, std::span<Vec<1>> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = {-in[i][0]};
  };
  const auto xs0 = xs, ps0 = ps;
  leapfrog_all<1>(xs, ps, 0.02, 30, 1.5, vec_force, fbuf);
  for (std::size_t i = 0; i < 3; ++i) {
    Vec<1> x = xs0[i], p = ps0[i];
    leapfrog<1>(x, p, 0.02, 30, 1.5, harmonic_force);
    CHECK(xs[i][0] == x[0]);
    CHECK(ps[i][0] == p[0]);
  }
}

TEST_CASE("whole-configuration leapfrog conserves total momentum of an isolated pair exactly") {
  std::vector<Vec<1>> xs = {{0.0}, {1.3}}, ps = {{0.4}, {-0.1}}, fbuf(2);
  auto spring = [](std::span<const Vec<1>> in, std::span<Vec<1>> out) {
    out[0] = {in[1][0] - in[0][0]};
    out[1] = {in[0][0] - in[1][0]};
  };
  const double p_total = ps[0][0] + ps[1][0];
  auto energy = [&] {
    const double r = xs[0][0] - xs[1][0];
    return 0.5 * r * r + 0.5 * (ps[0][0] * ps[0][0] + ps[1][0] * ps[1][0]);
  };
  const double h0 = energy();
  leapfrog_all<1>(xs, ps, 0.01, 500, 1.0, spring, fbuf);
  // The two spring forces are exact negations; only per-addition rounding is
  // left, so the total momentum moves by at most a few ulps per kick.
  CHECK(std::fabs(ps[0][0] + ps[1][0] - p_total) < 1e-13);
  CHECK(std::fabs(energy() - h0) < 1e-4);
}

TEST_CASE("overdamped proposals: zero force gives unit-variance increments at beta 1, dt 1/2") {
  RngStream rng(59);
  auto zero = [](const Vec<1>&) { return Vec<1>{0.0}; };
  Vec<1> x{0.0};
  const int n = 1000000;
  double prev = 0.0, sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    euler_maruyama<1>(x, 0.5, 1, 1.0, [] {}, zero, rng);
    const double inc = x[0] - prev;
    prev = x[0];
    sum += inc;
    sum_sq += inc * inc;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.005);
  CHECK(std::fabs(var - 1.0) < 0.01);
}

TEST_CASE("overdamped proposals follow the drift") {
  auto pull = [](const Vec<1>& q) { return Vec<1>{-q[0]}; };
  SUBCASE("mean of one step from x = 1 is 1 - dt") {
    RngStream rng(61);
    const int reps = 200000;
    double sum = 0.0;
    for (int k = 0; k < reps; ++k) {
      Vec<1> x{1.0};
      euler_maruyama<1>(x, 0.5, 1, 1.0, [] {}, pull, rng);
      sum += x[0];
    }
    CHECK(std::fabs(sum / reps - 0.5) < 0.01);
  }
  SUBCASE("at huge inverse temperature the step is essentially deterministic") {
    RngStream rng(67);
    Vec<1> x{1.0};
    euler_maruyama<1>(x, 0.5, 1, 1e18, [] {}, pull, rng);
    CHECK(std::fabs(x[0] - 0.5) < 1e-8);
  }
}

TEST_CASE("overdamped proposals are reproducible from the seed and use per-coordinate noise") {
  auto pull2 = [](const Vec<2>& q) { return Vec<2>{-q[0], -0.5 * q[1]}; };
  RngStream a(71, 3), b(71, 3);
  Vec<2> xa{1.0, -1.0}, xb{1.0, -1.0};
  int begins = 0;
  const auto rep = euler_maruyama<2>(xa, 0.1, 25, 2.0, [&] { ++begins; }, pull2, a);
  euler_maruyama<2>(xb, 0.1, 25, 2.0, [] {}, pull2, b);
  CHECK(rep.force_evals == 25);
  CHECK(begins == 25);
  CHECK(rep.finite);
  CHECK(xa[0] == xb[0]);
  CHECK(xa[1] == xb[1]);

  RngStream c(71, 4);
  Vec<2> xc{1.0, -1.0};
  euler_maruyama<2>(xc, 0.1, 25, 2.0, [] {}, pull2, c);
  CHECK(xa[0] != xc[0]);
}
