#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "shmc/diagnostics/histogram.hpp"
#include "shmc/metropolis.hpp"
#include "shmc/phase_state.hpp"
#include "shmc/rng.hpp"
#include "shmc/schedule.hpp"

using namespace shmc;

static constexpr double kInf = std::numeric_limits<double>::infinity();
static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TEST_CASE("rng streams are deterministic and replayable") {
  RngStream a(17, 3), b(17, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.bits() == b.bits());
}

TEST_CASE("rng streams with different ids diverge") {
  RngStream a(17, 0), b(17, 1), c(18, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.bits();
    if (va == b.bits()) ++same_ab;
    if (va == c.bits()) ++same_ac;
  }
  CHECK(same_ab <= 1);
  CHECK(same_ac <= 1);
}

TEST_CASE("uniform01 stays in [0, 1)") {
  RngStream rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below covers its range roughly uniformly") {
  RngStream rng(11);
  const std::uint32_t n = 7;
  std::vector<int> counts(n, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const std::uint32_t j = rng.below(n);
    REQUIRE(j < n);
    ++counts[j];
  }
  for (std::uint32_t j = 0; j < n; ++j)
    CHECK(std::fabs(counts[j] / static_cast<double>(draws) - 1.0 / n) < 0.01);
}

TEST_CASE("below_excluding never yields the excluded index, others uniform") {
  RngStream rng(13);
  const std::uint32_t n = 5, ex = 2;
  std::vector<int> counts(n, 0);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const std::uint32_t j = rng.below_excluding(n, ex);
    REQUIRE(j < n);
    REQUIRE(j != ex);
    ++counts[j];
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    if (j == ex) continue;
    CHECK(std::fabs(counts[j] / static_cast<double>(draws) - 0.25) < 0.01);
  }
}

TEST_CASE("metropolis accepts a zero energy difference for any draw") {
  CHECK(metropolis_accept(0.0, 1.0, 0.0));
  CHECK(metropolis_accept(0.0, 1.0, 0.999));
  CHECK(metropolis_accept(-3.0, 2.0, 0.999999));
}

TEST_CASE("metropolis rejects an infinite barrier outright") {
  CHECK_FALSE(metropolis_accept(kInf, 1.0, 0.0));
  CHECK_FALSE(metropolis_accept(kInf, 1e-300, 0.0));
}

TEST_CASE("metropolis stays in log space for extreme energies") {
  // exp(-beta dU) would underflow to 0 or overflow to inf well before these.
  CHECK_FALSE(metropolis_accept(1e306, 1e4, 0.0));
  CHECK(metropolis_accept(-1e306, 1e4, 0.999));
}

TEST_CASE("metropolis hard-errors on NaN") {
  CHECK_THROWS_AS(metropolis_accept(kNaN, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(metropolis_accept(0.0, kNaN, 0.5), std::domain_error);
  CHECK_THROWS_AS(metropolis_accept(0.0, 1.0, kNaN), std::domain_error);
  CHECK_THROWS_AS(metropolis_accept(0.0, -1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(metropolis_accept(0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("metropolis acceptance is monotone in the energy difference") {
  const double deltas[] = {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0, 50.0};
  const double draws[] = {0.001, 0.1, 0.5, 0.9, 0.999};
  for (double u : draws) {
    bool prev = true;
    for (double d : deltas) {
      const bool acc = metropolis_accept(d, 1.5, u);
      // Once a level rejects, every higher barrier rejects too.
      if (!prev) CHECK_FALSE(acc);
      prev = acc;
    }
  }
}

TEST_CASE("metropolis rate at delta = ln2 / beta is one half") {
  // P(accept) = exp(-beta * ln2 / beta) = 1/2.
  const double beta = 3.7;
  const double delta = std::log(2.0) / beta;
  RngStream rng(101);
  const int n = 100000;
  int acc = 0;
  for (int i = 0; i < n; ++i)
    if (metropolis_accept(delta, beta, rng.uniform01())) ++acc;
  CHECK(std::fabs(acc / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("momentum refresh matches its Gaussian marginal") {
  RngStream rng(23);
  SUBCASE("unit mass and temperature") {
    const int n = 1000000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = resample_momentum<1>(1.0, 1.0, rng)[0];
      s1 += p;
      s2 += p * p;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::fabs(mean) < 0.005);
    CHECK(std::fabs(var - 1.0) < 0.005);
  }
  SUBCASE("variance scales as mass over beta_eff") {
    const double beta_eff = 499.0;
    const int n = 200000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = resample_momentum<1>(1.0, beta_eff, rng)[0];
      s2 += p * p;
    }
    CHECK(std::fabs(s2 / n * beta_eff - 1.0) < 0.02);
  }
  SUBCASE("mass = beta_eff cancels back to unit variance") {
    const int n = 200000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = resample_momentum<1>(2.0, 2.0, rng)[0];
      s2 += p * p;
    }
    CHECK(std::fabs(s2 / n - 1.0) < 0.02);
  }
  SUBCASE("bad parameters throw") {
    CHECK_THROWS_AS(resample_momentum<1>(0.0, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(resample_momentum<1>(1.0, -1.0, rng), std::invalid_argument);
  }
}

TEST_CASE("evolution_time sums L dt over the prefix and divides by N") {
  std::vector<std::pair<int, double>> prefix;
  SUBCASE("single entry, one particle") {
    prefix.push_back({100, 0.02});
    CHECK(evolution_time(prefix, 1) == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("empty prefix is time zero") {
    CHECK(evolution_time(prefix, 10) == 0.0);
  }
  SUBCASE("particle count divides the trajectory clock") {
    prefix.push_back({100, 0.02});
    CHECK(evolution_time(prefix, 500) == doctest::Approx(0.004).epsilon(1e-15));
    prefix.push_back({100, 0.02});
    CHECK(evolution_time(prefix, 500) == doctest::Approx(0.008).epsilon(1e-15));
  }
  SUBCASE("invalid entries throw") {
    prefix.push_back({0, 0.02});
    CHECK_THROWS_AS(evolution_time(prefix, 1), std::invalid_argument);
    prefix[0] = {10, -1.0};
    CHECK_THROWS_AS(evolution_time(prefix, 1), std::invalid_argument);
    prefix[0] = {10, 0.1};
    CHECK_THROWS_AS(evolution_time(prefix, 0), std::invalid_argument);
  }
}

TEST_CASE("schedule entry lookup is 1-based and segment-aligned") {
  SamplerSchedule sched({{100000, 100, 2e-4}, {300000, 20, 2e-4}, {9600000, 10, 1e-4}});
  CHECK(sched.entry(1) == std::pair<int, double>{100, 2e-4});
  CHECK(sched.entry(100000) == std::pair<int, double>{100, 2e-4});
  CHECK(sched.entry(100001) == std::pair<int, double>{20, 2e-4});
  CHECK(sched.entry(400000) == std::pair<int, double>{20, 2e-4});
  CHECK(sched.entry(400001) == std::pair<int, double>{10, 1e-4});
  CHECK(sched.entry(10000000) == std::pair<int, double>{10, 1e-4});
  // Past the declared total the last segment keeps going.
  CHECK(sched.entry(99999999) == std::pair<int, double>{10, 1e-4});
  CHECK_THROWS_AS(sched.entry(0), std::invalid_argument);
}

TEST_CASE("schedule evolution time accumulates segment-wise") {
  SamplerSchedule sched({{100000, 100, 2e-4}, {300000, 20, 2e-4}, {9600000, 10, 1e-4}});
  const int n = 500;
  CHECK(sched.evolution_time_after(0, n) == 0.0);
  CHECK(sched.evolution_time_after(100000, n) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(sched.evolution_time_after(400000, n) == doctest::Approx(6.4).epsilon(1e-12));
  CHECK(sched.evolution_time_after(1000000, n) == doctest::Approx(7.6).epsilon(1e-12));
  CHECK(sched.evolution_time_after(10000000, n) == doctest::Approx(25.6).epsilon(1e-12));
  // Iterations past the end reuse the last segment's increment.
  CHECK(sched.evolution_time_after(10000000 + 500000, n) == doctest::Approx(26.6).epsilon(1e-12));
}

TEST_CASE("iterations_to_reach inverts the evolution-time map") {
  SamplerSchedule sched({{100000, 100, 2e-4}, {300000, 20, 2e-4}, {9600000, 10, 1e-4}});
  const int n = 500;
  CHECK(sched.iterations_to_reach(0.0, n) == 0);
  // Mid-segment targets round up to the first crossing iteration.
  CHECK(sched.iterations_to_reach(0.1, n) == 2500);
  CHECK(sched.iterations_to_reach(7.6, n) == 1000000);
  // Targets landing exactly on a boundary resolve to that iteration, for
  // every boundary including the final one.
  CHECK(sched.iterations_to_reach(4.0, n) == 100000);
  CHECK(sched.iterations_to_reach(6.4, n) == 400000);
  CHECK(sched.iterations_to_reach(25.6, n) == 10000000);
  // Beyond the declared total, the last segment extends the clock.
  CHECK(sched.iterations_to_reach(26.6, n) == 10500000);
  for (std::uint64_t m : {1ull, 999ull, 100000ull, 100001ull, 5000000ull}) {
    const double te = sched.evolution_time_after(m, n);
    CHECK(sched.iterations_to_reach(te, n) == m);
  }
  CHECK_THROWS_AS(sched.iterations_to_reach(-1.0, n), std::invalid_argument);
}

TEST_CASE("schedule construction validates segments") {
  CHECK_THROWS_AS(SamplerSchedule({}), std::invalid_argument);
  CHECK_THROWS_AS(SamplerSchedule({{10, 0, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(SamplerSchedule({{10, 5, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SamplerSchedule({{0, 5, 0.1}}), std::invalid_argument);
  const auto c = SamplerSchedule::constant(40, 0.05);
  CHECK(c.entry(1) == std::pair<int, double>{40, 0.05});
  CHECK(c.entry(123456789) == std::pair<int, double>{40, 0.05});
}

TEST_CASE("histogram bins, overflow and density") {
  DensityHistogram h(0.0, 2.0, 1);
  for (int i = 0; i < 100; ++i) h.add(1.0);
  CHECK(h.total == 100);
  CHECK(h.density(0) == doctest::Approx(0.5).epsilon(1e-15));  // 1 / bin width
  CHECK(h.frequency(0) == 1.0);

  DensityHistogram g(-1.0, 1.0, 4);
  g.add(-1.0);  // lo is inclusive
  g.add(1.0);   // hi is exclusive -> overflow
  g.add(5.0);
  CHECK(g.total == 1);
  CHECK(g.overflow == 2);
  CHECK(g.counts[0] == 1);
  CHECK(g.bin_index(-1.0) == 0);
  CHECK(g.bin_index(1.0) == -1);
  CHECK(g.bin_index(0.999999) == 3);
  CHECK(g.bin_center(0) == doctest::Approx(-0.75));
}

TEST_CASE("histogram occupancy accumulation matches per-sample adds") {
  DensityHistogram a(-2.0, 2.0, 8), b(-2.0, 2.0, 8);
  const std::vector<double> xs = {-1.9, -0.3, 0.0, 0.4, 0.4, 1.99, 3.0, -2.5};
  // Occupancy of the configuration, accumulated twice.
  std::vector<std::int64_t> occ(8, 0);
  std::int64_t over = 0;
  for (double x : xs) {
    const int j = a.bin_index(x);
    if (j < 0)
      ++over;
    else
      ++occ[static_cast<std::size_t>(j)];
  }
  a.add_counts(occ, over);
  a.add_counts(occ, over);
  for (int rep = 0; rep < 2; ++rep)
    for (double x : xs) b.add(x);
  CHECK(a.total == b.total);
  CHECK(a.overflow == b.overflow);
  for (int j = 0; j < 8; ++j) CHECK(a.counts[static_cast<std::size_t>(j)] == b.counts[static_cast<std::size_t>(j)]);
}

TEST_CASE("histogram merge demands identical binning") {
  DensityHistogram a(-1.0, 1.0, 10), b(-1.0, 1.0, 10), c(-1.0, 1.0, 20);
  a.add(0.5);
  b.add(-0.5);
  a.merge(b);
  CHECK(a.total == 2);
  CHECK_THROWS_AS(a.merge(c), std::invalid_argument);
}

TEST_CASE("phase state shape checks and flattening") {
  PhaseState<1> st(std::vector<Vec<1>>{{0.5}, {-0.5}});
  CHECK(st.n() == 2);
  CHECK(st.momenta.size() == 2);
  CHECK(st.all_finite());
  const auto flat = st.flat_positions();
  REQUIRE(flat.size() == 2);
  CHECK(flat[0] == 0.5);
  st.positions[1] = {kNaN};
  CHECK_FALSE(st.all_finite());
  CHECK_THROWS_AS(PhaseState<1>({{0.0}}, {{0.0}, {1.0}}), std::invalid_argument);
}
