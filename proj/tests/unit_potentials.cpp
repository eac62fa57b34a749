#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "shmc/potentials/double_well.hpp"
#include "shmc/potentials/dyson.hpp"
#include "shmc/potentials/gmm_posterior.hpp"
#include "shmc/potentials/smooth_pair.hpp"
#include "shmc/rng.hpp"

using namespace shmc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Central difference with a scale-aware step. Agreement threshold follows the
// convention |fd - g| <= tol * max(1, |g|), which stays meaningful where the
// gradient crosses zero.
template <typename F>
double fd1(F&& f, double x) {
  const double h = 1e-5 * std::max(1.0, std::fabs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

void check_grad(double fd, double g, double tol = 1e-6) {
  CHECK(std::fabs(fd - g) <= tol * std::max(1.0, std::fabs(g)));
}

template <typename F>
Vec<2> fd2(F&& f, const Vec<2>& t) {
  Vec<2> g;
  for (int k = 0; k < 2; ++k) {
    const double h = 1e-5 * std::max(1.0, std::fabs(t[k]));
    Vec<2> a = t, b = t;
    a[k] += h;
    b[k] -= h;
    g[k] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("log-gas surrogate kernel: value and slope at the matching point") {
  DysonTarget t(10, 0.01);
  // Inside the cutoff the tangent-line surrogate has constant slope -1/delta0.
  CHECK(t.phi1_grad(0.005) == doctest::Approx(-100.0).epsilon(1e-15));
  CHECK(t.phi1_grad(-0.005) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(t.phi1_grad(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(t.phi1_grad(-2.0) == doctest::Approx(0.5).epsilon(1e-15));
  // Both branches meet at |r| = delta0: -1/0.01 = -100 and value ln(100).
  CHECK(t.phi1_grad(0.01) == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(t.phi1_grad(0.01 - 1e-12) == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(t.phi1(0.01) == doctest::Approx(std::log(100.0)).epsilon(1e-12));
  CHECK(t.phi1(0.005) == doctest::Approx(std::log(100.0) + 1.0 - 100.0 * 0.005).epsilon(1e-12));
  CHECK_THROWS_AS(t.phi1_grad(0.0), std::domain_error);
}

TEST_CASE("log-gas kernel split reassembles the full kernel") {
  DysonTarget t(10, 0.01);
  RngStream rng(5);
  for (int i = 0; i < 200; ++i) {
    const double r = (rng.uniform01() - 0.5) * 4.0;
    if (r == 0.0) continue;
    CHECK(t.phi1(r) + t.phi2_scalar(r) == doctest::Approx(t.phi(r)).epsilon(1e-12));
    if (std::fabs(r) >= 0.01) CHECK(t.phi2_scalar(r) == 0.0);
  }
  // The remainder decreases from +inf at contact to 0 at the cutoff.
  CHECK(t.phi2_scalar(0.0) == kInf);
  double prev = kInf;
  for (int k = 1; k <= 99; ++k) {
    const double v = t.phi2_scalar(k * 1e-4);
    CHECK(v > 0.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(t.phi2_scalar(0.01) == 0.0);
  CHECK(t.pair_force({0.0})[0] == kInf);
}

TEST_CASE("log-gas target scaling") {
  DysonTarget t(500, 0.01, 1.0, 1.0);
  CHECK(t.beta_eff() == doctest::Approx(499.0));
  CHECK(t.u2_pair_scale() == doctest::Approx(1.0 / 499.0));
  DysonTarget tw(500, 0.01, 2.0, 1.0);
  CHECK(tw.beta_eff() == doctest::Approx(4.0 * 499.0));
  CHECK_THROWS_AS(DysonTarget(1), std::invalid_argument);
  CHECK_THROWS_AS(DysonTarget(10, -0.1), std::invalid_argument);
}

TEST_CASE("quartic double well: pinned values") {
  CHECK(double_well_potential(1.0, 20.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(double_well_potential(-1.0, 20.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(double_well_potential(0.0, 20.0, 1.0) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(double_well_potential(2.0, 20.0, 1.0) == doctest::Approx(180.0).epsilon(1e-15));
  DoubleWellTarget t(20.0, 1.0, 0.05);
  CHECK(t.potential_scalar(0.0) == doctest::Approx(20.0));
  CHECK(t.potential_scalar(1.0) == doctest::Approx(0.0));
}

TEST_CASE("double well split: U1 + U2 = U, proposal barrier is lambda H") {
  DoubleWellTarget t(20.0, 1.0, 0.05);
  for (double x = -2.5; x <= 2.5; x += 0.01) {
    const Vec<1> v{x};
    CHECK(t.u1(v) + t.u2(v) == doctest::Approx(t.potential(v)).epsilon(1e-12));
    CHECK(t.u2(v) >= 0.0);
    if (std::fabs(x) >= 1.0) CHECK(t.u2(v) == 0.0);
  }
  CHECK(t.u1({0.0}) == doctest::Approx(0.05 * 20.0).epsilon(1e-12));  // lambda * H
  CHECK(t.u1({1.0}) == doctest::Approx(0.0).epsilon(1e-12));
  // lambda = 1 removes the split entirely.
  DoubleWellTarget flat(20.0, 1.0, 1.0);
  CHECK(flat.u2({0.5}) == 0.0);
  CHECK_THROWS_AS(DoubleWellTarget(20.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DoubleWellTarget(20.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("double well proposal gradient is continuous across the matching points") {
  // U'(+-W) = 0, so the branch switch does not kink U1'.
  DoubleWellTarget t(20.0, 1.0, 0.05);
  for (double w : {1.0, -1.0}) {
    const double inside = t.grad_u1({w - std::copysign(1e-9, w)})[0];
    const double outside = t.grad_u1({w + std::copysign(1e-9, w)})[0];
    CHECK(std::fabs(inside - outside) < 1e-6);
    CHECK(std::fabs(t.grad_scalar(w)) < 1e-12);
  }
}

TEST_CASE("mixture posterior: pinned single-datum value") {
  // One datum y = 0 at theta = (0, 0): both component exponents vanish, the
  // prior vanishes, so U = -ln 2 at beta = 1.
  GmmPosteriorTarget t({0.0});
  CHECK(t.beta() == 1.0);
  CHECK(t.potential({0.0, 0.0}) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mixture posterior: tempered decomposition and label-swap symmetry") {
  const auto data = generate_gmm_data(50, 0.0, 2.0, 0.5, 9);
  REQUIRE(static_cast<int>(data.size()) == 50);
  GmmPosteriorTarget t(data);
  CHECK(t.beta() == 50.0);
  RngStream rng(31);
  for (int i = 0; i < 50; ++i) {
    const Vec<2> th{4.0 * (rng.uniform01() - 0.5), 6.0 * (rng.uniform01() - 0.5)};
    // beta U = prior + sum of per-datum terms.
    double direct = t.prior_nll(th);
    for (int j = 0; j < t.n_data(); ++j) direct += t.datum_nll(th, j);
    CHECK(t.beta() * t.potential(th) == doctest::Approx(direct).epsilon(1e-12));
    // The likelihood cannot tell (t1, t2) from (t1 + t2, -t2).
    const Vec<2> swapped{th[0] + th[1], -th[1]};
    double lik = 0.0, lik_swapped = 0.0;
    for (int j = 0; j < t.n_data(); ++j) {
      lik += t.datum_nll(th, j);
      lik_swapped += t.datum_nll(swapped, j);
    }
    CHECK(lik == doctest::Approx(lik_swapped).epsilon(1e-10));
  }
}

TEST_CASE("mixture posterior sand: U1 - U = G >= 0 and U2 = -G") {
  const auto data = generate_gmm_data(30, 0.0, 2.0, 0.5, 3);
  GmmPosteriorTarget t(data);
  CHECK_FALSE(t.has_sand());
  CHECK(t.u2({1.0, 1.0}) == 0.0);
  t.set_sand({Vec<2>{0.0, 2.0}, Vec<2>{2.0, -2.0}}, 0.5);
  CHECK(t.has_sand());
  RngStream rng(41);
  for (int i = 0; i < 100; ++i) {
    const Vec<2> th{6.0 * (rng.uniform01() - 0.5), 8.0 * (rng.uniform01() - 0.5)};
    const double g = t.sand_value(th);
    CHECK(g >= 0.0);
    CHECK(t.u1(th) - t.potential(th) == doctest::Approx(g).epsilon(1e-12));
    CHECK(t.u2(th) == doctest::Approx(-g).epsilon(1e-12));
  }
  CHECK_THROWS_AS(t.set_sand({Vec<2>{0.0, 0.0}, Vec<2>{1.0, 1.0}}, -0.1), std::invalid_argument);
}

TEST_CASE("sand height recommendation overfills by 10 / beta") {
  CHECK(recommended_sand_height(0.4054, 100.0) == doctest::Approx(0.5054).epsilon(1e-12));
  CHECK(recommended_sand_height(1.0, 10.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("mode estimation recovers a symmetric double Gaussian exactly") {
  // Density 0.5 N((a,a), I) + 0.5 N((-a,-a), I) with a = 3: marginal modes sit
  // at +-a up to the scan resolution (component overlap is ~1e-8 here).
  const double a = 3.0;
  auto u = [a](double x, double y) {
    const double d1 = (x - a) * (x - a) + (y - a) * (y - a);
    const double d2 = (x + a) * (x + a) + (y + a) * (y + a);
    const double m = std::min(d1, d2);
    return 0.5 * m - std::log1p(std::exp(-0.5 * (std::max(d1, d2) - m)));
  };
  const auto placement = estimate_sand_centers(u, 1.0, {-6.0, 6.0}, {-6.0, 6.0});
  for (double mode : placement.marginal_modes_1) CHECK(std::fabs(std::fabs(mode) - a) < 2e-3);
  for (double mode : placement.marginal_modes_2) CHECK(std::fabs(std::fabs(mode) - a) < 2e-3);
  // Pairing keeps the two centers on the diagonal, not mixed across modes.
  for (const auto& c : placement.centers) CHECK(c[0] * c[1] > 0.0);
  CHECK(placement.well_distance == doctest::Approx(2.0 * a * std::sqrt(2.0)).epsilon(1e-3));
  // Barrier: U(0,0) - mean well depth = (a^2 + a^2)/2 - ln 2 up to overlap.
  CHECK(placement.barrier_height == doctest::Approx(a * a - std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("mode estimation on a generated posterior finds two separated wells") {
  const auto data = generate_gmm_data(100, 0.0, 2.0, 0.5, 42);
  GmmPosteriorTarget t(data);
  const auto placement = estimate_sand_centers(t);
  CHECK(placement.well_distance > 2.0);
  CHECK(placement.well_distance < 8.0);
  CHECK(placement.barrier_height > 0.1);
  CHECK(placement.barrier_height < 2.0);
  // The two centers are the label-swap images of one another, approximately:
  // (t1, t2) and (t1 + t2, -t2).
  const auto& c1 = placement.centers[0];
  const auto& c2 = placement.centers[1];
  CHECK(std::fabs(c1[0] + c1[1] - c2[0]) < 0.2);
  CHECK(std::fabs(c1[1] + c2[1]) < 0.2);

  // Sanding at the recommended height leaves no crossing barrier to speak of:
  // walking the straight segment between the wells never climbs more than
  // 0.05 above the higher well.
  GmmPosteriorTarget sanded(data);
  sanded.set_sand(placement.centers, recommended_sand_height(placement.barrier_height, sanded.beta()));
  const double u_end = std::max(sanded.u1(c1), sanded.u1(c2));
  double u_max = -kInf;
  for (int k = 0; k <= 200; ++k) {
    const double s = k / 200.0;
    const Vec<2> p{c1[0] + s * (c2[0] - c1[0]), c1[1] + s * (c2[1] - c1[1])};
    u_max = std::max(u_max, sanded.u1(p));
  }
  CHECK(u_max - u_end < 0.05);
}

TEST_CASE("mode estimation rejects unimodal targets") {
  auto u = [](double x, double y) { return 0.5 * (x * x + y * y); };
  CHECK_THROWS_WITH_AS(estimate_sand_centers(u, 1.0, {-4.0, 4.0}, {-4.0, 4.0}),
                       doctest::Contains("fewer than two marginal modes"), std::runtime_error);
}

TEST_CASE("smooth pair kernel force is bounded by one half") {
  SmoothPairTarget t(10);
  double max_f = 0.0;
  for (double r = -10.0; r <= 10.0; r += 1e-3)
    max_f = std::max(max_f, std::fabs(t.pair_force({r})[0]));
  CHECK(max_f <= 0.5 + 1e-12);
  CHECK(t.pair_force({1.0})[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t.pair_force({-1.0})[0] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("gradients match finite differences of their energies") {
  RngStream rng(77);

  SUBCASE("smooth pair kernel") {
    SmoothPairTarget t(10, 1.3, 1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double r = 6.0 * (rng.uniform01() - 0.5);
      check_grad(fd1([&](double y) { return t.pair_energy({y}); }, r), -t.pair_force({r})[0]);
      check_grad(fd1([&](double y) { return t.confinement_energy({y}); }, r),
                 -t.confinement_force({r})[0]);
    }
  }

  SUBCASE("log-gas surrogate, away from the kinks") {
    DysonTarget t(10, 0.01);
    int tested = 0;
    while (tested < 100) {
      const double r = 4.0 * (rng.uniform01() - 0.5);
      const double a = std::fabs(r);
      // The surrogate force jumps at r = 0 and switches branch at the cutoff;
      // stay a margin away so the difference quotient sees one branch.
      if (a < 1e-3 || std::fabs(a - 0.01) < 1e-3) continue;
      // Inside the cutoff use a step smaller than the distance to the kink.
      const double h = std::min(1e-5, 0.4 * std::fabs(a - 0.01));
      const double fd = (t.phi1(r + h) - t.phi1(r - h)) / (2.0 * h);
      check_grad(fd, t.phi1_grad(r));
      check_grad(fd, -t.pair_force({r})[0]);
      ++tested;
    }
  }

  SUBCASE("double well, away from the matching points") {
    DoubleWellTarget t(20.0, 1.0, 0.05);
    int tested = 0;
    while (tested < 100) {
      const double x = 5.0 * (rng.uniform01() - 0.5);
      if (std::fabs(std::fabs(x) - 1.0) < 1e-3) continue;
      check_grad(fd1([&](double y) { return t.potential_scalar(y); }, x), t.grad_scalar(x));
      const double h = std::min(1e-5 * std::max(1.0, std::fabs(x)),
                                0.4 * std::fabs(std::fabs(x) - 1.0));
      const double fd = (t.u1({x + h}) - t.u1({x - h})) / (2.0 * h);
      check_grad(fd, t.grad_u1({x})[0]);
      ++tested;
    }
  }

  SUBCASE("mixture posterior with sand") {
    const auto data = generate_gmm_data(25, 0.0, 2.0, 0.5, 5);
    GmmPosteriorTarget t(data);
    t.set_sand({Vec<2>{0.0, 2.0}, Vec<2>{2.0, -2.0}}, 0.6);
    for (int i = 0; i < 100; ++i) {
      const Vec<2> th{6.0 * (rng.uniform01() - 0.5), 8.0 * (rng.uniform01() - 0.5)};
      const Vec<2> g_pot = fd2([&](const Vec<2>& y) { return t.potential(y); }, th);
      const Vec<2> g_u1 = fd2([&](const Vec<2>& y) { return t.u1(y); }, th);
      const Vec<2> g_sand = fd2([&](const Vec<2>& y) { return t.sand_value(y); }, th);
      const Vec<2> g_prior = fd2([&](const Vec<2>& y) { return t.prior_nll(y); }, th);
      const int j = static_cast<int>(rng.below(static_cast<std::uint32_t>(t.n_data())));
      const Vec<2> g_datum = fd2([&](const Vec<2>& y) { return t.datum_nll(y, j); }, th);
      for (int k = 0; k < 2; ++k) {
        check_grad(g_pot[k], t.grad_potential(th)[k]);
        check_grad(g_pot[k], t.grad_total(th)[k]);
        check_grad(g_u1[k], t.grad_u1(th)[k]);
        check_grad(g_sand[k], t.sand_grad(th)[k]);
        check_grad(g_prior[k], t.prior_grad(th)[k]);
        check_grad(g_datum[k], t.datum_grad(th, j)[k]);
      }
    }
  }
}

TEST_CASE("generated mixture data is deterministic in the seed") {
  const auto a = generate_gmm_data(100, 0.0, 2.0, 0.5, 42);
  const auto b = generate_gmm_data(100, 0.0, 2.0, 0.5, 42);
  const auto c = generate_gmm_data(100, 0.0, 2.0, 0.5, 43);
  CHECK(a == b);
  CHECK(a != c);
  // Draws concentrate near the two component means 0 and 2.
  int near = 0;
  for (double y : a)
    if (std::fabs(y) < 3.0 * std::sqrt(0.5) || std::fabs(y - 2.0) < 3.0 * std::sqrt(0.5)) ++near;
  CHECK(near > 95);
}
