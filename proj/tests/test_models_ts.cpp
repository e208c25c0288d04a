#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bootlik/models_ts.hpp"
#include "test_util.hpp"

using namespace bootlik;

TEST_CASE("normal simulator and estimator") {
  CHECK(estimate_normal({5.0, 5.0, 5.0}) == 5.0);

  RngStream rng(301);
  double acc = 0.0;
  const int reps = 10000, n = 20;
  for (int r = 0; r < reps; ++r) {
    RngStream rr = rng.child(r);
    acc += estimate_normal(simulate_normal(0.0, n, rr));
  }
  CHECK(std::fabs(acc / reps) < 3.0 / std::sqrt(static_cast<double>(n) * reps));
}

TEST_CASE("garch stationary variance in the iid limit and at interior parameters") {
  RngStream rng(302);
  const auto iid = simulate_garch({0.2, 1e-9, 1e-9}, 100000, rng);
  double ss = 0.0;
  for (double v : iid) ss += v * v;
  CHECK(ss / iid.size() == doctest::Approx(0.2).epsilon(0.03));

  RngStream rng2(303);
  const auto series = simulate_garch({0.1, 0.15, 0.5}, 100000, rng2);
  double ss2 = 0.0;
  for (double v : series) ss2 += v * v;
  CHECK(ss2 / series.size() == doctest::Approx(0.1 / 0.35).epsilon(0.05));
}

TEST_CASE("garch rebuild: zero innovations, sign symmetry, exact reproduction") {
  const GarchParams p{0.1, 0.15, 0.5};

  const std::vector<double> zeros(200, 0.0);
  for (double v : garch_rebuild(p, zeros)) CHECK(v == 0.0);

  RngStream rng(304);
  std::vector<double> eps(300), neg(300);
  for (int i = 0; i < 300; ++i) {
    eps[i] = rng.next_normal();
    neg[i] = -eps[i];
  }
  const auto plus = garch_rebuild(p, eps);
  const auto minus = garch_rebuild(p, neg);
  for (std::size_t t = 0; t < plus.size(); ++t) CHECK(plus[t] == -minus[t]);

  // filtering a series and rebuilding from its own residuals reproduces it
  RngStream rng2(305);
  const auto series = simulate_garch(p, 400, rng2);
  const auto filt = garch_filter(p, series);
  const auto rebuilt = garch_rebuild(p, filt.residuals);
  for (std::size_t t = 0; t < series.size(); ++t) {
    CHECK(series[t] == doctest::Approx(rebuilt[t]).epsilon(1e-10));
  }
}

TEST_CASE("garch qmle consistency at a long horizon") {
  RngStream rng(306);
  const GarchParams truth{0.1, 0.15, 0.5};
  double a0 = 0.0, a1 = 0.0, b1 = 0.0;
  const int fits = 20;
  int ok = 0;
  for (int r = 0; r < fits; ++r) {
    RngStream rr = rng.child(r);
    const auto y = simulate_garch(truth, 3000, rr);
    const auto fit = qmle_garch(y);
    if (!fit) continue;
    ++ok;
    a0 += fit->params.alpha0;
    a1 += fit->params.alpha1;
    b1 += fit->params.beta1;
  }
  REQUIRE(ok >= 18);
  CHECK(std::fabs(a0 / ok - truth.alpha0) < 0.1);
  CHECK(std::fabs(a1 / ok - truth.alpha1) < 0.1);
  CHECK(std::fabs(b1 / ok - truth.beta1) < 0.1);
}

TEST_CASE("garch qmle residuals are standardized and degenerate input fails") {
  RngStream rng(307);
  const auto y = simulate_garch({0.1, 0.15, 0.5}, 1500, rng);
  const auto fit = qmle_garch(y);
  REQUIRE(fit.has_value());
  CHECK(std::fabs(testutil::mean_of(fit->residuals)) < 0.1);
  CHECK(std::fabs(testutil::sd_of(fit->residuals) - 1.0) < 0.1);

  const std::vector<double> constant(300, 1.3);
  CHECK_FALSE(qmle_garch(constant).has_value());
  CHECK_THROWS_AS(qmle_garch(std::vector<double>(10, 0.0)), std::invalid_argument);
}

TEST_CASE("garch qmle beats the truth on its own objective most of the time") {
  RngStream rng(308);
  const GarchParams truth{0.1, 0.15, 0.5};
  int wins = 0, used = 0;
  for (int r = 0; r < 50; ++r) {
    RngStream rr = rng.child(r);
    const auto y = simulate_garch(truth, 500, rr);
    const auto fit = qmle_garch(y);
    if (!fit) continue;
    ++used;
    if (garch_filter(fit->params, y).quasi_loglik >= garch_filter(truth, y).quasi_loglik) {
      ++wins;
    }
  }
  REQUIRE(used >= 45);
  CHECK(wins >= static_cast<int>(0.8 * used));
}

TEST_CASE("garch priors match their moments and support") {
  RngStream rng(309);
  const auto prior = garch_priors();
  double a0 = 0.0, a1 = 0.0, b1 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto th = prior.sample(rng);
    const GarchParams p{th[0], th[1], th[2]};
    CHECK(p.valid());
    a0 += th[0];
    a1 += th[1];
    b1 += th[2];
  }
  CHECK(a0 / n == doctest::Approx(1.0).epsilon(0.011));
  CHECK(a1 / n == doctest::Approx(1.0 / 3.0).epsilon(0.016));
  CHECK(std::fabs(a1 / n - b1 / n) < 0.005);
}

TEST_CASE("sde mean reversion matches the OU limit") {
  RngStream rng(310);
  const auto path = simulate_sde({0.0, 0.3}, 100000, 0.1, rng);
  CHECK(testutil::mean_of(path.values) == doctest::Approx(2.0 / 0.3).epsilon(0.05));
}

TEST_CASE("sde zero-noise path relaxes monotonically to the fixed point") {
  const std::vector<double> silence(399, 0.0);
  const auto path = simulate_sde_driven({0.35, 0.3}, 400, 0.1, silence);
  const double target = 2.0 / 0.3;
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    CHECK(path.values[k] >= path.values[k - 1] - 1e-12);
    CHECK(path.values[k] <= target + 1e-9);
  }
  CHECK(path.values.back() == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("sde step refinement converges with shared noise") {
  RngStream rng(311);
  const SdeParams p{0.2, 0.3};
  const double dt = 0.2;
  const int steps = 50;
  double err_coarse = 0.0, err_fine = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    RngStream rr = rng.child(r);
    std::vector<double> z4(4 * steps);
    for (auto& z : z4) z = rr.next_normal();
    // aggregate fine increments into coarser ones with matching variance
    std::vector<double> z2(2 * steps), z1(steps);
    for (int k = 0; k < 2 * steps; ++k) z2[k] = (z4[2 * k] + z4[2 * k + 1]) / std::sqrt(2.0);
    for (int k = 0; k < steps; ++k) z1[k] = (z2[2 * k] + z2[2 * k + 1]) / std::sqrt(2.0);

    const auto x1 = simulate_sde_driven(p, steps + 1, dt, z1);
    const auto x2 = simulate_sde_driven(p, 2 * steps + 1, dt / 2.0, z2);
    const auto x4 = simulate_sde_driven(p, 4 * steps + 1, dt / 4.0, z4);
    err_coarse += std::fabs(x1.values.back() - x2.values.back());
    err_fine += std::fabs(x2.values.back() - x4.values.back());
  }
  CHECK(err_fine < err_coarse);          // refinement shrinks the gap
  CHECK(err_fine / err_coarse < 0.95);   // and by a clear margin on average
}

TEST_CASE("sde qmle consistency and degenerate input") {
  RngStream rng(312);
  const SdeParams truth{0.2, 0.3};
  double t1 = 0.0, t2 = 0.0;
  int ok = 0;
  const int fits = 20;
  for (int r = 0; r < fits; ++r) {
    RngStream rr = rng.child(r);
    const auto path = simulate_sde(truth, 750, 0.1, rr);
    const auto fit = qmle_sde(path);
    if (!fit) continue;
    ++ok;
    t1 += fit->theta1;
    t2 += fit->theta2;
  }
  REQUIRE(ok >= 18);
  CHECK(std::fabs(t1 / ok - truth.theta1) < 0.05);
  CHECK(std::fabs(t2 / ok - truth.theta2) < 0.05);

  // zero noise drives theta1 to the boundary: FAILED_FIT
  const std::vector<double> silence(749, 0.0);
  const auto flat = simulate_sde_driven({0.5, 0.3}, 750, 0.1, silence);
  CHECK_FALSE(qmle_sde(flat).has_value());
  SdePath tiny{{1.0, 1.1, 1.2}, 0.1};
  CHECK_THROWS_AS(qmle_sde(tiny), std::invalid_argument);
}

TEST_CASE("sde likelihood at the truth dominates a far corner") {
  RngStream rng(313);
  const SdeParams truth{0.2, 0.3};
  const SdeParams far{0.9, 0.9};
  int wins = 0;
  const int reps = 20;

  auto loglik = [](const SdePath& path, const SdeParams& p) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < path.values.size(); ++k) {
      const double x = path.values[k];
      const double var = std::pow(1.0 + x * x, 2.0 * p.theta1) * path.dt;
      const double resid = path.values[k + 1] - x - (2.0 - p.theta2 * x) * path.dt;
      acc += -0.5 * (std::log(var) + resid * resid / var);
    }
    return acc;
  };

  for (int r = 0; r < reps; ++r) {
    RngStream rr = rng.child(r);
    const auto path = simulate_sde(truth, 400, 0.1, rr);
    if (loglik(path, truth) >= loglik(path, far)) ++wins;
  }
  CHECK(wins > reps / 2);
}

TEST_CASE("sde Euler step with theta1 = 0 is the linear OU update") {
  const std::vector<double> z = {0.7, -1.1, 0.3};
  const auto path = simulate_sde_driven({0.0, 0.4}, 4, 0.1, z);
  double x = 1.0;
  for (int k = 0; k < 3; ++k) {
    x = x + (2.0 - 0.4 * x) * 0.1 + std::sqrt(0.1) * z[static_cast<std::size_t>(k)];
    CHECK(path.values[static_cast<std::size_t>(k + 1)] == doctest::Approx(x).epsilon(1e-15));
  }
}

TEST_CASE("sde summaries") {
  SdePath constant{std::vector<double>(50, 3.0), 0.1};
  const auto s = sde_abc_summaries(constant);
  CHECK(s[0] == 3.0);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == 0.0);

  std::vector<double> alt(100);
  for (int i = 0; i < 100; ++i) alt[static_cast<std::size_t>(i)] = (i % 2) ? 1.0 : -1.0;
  const auto a = sde_abc_summaries({alt, 0.1});
  CHECK(a[0] == doctest::Approx(0.0));
  CHECK(a[2] == doctest::Approx(1.0));

  RngStream rng(314);
  const auto path = simulate_sde({0.0, 0.3}, 100000, 0.1, rng);
  CHECK(sde_abc_summaries(path)[0] == doctest::Approx(2.0 / 0.3).epsilon(0.05));
}

TEST_CASE("sde explosion is reported") {
  // theta2 = 0 removes mean reversion; theta1 = 1 lets the noise feed back
  RngStream rng(315);
  bool exploded = false;
  for (int r = 0; r < 200 && !exploded; ++r) {
    RngStream rr = rng.child(r);
    try {
      simulate_sde({1.0, 0.0}, 750, 0.1, rr);
    } catch (const std::runtime_error&) {
      exploded = true;
    }
  }
  CHECK(exploded);
}
