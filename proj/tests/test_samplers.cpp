#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <map>

#include "bootlik/models_ts.hpp"
#include "bootlik/samplers.hpp"
#include "test_util.hpp"

using namespace bootlik;

namespace {

AbcConfig<std::vector<double>> mean_abc(std::optional<double> eps, std::optional<double> q,
                                        int budget) {
  AbcConfig<std::vector<double>> cfg;
  cfg.summaries = [](const std::vector<double>& y) {
    return std::vector<double>{estimate_normal(y)};
  };
  cfg.epsilon = eps;
  cfg.quantile = q;
  cfg.budget = budget;
  return cfg;
}

}  // namespace

TEST_CASE("abc accept-all equals the prior draws") {
  RngStream drng(201);
  const auto data = simulate_normal(0.0, 30, drng);
  auto model = normal_mean_plugin();
  const Prior prior = normal_flat_prior(0.0, 1.0);

  const auto cfg = mean_abc(std::numeric_limits<double>::infinity(), std::nullopt, 500);
  RngStream rng(202);
  const auto ws = abc_reject(data, model, prior, cfg, rng);
  CHECK(ws.size() == 500);

  // the accepted set IS the prior draw sequence
  RngStream rng2(202);
  for (int i = 0; i < 500; ++i) {
    RngStream ri = rng2.child(i);
    RngStream draw = ri.child(0);
    CHECK(ws.draws[static_cast<std::size_t>(i)] == prior.sample(draw));
  }
}

TEST_CASE("abc with an echoing simulator accepts everything at epsilon zero") {
  RngStream drng(203);
  const auto data = simulate_normal(0.3, 25, drng);
  auto model = normal_mean_plugin();
  model.simulate = [&data](const std::vector<double>&, const std::vector<double>&, RngStream&) {
    return data;  // echoes the observed data
  };
  const Prior prior = normal_flat_prior(0.0, 1.0);
  const auto cfg = mean_abc(0.0, std::nullopt, 200);
  RngStream rng(204);
  const auto ws = abc_reject(data, model, prior, cfg, rng);
  CHECK(ws.size() == 200);
}

TEST_CASE("abc posterior mean matches the analytic posterior") {
  RngStream drng(205);
  const int n = 50;
  const auto data = simulate_normal(0.0, n, drng);
  const double ybar = estimate_normal(data);
  auto model = normal_mean_plugin();
  const Prior prior = normal_flat_prior(ybar, 1.0);

  const auto cfg = mean_abc(std::nullopt, 0.01, 20000);
  RngStream rng(206);
  const auto ws = abc_reject(data, model, prior, cfg, rng);
  CHECK(ws.size() == 200);

  double mean = 0.0;
  for (const auto& d : ws.draws) mean += d[0];
  mean /= static_cast<double>(ws.size());
  CHECK(std::fabs(mean - ybar) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("abc acceptance count is monotone in epsilon") {
  RngStream drng(207);
  const auto data = simulate_normal(0.0, 40, drng);
  auto model = normal_mean_plugin();
  const Prior prior = normal_flat_prior(0.0, 1.0);

  std::size_t prev = 0;
  for (double eps : {0.02, 0.05, 0.1, 0.3, 1.0}) {
    RngStream rng(208);  // same seed: a shared simulation cache
    const auto cfg = mean_abc(eps, std::nullopt, 2000);
    std::size_t count = 0;
    try {
      count = abc_reject(data, model, prior, cfg, rng).size();
    } catch (const std::runtime_error&) {
      count = 0;
    }
    CHECK(count >= prev);
    prev = count;
  }
}

TEST_CASE("abc reports the minimum distance when nothing is accepted") {
  RngStream drng(209);
  const auto data = simulate_normal(0.0, 30, drng);
  auto model = normal_mean_plugin();
  const Prior prior = normal_flat_prior(5.0, 0.5);  // far from the data

  const auto cfg = mean_abc(1e-6, std::nullopt, 100);
  RngStream rng(210);
  CHECK_THROWS_WITH_AS(abc_reject(data, model, prior, cfg, rng),
                       doctest::Contains("min distance"), std::runtime_error);
}

TEST_CASE("abc config validation") {
  RngStream drng(211);
  const auto data = simulate_normal(0.0, 20, drng);
  auto model = normal_mean_plugin();
  const Prior prior = normal_flat_prior(0.0, 1.0);
  RngStream rng(212);

  auto both = mean_abc(0.1, 0.01, 100);
  CHECK_THROWS_AS(abc_reject(data, model, prior, both, rng), std::invalid_argument);
  auto neither = mean_abc(std::nullopt, std::nullopt, 100);
  CHECK_THROWS_AS(abc_reject(data, model, prior, neither, rng), std::invalid_argument);
  auto zero_budget = mean_abc(0.1, std::nullopt, 0);
  CHECK_THROWS_AS(abc_reject(data, model, prior, zero_budget, rng), std::invalid_argument);
}

TEST_CASE("bcel weighted mean sits at the sample mean") {
  RngStream drng(213);
  const int n = 50;
  const auto data = simulate_normal(0.2, n, drng);
  const double ybar = estimate_normal(data);

  ConstraintSet<double> cs;
  cs.q = 1;
  cs.h = [](const double& y, const std::vector<double>& th) {
    return std::vector<double>{y - th[0]};
  };
  const Prior prior = normal_flat_prior(ybar, 0.8);

  RngStream rng(214);
  const auto ws = bcel_sample(data, prior, cs, 2000, rng);
  double wsum = 0.0, wmean = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    wsum += ws.weights[i];
    wmean += ws.weights[i] * ws.draws[i][0];
  }
  CHECK(std::fabs(wmean / wsum - ybar) < 3.0 * testutil::sd_of(data) / std::sqrt(n));
}

TEST_CASE("bcel single draw at the mean carries weight n^-n") {
  const std::vector<double> data = {0.0, 1.0, 0.5, 0.25, 0.75, 1.5, -0.5, 0.5};
  const double ybar = estimate_normal(data);
  ConstraintSet<double> cs;
  cs.q = 1;
  cs.h = [](const double& y, const std::vector<double>& th) {
    return std::vector<double>{y - th[0]};
  };
  Prior point;
  point.label = "point";
  point.dim = 1;
  point.sample = [ybar](RngStream&) { return std::vector<double>{ybar}; };

  RngStream rng(215);
  const auto ws = bcel_sample(data, point, cs, 1, rng);
  const double n = static_cast<double>(data.size());
  CHECK(ws.weights[0] == 1.0);
  CHECK(ws.log_norm == doctest::Approx(-n * std::log(n)).epsilon(1e-10));
}

TEST_CASE("bcel errors when the prior misses the data hull entirely") {
  const std::vector<double> data = {0.0, 1.0};
  ConstraintSet<double> cs;
  cs.q = 1;
  cs.h = [](const double& y, const std::vector<double>& th) {
    return std::vector<double>{y - th[0]};
  };
  const Prior prior = normal_flat_prior(5.0, 1.0);
  RngStream rng(216);
  CHECK_THROWS_AS(bcel_sample(data, prior, cs, 100, rng), std::runtime_error);
}

TEST_CASE("importance_resample oracles") {
  RngStream rng(217);

  // equal weights: marginally uniform
  WeightedSample ws;
  for (int i = 0; i < 10; ++i) ws.draws.push_back({static_cast<double>(i)});
  ws.weights.assign(10, 1.0);
  std::map<int, long> counts;
  const int n = 100000;
  RngStream r1(218);
  for (const auto& d : importance_resample(ws, n, r1)) ++counts[static_cast<int>(d[0])];
  const double sigma = std::sqrt(0.1 * 0.9 / n);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::fabs(counts[i] / static_cast<double>(n) - 0.1) < 3.0 * sigma + 1e-9);
  }

  // single positive weight: all copies of that draw
  WeightedSample one = ws;
  one.weights.assign(10, 0.0);
  one.weights[7] = 0.4;
  RngStream r2(219);
  for (const auto& d : importance_resample(one, 500, r2)) CHECK(d[0] == 7.0);

  // grid weights proportional to an analytic posterior reproduce its moments
  const double ybar = 0.37;
  const int grid_n = 4001;
  WeightedSample grid;
  for (int i = 0; i < grid_n; ++i) {
    const double x = ybar - 0.8 + 1.6 * i / (grid_n - 1);
    grid.draws.push_back({x});
    const double z = (x - ybar) / (1.0 / std::sqrt(50.0));
    grid.weights.push_back(std::exp(-0.5 * z * z));
  }
  RngStream r3(220);
  const auto post = importance_resample(grid, 50000, r3);
  std::vector<double> vals;
  for (const auto& d : post) vals.push_back(d[0]);
  const double post_sd = 1.0 / std::sqrt(50.0);
  CHECK(std::fabs(testutil::mean_of(vals) - ybar) < 3.0 * post_sd / std::sqrt(50000.0) + 1e-4);
  CHECK(testutil::sd_of(vals) == doctest::Approx(post_sd).epsilon(0.05));
}

TEST_CASE("importance_resample is invariant to binary weight rescaling") {
  WeightedSample a;
  RngStream setup(221);
  for (int i = 0; i < 50; ++i) {
    a.draws.push_back({setup.next_normal()});
    a.weights.push_back(setup.next_double());
  }
  WeightedSample b = a;
  for (auto& w : b.weights) w *= 4.0;  // exact scaling
  RngStream r1(222), r2(222);
  CHECK(importance_resample(a, 5000, r1) == importance_resample(b, 5000, r2));
}

TEST_CASE("posterior summaries") {
  const Summary c = posterior_summaries({2.0, 2.0, 2.0}, 1.5);
  CHECK(c.mean == 2.0);
  CHECK(c.sd == 0.0);
  CHECK(*c.mse == doctest::Approx(0.25));

  const Summary s = posterior_summaries({1.0, 2.0, 3.0}, 2.0);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(*s.mse == doctest::Approx(0.0));

  RngStream rng(223);
  std::vector<double> big;
  for (int i = 0; i < 100000; ++i) big.push_back(rng.next_normal());
  const Summary n = posterior_summaries(big);
  CHECK(std::fabs(n.q025 - (-1.96)) < 0.02);
  CHECK(std::fabs(n.q50) < 0.02);
  CHECK(std::fabs(n.q975 - 1.96) < 0.02);
  CHECK_FALSE(n.mse.has_value());
}

TEST_CASE("weighted sample ESS and component access") {
  WeightedSample ws;
  ws.draws = {{1.0, 10.0}, {2.0, 20.0}, {3.0, 30.0}};
  ws.weights = {1.0, 1.0, 1.0};
  CHECK(ws.ess() == doctest::Approx(3.0));
  CHECK(ws.component(1) == std::vector<double>{10.0, 20.0, 30.0});
  ws.weights = {1.0, 0.0, 0.0};
  CHECK(ws.ess() == doctest::Approx(1.0));
}

TEST_CASE("weighted samples round-trip through CSV") {
  WeightedSample ws;
  RngStream rng(224);
  for (int i = 0; i < 20; ++i) {
    ws.draws.push_back({rng.next_normal(), rng.next_exponential()});
    ws.weights.push_back(rng.next_double());
  }
  const std::string path = "ws_roundtrip_test.csv";
  write_weighted_csv(ws, {"a", "b"}, path);
  std::vector<std::string> names;
  const auto back = read_weighted_csv(path, &names);
  std::filesystem::remove(path);

  CHECK(names == std::vector<std::string>{"a", "b"});
  CHECK(back.draws == ws.draws);
  CHECK(back.weights == ws.weights);
}

TEST_CASE("samplers match their serial reference orchestrations") {
  RngStream drng(225);
  const auto data = simulate_normal(0.1, 40, drng);
  auto model = normal_mean_plugin();
  const Prior prior = normal_flat_prior(estimate_normal(data), 1.0);

  const auto cfg = mean_abc(std::nullopt, 0.05, 1000);
  RngStream a1(226), a2(226);
  const auto abc_par = abc_reject(data, model, prior, cfg, a1, Exec::Parallel);
  const auto abc_ser = abc_reject_serial(data, model, prior, cfg, a2);
  CHECK(abc_par.draws == abc_ser.draws);
  CHECK(abc_par.weights == abc_ser.weights);

  ConstraintSet<double> cs;
  cs.q = 1;
  cs.h = [](const double& y, const std::vector<double>& th) {
    return std::vector<double>{y - th[0]};
  };
  RngStream e1(227), e2(227);
  const auto el_par = bcel_sample(data, prior, cs, 500, e1, Exec::Parallel);
  const auto el_ser = bcel_sample(data, prior, cs, 500, e2, Exec::Serial);
  CHECK(el_par.draws == el_ser.draws);
  CHECK(el_par.weights == el_ser.weights);
  CHECK(el_par.log_norm == el_ser.log_norm);
}
