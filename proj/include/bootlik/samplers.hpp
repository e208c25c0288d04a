#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bootlik/blik.hpp"
#include "bootlik/elik.hpp"
#include "bootlik/exec.hpp"
#include "bootlik/model.hpp"
#include "bootlik/rng.hpp"

namespace bootlik {

struct Prior {
  std::string label;
  int dim = 1;
  std::function<std::vector<double>(RngStream&)> sample;
  std::function<double(const std::vector<double>&)> log_density;  // optional
};

/// Importance-sampling output: M parameter draws with nonnegative weights.
/// Weights are stored relative to their maximum; log_norm keeps the
/// subtracted max log-weight.
struct WeightedSample {
  std::vector<std::vector<double>> draws;
  std::vector<double> weights;
  double log_norm = 0.0;

  std::size_t size() const { return draws.size(); }
  double ess() const;
  std::vector<double> component(std::size_t c) const;
};

enum class AbcDistance { Euclidean, StandardizedEuclidean };

/// Tolerance is either a fixed epsilon or an acceptance quantile of the
/// simulated distances; exactly one must be set.
template <class Dataset>
struct AbcConfig {
  std::function<std::vector<double>(const Dataset&)> summaries;
  AbcDistance distance = AbcDistance::Euclidean;
  std::optional<double> epsilon;
  std::optional<double> quantile;
  int budget = 10000;
};

namespace detail {

/// Distance computation + acceptance over a pool of simulated summaries.
/// Returns accepted indices in ascending order; throws when a fixed epsilon
/// accepts nothing.
std::vector<std::size_t> abc_accept(const std::vector<std::vector<double>>& pool,
                                    const std::vector<double>& observed, AbcDistance distance,
                                    std::optional<double> epsilon, std::optional<double> quantile,
                                    std::vector<double>* distances_out = nullptr);

}  // namespace detail

/// Rejection ABC: draw from the prior, simulate, keep draws whose summaries
/// land within tolerance of the observed ones. Accepted draws carry unit
/// weight.
template <class Dataset>
WeightedSample abc_reject(const Dataset& observed, const ModelPlugin<Dataset>& model,
                          const Prior& prior, const AbcConfig<Dataset>& cfg, RngStream& rng,
                          Exec exec = Exec::Parallel) {
  if (cfg.budget < 1) throw std::invalid_argument("abc_reject: budget must be >= 1");
  if (cfg.epsilon.has_value() == cfg.quantile.has_value()) {
    throw std::invalid_argument("abc_reject: exactly one of epsilon/quantile must be set");
  }
  if (!cfg.summaries) throw std::invalid_argument("abc_reject: summaries not set");

  const std::vector<double> obs_summary = cfg.summaries(observed);
  std::vector<std::vector<double>> thetas(static_cast<std::size_t>(cfg.budget));
  std::vector<std::vector<double>> pool(static_cast<std::size_t>(cfg.budget));

  detail::indexed_for(cfg.budget, exec, [&](int i) {
    RngStream ri = rng.child(static_cast<std::uint64_t>(i));
    RngStream draw = ri.child(0);
    RngStream sim = ri.child(1);
    thetas[static_cast<std::size_t>(i)] = prior.sample(draw);
    try {
      Dataset z = model.simulate(thetas[static_cast<std::size_t>(i)], observed, sim);
      pool[static_cast<std::size_t>(i)] = cfg.summaries(z);
    } catch (const std::exception&) {
      // failed simulation (e.g. an exploding path): infinitely distant
      pool[static_cast<std::size_t>(i)].clear();
    }
  });

  const auto accepted =
      detail::abc_accept(pool, obs_summary, cfg.distance, cfg.epsilon, cfg.quantile);

  WeightedSample ws;
  ws.draws.reserve(accepted.size());
  for (std::size_t idx : accepted) ws.draws.push_back(thetas[idx]);
  ws.weights.assign(accepted.size(), 1.0);
  return ws;
}

template <class Dataset>
WeightedSample abc_reject_serial(const Dataset& observed, const ModelPlugin<Dataset>& model,
                                 const Prior& prior, const AbcConfig<Dataset>& cfg,
                                 RngStream& rng) {
  return abc_reject(observed, model, prior, cfg, rng, Exec::Serial);
}

/// Prior draws weighted by empirical likelihood; hull violations weigh zero.
WeightedSample bcel_sample(const std::function<ELResult(const std::vector<double>&)>& el_at,
                           const Prior& prior, int m, RngStream& rng,
                           Exec exec = Exec::Parallel);

template <class Record>
WeightedSample bcel_sample(const std::vector<Record>& data, const Prior& prior,
                           const ConstraintSet<Record>& constraints, int m, RngStream& rng,
                           Exec exec = Exec::Parallel) {
  return bcel_sample(
      [&](const std::vector<double>& theta) { return el_eval(data, theta, constraints); },
      prior, m, rng, exec);
}

/// Prior draws weighted by the fitted bootstrap-likelihood curves; the joint
/// log-weight is the sum of the per-component curves, and any component
/// outside its curve support zeroes the draw.
WeightedSample bcbl_sample(const std::vector<BootLikCurve>& curves, const Prior& prior, int m,
                           RngStream& rng, Exec exec = Exec::Parallel);

WeightedSample bcbl_sample_serial(const std::vector<BootLikCurve>& curves, const Prior& prior,
                                  int m, RngStream& rng);

/// Multinomial resampling proportional to weights.
std::vector<std::vector<double>> importance_resample(const WeightedSample& ws, int n,
                                                     RngStream& rng);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  std::optional<double> mse;  // (mean - truth)^2, set when truth supplied
  std::size_t count = 0;
};

Summary posterior_summaries(const std::vector<double>& samples,
                            std::optional<double> truth = std::nullopt);

/// CSV round-trip: one row per draw, parameter columns then weight.
void write_weighted_csv(const WeightedSample& ws, const std::vector<std::string>& param_names,
                        const std::string& path);
WeightedSample read_weighted_csv(const std::string& path, std::vector<std::string>* names = nullptr);

/// Estimator plug-in backed by an inner rejection-ABC run (posterior mean of
/// the accepted draws); lets the bootstrap-likelihood construction run on
/// models without a tractable point estimator.
template <class Dataset>
EstimatorPlug<Dataset> make_abc_estimator(const ModelPlugin<Dataset>& model, const Prior& prior,
                                          const AbcConfig<Dataset>& cfg) {
  EstimatorPlug<Dataset> est;
  est.label = "abc-posterior-mean";
  est.fn = [model, prior, cfg](const Dataset& data, RngStream& rng)
      -> std::optional<std::vector<double>> {
    try {
      // serial: this runs inside already-parallel replicate loops
      WeightedSample ws = abc_reject(data, model, prior, cfg, rng, Exec::Serial);
      if (ws.draws.empty()) return std::nullopt;
      std::vector<double> mean(ws.draws.front().size(), 0.0);
      for (const auto& d : ws.draws) {
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += d[c];
      }
      for (auto& v : mean) v /= static_cast<double>(ws.draws.size());
      return mean;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  return est;
}

}  // namespace bootlik
