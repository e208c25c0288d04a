#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bootlik/resample.hpp"
#include "bootlik/rng.hpp"

namespace bootlik {

/// Point estimator for one model family: dataset -> estimate per scalar
/// parameter component, or nullopt on failure (caller drops the replicate).
/// The stream argument is unused by closed-form and optimizer-based
/// estimators; randomized estimators (e.g. an inner ABC posterior mean) draw
/// from it.
template <class Dataset>
struct EstimatorPlug {
  std::string label;
  std::function<std::optional<std::vector<double>>(const Dataset&, RngStream&)> fn;
};

/// Contract bundling simulator, point estimator, prior sampler and bootstrap
/// plan for one model family.
template <class Dataset>
struct ModelPlugin {
  std::string label;
  std::vector<std::string> param_names;
  ResamplePlan default_plan;
  EstimatorPlug<Dataset> estimator;

  /// Fresh dataset at `theta`, shaped like `proto`.
  std::function<Dataset(const std::vector<double>& theta, const Dataset& proto, RngStream&)>
      simulate;

  /// One bootstrap replicate of `src` under `plan`. `theta` governs the
  /// parametric simulation / residual rebuild schemes and is ignored by the
  /// nonparametric ones.
  std::function<Dataset(const Dataset& src, const std::vector<double>& theta,
                        const ResamplePlan& plan, RngStream&)>
      resample;

  /// Default prior draw for the family.
  std::function<std::vector<double>(RngStream&)> prior_sample;
};

/// Parametric bootstrap: a fresh size-n dataset simulated at theta_hat.
template <class Dataset>
BootstrapPopulation<Dataset> resample_parametric(const ModelPlugin<Dataset>& model,
                                                 const std::vector<double>& theta_hat,
                                                 const Dataset& proto, RngStream& rng) {
  return {model.simulate(theta_hat, proto, rng), 1, -1};
}

}  // namespace bootlik
