#pragma once

#include <optional>
#include <vector>

#include "bootlik/model.hpp"
#include "bootlik/rng.hpp"
#include "bootlik/samplers.hpp"

namespace bootlik {

// ---------------------------------------------------------------------------
// Normal location model with unit variance
// ---------------------------------------------------------------------------

std::vector<double> simulate_normal(double mu, int n, RngStream& rng);
double estimate_normal(const std::vector<double>& sample);

ModelPlugin<std::vector<double>> normal_mean_plugin();

/// Uniform draw on [center-half_width, center+half_width]; effectively flat
/// over the bootstrap-curve support.
Prior normal_flat_prior(double center, double half_width = 1.0);

// ---------------------------------------------------------------------------
// GARCH(1,1)
// ---------------------------------------------------------------------------

struct GarchParams {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;

  bool valid() const {
    return alpha0 > 0.0 && alpha1 > 0.0 && beta1 > 0.0 && alpha1 + beta1 < 1.0;
  }
};

/// Simulates y_t = sigma_t eps_t with sigma_t^2 = a0 + a1 y_{t-1}^2 +
/// b1 sigma_{t-1}^2; stationary start, 200 burn-in steps discarded.
std::vector<double> simulate_garch(const GarchParams& p, int t_len, RngStream& rng);

/// Deterministic variance recursion driven by the given innovations; no
/// burn-in (rebuilding with a fit's own residuals reproduces its series).
std::vector<double> garch_rebuild(const GarchParams& p, const std::vector<double>& innovations);

struct GarchFilter {
  std::vector<double> sigma2;
  std::vector<double> residuals;  // y_t / sigma_t
  double quasi_loglik = 0.0;
};
GarchFilter garch_filter(const GarchParams& p, const std::vector<double>& y);

struct GarchFit {
  GarchParams params;
  std::vector<double> residuals;
};

/// Gaussian conditional quasi-maximum-likelihood in an unconstrained
/// reparameterization (log alpha0, logistic simplex for alpha1/beta1).
/// nullopt = FAILED_FIT (degenerate data or non-convergence).
std::optional<GarchFit> qmle_garch(const std::vector<double>& y);

/// alpha0 ~ Exp(1); (alpha1, beta1, rest) flat Dirichlet via two uniform
/// stick breaks.
Prior garch_priors();

ModelPlugin<std::vector<double>> garch_plugin();

/// Per-observation score of the Gaussian conditional quasi-log-likelihood in
/// (alpha0, alpha1, beta1); the empirical-likelihood constraint rows for the
/// GARCH sampler.
std::vector<std::vector<double>> garch_score_rows(const std::vector<double>& y,
                                                  const GarchParams& p);

/// Summary vector for GARCH rejection ABC: log variance and lag-1/2
/// autocorrelations of the squared series.
std::vector<double> garch_abc_summaries(const std::vector<double>& y);

// ---------------------------------------------------------------------------
// SDE dX = (2 - theta2 X) dt + (1 + X^2)^theta1 dW, X0 = 1, Euler-Maruyama
// ---------------------------------------------------------------------------

struct SdeParams {
  double theta1 = 0.0;
  double theta2 = 0.0;

  bool valid() const {
    return theta1 >= 0.0 && theta1 <= 1.0 && theta2 >= 0.0 && theta2 <= 1.0;
  }
};

struct SdePath {
  std::vector<double> values;  // values[0] = 1
  double dt = 0.1;
};

/// Path of n values (X0 included). Throws when |X| exceeds 1e6.
SdePath simulate_sde(const SdeParams& p, int n, double dt, RngStream& rng);

/// Same recursion driven by the provided standard-normal increments.
SdePath simulate_sde_driven(const SdeParams& p, int n, double dt,
                            const std::vector<double>& noise);

/// Bounded quasi-maximum-likelihood over [0,1]^2 on the Euler transition
/// densities. nullopt = FAILED_FIT (boundary or non-convergence).
std::optional<SdeParams> qmle_sde(const SdePath& path);

/// (mean, variance, mean absolute deviation about the mean).
std::vector<double> sde_abc_summaries(const SdePath& path);

Prior sde_prior();  // U(0,1)^2

ModelPlugin<SdePath> sde_plugin();

}  // namespace bootlik
