#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bootlik/exec.hpp"
#include "bootlik/model.hpp"
#include "bootlik/numkit.hpp"

namespace bootlik {

/// Fitted log bootstrap-likelihood curve for one scalar parameter component.
///
/// Raw points are the usable (theta*_i, l_i) pairs after dropping replicates
/// with failed estimation, zero-spread second-level estimates or zero
/// density at the observed estimate. The support interval is the hull of
/// the usable first-level estimates; evaluation outside it is signalled, not
/// extrapolated.
struct BootLikCurve {
  std::string parameter;
  std::vector<double> theta_points;
  std::vector<double> loglik_points;
  Smoother fit;
  double support_lo = 0.0;
  double support_hi = 0.0;
  int first_level = 0;
  int second_level = 0;
  double span = 0.75;
  int degree = 2;
  std::string bandwidth_policy = "silverman";
  int dropped_estimation = 0;
  int dropped_zero_spread = 0;
  int dropped_zero_density = 0;
};

struct CurveOptions {
  double span = 0.75;
  int degree = 2;
};

/// Log bootstrap likelihood at theta; nullopt signals OUT_OF_SUPPORT (the
/// caller maps it to weight zero).
std::optional<double> log_bl(const BootLikCurve& curve, double theta);

/// Location of the curve maximum (grid scan plus golden refinement).
double curve_argmax(const BootLikCurve& curve);

/// JSON round-trip; curves are prior-independent, so a saved file can be
/// reused across priors.
void save_curves_json(const std::vector<BootLikCurve>& curves, const std::string& path);
std::vector<BootLikCurve> load_curves_json(const std::string& path);

namespace detail {

struct CurvePoint {
  double theta = 0.0;
  std::optional<double> loglik;  // nullopt while pending / dropped
  int drop_zero_spread = 0;
  int drop_zero_density = 0;
};

std::vector<BootLikCurve> assemble_curves(
    const std::vector<std::string>& param_names,
    const std::vector<std::vector<CurvePoint>>& points_per_component,
    int usable_replicates, int dropped_estimation,
    const std::vector<std::string>& failure_causes, int k, int l,
    const CurveOptions& opt);

}  // namespace detail

/// Two-level bootstrap likelihood construction: K first-level replicates
/// give parameter points, L second-level replicates per point give a kernel
/// density whose value at the observed estimate is the log-likelihood
/// ordinate, and a local-polynomial smoother turns the points into a curve
/// (one per scalar component).
template <class Dataset>
std::vector<BootLikCurve> build_curve(const Dataset& data, const ModelPlugin<Dataset>& model,
                                      const EstimatorPlug<Dataset>& est, int k, int l,
                                      const ResamplePlan& plan, RngStream& rng,
                                      Exec exec = Exec::Parallel,
                                      const CurveOptions& opt = {}) {
  if (k < 10) throw std::invalid_argument("build_curve: first-level count K must be >= 10");
  if (l < 50) throw std::invalid_argument("build_curve: second-level count L must be >= 50");

  RngStream est_rng = rng.child(0);
  const auto theta_hat_opt = est.fn(data, est_rng);
  if (!theta_hat_opt) {
    throw std::runtime_error("build_curve: estimator '" + est.label +
                             "' failed on the original data");
  }
  const std::vector<double> theta_hat = *theta_hat_opt;
  const std::size_t dim = theta_hat.size();
  if (dim == 0 || dim != model.param_names.size()) {
    throw std::runtime_error("build_curve: estimate dimension does not match model parameters");
  }

  struct Replicate {
    bool ok = false;
    std::string cause;
    std::vector<double> theta_star;
    std::vector<std::vector<double>> second;  // per component
  };
  std::vector<Replicate> reps(static_cast<std::size_t>(k));
  RngStream rep_rng = rng.child(1);

  detail::indexed_for(k, exec, [&](int i) {
    Replicate& rep = reps[static_cast<std::size_t>(i)];
    RngStream ri = rep_rng.child(static_cast<std::uint64_t>(i));
    try {
      RngStream draw_rng = ri.child(0);
      Dataset level1 = model.resample(data, theta_hat, plan, draw_rng);
      RngStream e1 = ri.child(1);
      auto star = est.fn(level1, e1);
      if (!star || star->size() != dim) {
        rep.cause = "first-level estimation failed";
        return;
      }
      rep.theta_star = *star;
      rep.second.assign(dim, {});
      for (auto& v : rep.second) v.reserve(static_cast<std::size_t>(l));
      for (int j = 0; j < l; ++j) {
        RngStream dj = ri.child(static_cast<std::uint64_t>(2 + 2 * j));
        Dataset level2 = model.resample(level1, rep.theta_star, plan, dj);
        RngStream ej = ri.child(static_cast<std::uint64_t>(3 + 2 * j));
        auto star2 = est.fn(level2, ej);
        if (!star2 || star2->size() != dim) continue;  // failed fits dropped
        for (std::size_t c = 0; c < dim; ++c) rep.second[c].push_back((*star2)[c]);
      }
      rep.ok = true;
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.cause = e.what();
    }
  });

  int usable = 0;
  int dropped_estimation = 0;
  std::vector<std::string> causes;
  std::vector<std::vector<detail::CurvePoint>> pts(dim);
  for (const auto& rep : reps) {
    if (!rep.ok) {
      ++dropped_estimation;
      if (!rep.cause.empty() && causes.size() < 8) causes.push_back(rep.cause);
      continue;
    }
    ++usable;
    for (std::size_t c = 0; c < dim; ++c) {
      detail::CurvePoint pt;
      pt.theta = rep.theta_star[c];
      const auto& second = rep.second[c];
      if (second.size() < 2) {
        pt.drop_zero_spread = 1;
      } else {
        try {
          KernelDensity kd(second, silverman_bandwidth(second));
          const double dens = kde_eval(kd, theta_hat[c]);
          if (dens > 0.0) {
            pt.loglik = std::log(dens);
          } else {
            pt.drop_zero_density = 1;
          }
        } catch (const std::invalid_argument&) {
          pt.drop_zero_spread = 1;  // degenerate second-level spread
        }
      }
      pts[c].push_back(pt);
    }
  }

  return detail::assemble_curves(model.param_names, pts, usable, dropped_estimation, causes, k,
                                 l, opt);
}

/// Serial reference orchestration of build_curve; identical output.
template <class Dataset>
std::vector<BootLikCurve> build_curve_serial(const Dataset& data,
                                             const ModelPlugin<Dataset>& model,
                                             const EstimatorPlug<Dataset>& est, int k, int l,
                                             const ResamplePlan& plan, RngStream& rng,
                                             const CurveOptions& opt = {}) {
  return build_curve(data, model, est, k, l, plan, rng, Exec::Serial, opt);
}

}  // namespace bootlik
