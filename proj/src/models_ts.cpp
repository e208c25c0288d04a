#include "bootlik/models_ts.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bootlik/optim.hpp"

namespace bootlik {

// ---------------------------------------------------------------------------
// Normal
// ---------------------------------------------------------------------------

std::vector<double> simulate_normal(double mu, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_normal: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = mu + rng.next_normal();
  return out;
}

double estimate_normal(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("estimate_normal: empty sample");
  double s = 0.0;
  for (double v : sample) s += v;
  return s / static_cast<double>(sample.size());
}

ModelPlugin<std::vector<double>> normal_mean_plugin() {
  ModelPlugin<std::vector<double>> m;
  m.label = "normal";
  m.param_names = {"mu"};
  m.default_plan = {Scheme::IID, 1};
  m.estimator.label = "sample-mean";
  m.estimator.fn = [](const std::vector<double>& data, RngStream&)
      -> std::optional<std::vector<double>> {
    return std::vector<double>{estimate_normal(data)};
  };
  m.simulate = [](const std::vector<double>& theta, const std::vector<double>& proto,
                  RngStream& rng) {
    if (theta.size() != 1) throw std::invalid_argument("normal: theta must have one component");
    return simulate_normal(theta[0], static_cast<int>(proto.size()), rng);
  };
  m.resample = [m_sim = m.simulate](const std::vector<double>& src,
                                    const std::vector<double>& theta, const ResamplePlan& plan,
                                    RngStream& rng) -> std::vector<double> {
    switch (plan.scheme) {
      case Scheme::IID:
      case Scheme::Pairs:
        return resample_iid(src, rng).data;
      case Scheme::Parametric:
        return m_sim(theta, src, rng);
      case Scheme::Residual: {
        // residuals about the fitted mean; rebuild adds the mean back
        std::vector<double> resid(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) resid[i] = src[i] - theta.at(0);
        auto rebuilt = resample_residual(
            resid,
            [&](const std::vector<double>& e) {
              std::vector<double> out(e.size());
              for (std::size_t i = 0; i < e.size(); ++i) out[i] = theta.at(0) + e[i];
              return out;
            },
            rng);
        return rebuilt.data;
      }
      case Scheme::MovingBlock:
        throw std::invalid_argument("normal: moving-block plan applies to lattices");
    }
    throw std::logic_error("normal: unknown plan");
  };
  m.prior_sample = [](RngStream& rng) { return std::vector<double>{rng.uniform(-1.0, 1.0)}; };
  return m;
}

Prior normal_flat_prior(double center, double half_width) {
  if (!(half_width > 0.0)) throw std::invalid_argument("normal_flat_prior: width must be positive");
  Prior p;
  p.label = "flat";
  p.dim = 1;
  p.sample = [center, half_width](RngStream& rng) {
    return std::vector<double>{rng.uniform(center - half_width, center + half_width)};
  };
  return p;
}

// ---------------------------------------------------------------------------
// GARCH(1,1)
// ---------------------------------------------------------------------------

namespace {

constexpr int kGarchBurnIn = 200;

GarchParams garch_from_unconstrained(const std::vector<double>& x) {
  const double ea = std::exp(std::min(x[1], 40.0));
  const double eb = std::exp(std::min(x[2], 40.0));
  const double denom = 1.0 + ea + eb;
  GarchParams p;
  p.alpha0 = std::exp(x[0]);
  p.alpha1 = ea / denom;
  p.beta1 = eb / denom;
  return p;
}

double sample_sd(const std::vector<double>& y) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(y.size() - 1));
}

}  // namespace

std::vector<double> simulate_garch(const GarchParams& p, int t_len, RngStream& rng) {
  if (!p.valid()) throw std::invalid_argument("simulate_garch: invalid parameters");
  if (t_len < 1) throw std::invalid_argument("simulate_garch: length must be >= 1");

  const int total = t_len + kGarchBurnIn;
  double sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t_len));
  double y = 0.0;
  for (int t = 0; t < total; ++t) {
    if (t > 0) sigma2 = p.alpha0 + p.alpha1 * y * y + p.beta1 * sigma2;
    y = std::sqrt(sigma2) * rng.next_normal();
    if (t >= kGarchBurnIn) out.push_back(y);
  }
  return out;
}

std::vector<double> garch_rebuild(const GarchParams& p, const std::vector<double>& innovations) {
  if (!p.valid()) throw std::invalid_argument("garch_rebuild: invalid parameters");
  std::vector<double> y(innovations.size());
  double sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
  for (std::size_t t = 0; t < innovations.size(); ++t) {
    if (t > 0) sigma2 = p.alpha0 + p.alpha1 * y[t - 1] * y[t - 1] + p.beta1 * sigma2;
    y[t] = std::sqrt(sigma2) * innovations[t];
  }
  return y;
}

GarchFilter garch_filter(const GarchParams& p, const std::vector<double>& y) {
  if (!p.valid()) throw std::invalid_argument("garch_filter: invalid parameters");
  if (y.empty()) throw std::invalid_argument("garch_filter: empty series");
  GarchFilter f;
  f.sigma2.resize(y.size());
  f.residuals.resize(y.size());
  double sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
  double qll = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (t > 0) sigma2 = p.alpha0 + p.alpha1 * y[t - 1] * y[t - 1] + p.beta1 * sigma2;
    f.sigma2[t] = sigma2;
    f.residuals[t] = y[t] / std::sqrt(sigma2);
    qll += -0.5 * (std::log(sigma2) + y[t] * y[t] / sigma2);
  }
  f.quasi_loglik = qll;
  return f;
}

std::optional<GarchFit> qmle_garch(const std::vector<double>& y) {
  if (y.size() < 50) throw std::invalid_argument("qmle_garch: need at least 50 observations");
  const double sd = sample_sd(y);
  if (!(sd > 0.0)) return std::nullopt;  // degenerate series

  const double v = sd * sd;
  auto nll = [&](const std::vector<double>& x) {
    const GarchParams p = garch_from_unconstrained(x);
    if (!(p.alpha0 > 0.0) || !std::isfinite(p.alpha0)) {
      return std::numeric_limits<double>::infinity();
    }
    double sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
    double acc = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (t > 0) sigma2 = p.alpha0 + p.alpha1 * y[t - 1] * y[t - 1] + p.beta1 * sigma2;
      acc += std::log(sigma2) + y[t] * y[t] / sigma2;
    }
    return 0.5 * acc;
  };

  const double starts[][2] = {{0.10, 0.80}, {0.15, 0.50}, {0.30, 0.30}};
  MinimizeResult best;
  best.fval = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const double rest = 1.0 - s[0] - s[1];
    std::vector<double> x0 = {std::log(std::max(v * rest, 1e-8)), std::log(s[0] / rest),
                              std::log(s[1] / rest)};
    MinimizeResult r = minimize_bfgs(nll, x0, 200, 1e-7);
    if (r.converged && r.fval < best.fval) best = r;
  }
  if (!std::isfinite(best.fval)) return std::nullopt;
  for (double xi : best.x) {
    if (std::fabs(xi) > 30.0) return std::nullopt;  // ran to the boundary
  }

  GarchFit fit;
  fit.params = garch_from_unconstrained(best.x);
  if (!fit.params.valid()) return std::nullopt;
  fit.residuals = garch_filter(fit.params, y).residuals;
  return fit;
}

Prior garch_priors() {
  Prior p;
  p.label = "exp1-dirichlet111";
  p.dim = 3;
  p.sample = [](RngStream& rng) {
    const double a0 = rng.next_exponential(1.0);
    double u = rng.uniform(0.0, 1.0);
    double w = rng.uniform(0.0, 1.0);
    if (u > w) std::swap(u, w);
    // gaps of two sorted uniforms: flat Dirichlet(1,1,1)
    return std::vector<double>{a0, u, w - u};
  };
  return p;
}

ModelPlugin<std::vector<double>> garch_plugin() {
  ModelPlugin<std::vector<double>> m;
  m.label = "garch";
  m.param_names = {"alpha0", "alpha1", "beta1"};
  m.default_plan = {Scheme::Residual, 1};
  m.estimator.label = "qmle";
  m.estimator.fn = [](const std::vector<double>& data, RngStream&)
      -> std::optional<std::vector<double>> {
    auto fit = qmle_garch(data);
    if (!fit) return std::nullopt;
    return std::vector<double>{fit->params.alpha0, fit->params.alpha1, fit->params.beta1};
  };
  m.simulate = [](const std::vector<double>& theta, const std::vector<double>& proto,
                  RngStream& rng) {
    const GarchParams p{theta.at(0), theta.at(1), theta.at(2)};
    return simulate_garch(p, static_cast<int>(proto.size()), rng);
  };
  m.resample = [](const std::vector<double>& src, const std::vector<double>& theta,
                  const ResamplePlan& plan, RngStream& rng) -> std::vector<double> {
    switch (plan.scheme) {
      case Scheme::Residual: {
        const GarchParams p{theta.at(0), theta.at(1), theta.at(2)};
        const auto filt = garch_filter(p, src);
        return resample_residual(
                   filt.residuals, [&](const std::vector<double>& e) { return garch_rebuild(p, e); },
                   rng)
            .data;
      }
      case Scheme::IID:
      case Scheme::Pairs:
        return resample_iid(src, rng).data;
      case Scheme::Parametric: {
        const GarchParams p{theta.at(0), theta.at(1), theta.at(2)};
        return simulate_garch(p, static_cast<int>(src.size()), rng);
      }
      case Scheme::MovingBlock:
        throw std::invalid_argument("garch: moving-block plan applies to lattices");
    }
    throw std::logic_error("garch: unknown plan");
  };
  m.prior_sample = garch_priors().sample;
  return m;
}

std::vector<std::vector<double>> garch_score_rows(const std::vector<double>& y,
                                                  const GarchParams& p) {
  if (!p.valid()) throw std::invalid_argument("garch_score_rows: invalid parameters");
  if (y.empty()) throw std::invalid_argument("garch_score_rows: empty series");

  const double rest = 1.0 - p.alpha1 - p.beta1;
  double sigma2 = p.alpha0 / rest;
  // derivatives of the stationary start
  double d0 = 1.0 / rest;
  double d1 = p.alpha0 / (rest * rest);
  double d2 = p.alpha0 / (rest * rest);

  std::vector<std::vector<double>> rows;
  rows.reserve(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (t > 0) {
      const double yl2 = y[t - 1] * y[t - 1];
      const double s_prev = sigma2;
      const double nd0 = 1.0 + p.beta1 * d0;
      const double nd1 = yl2 + p.beta1 * d1;
      const double nd2 = s_prev + p.beta1 * d2;
      sigma2 = p.alpha0 + p.alpha1 * yl2 + p.beta1 * s_prev;
      d0 = nd0;
      d1 = nd1;
      d2 = nd2;
    }
    const double common = 0.5 * (y[t] * y[t] / sigma2 - 1.0) / sigma2;
    rows.push_back({common * d0, common * d1, common * d2});
  }
  return rows;
}

std::vector<double> garch_abc_summaries(const std::vector<double>& y) {
  if (y.size() < 3) throw std::invalid_argument("garch_abc_summaries: series too short");
  double mean2 = 0.0;
  for (double v : y) mean2 += v * v;
  mean2 /= static_cast<double>(y.size());

  auto acf_sq = [&](std::size_t lag) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      const double c = y[t] * y[t] - mean2;
      den += c * c;
      if (t + lag < y.size()) {
        num += c * (y[t + lag] * y[t + lag] - mean2);
      }
    }
    return den > 0.0 ? num / den : 0.0;
  };
  return {std::log(std::max(mean2, 1e-300)), acf_sq(1), acf_sq(2)};
}

// ---------------------------------------------------------------------------
// SDE
// ---------------------------------------------------------------------------

namespace {

constexpr double kSdeExplosion = 1e6;

double step_sde(const SdeParams& p, double x, double dt, double z) {
  return x + (2.0 - p.theta2 * x) * dt + std::pow(1.0 + x * x, p.theta1) * std::sqrt(dt) * z;
}

}  // namespace

SdePath simulate_sde(const SdeParams& p, int n, double dt, RngStream& rng) {
  if (!p.valid()) throw std::invalid_argument("simulate_sde: parameters outside [0,1]^2");
  if (n < 2) throw std::invalid_argument("simulate_sde: need at least 2 points");
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_sde: dt must be positive");

  SdePath path;
  path.dt = dt;
  path.values.resize(static_cast<std::size_t>(n));
  path.values[0] = 1.0;
  for (int k = 1; k < n; ++k) {
    const double x = step_sde(p, path.values[k - 1], dt, rng.next_normal());
    if (!(std::fabs(x) <= kSdeExplosion)) {
      throw std::runtime_error("simulate_sde: path explosion at step " + std::to_string(k));
    }
    path.values[static_cast<std::size_t>(k)] = x;
  }
  return path;
}

SdePath simulate_sde_driven(const SdeParams& p, int n, double dt,
                            const std::vector<double>& noise) {
  if (!p.valid()) throw std::invalid_argument("simulate_sde_driven: parameters outside [0,1]^2");
  if (n < 2) throw std::invalid_argument("simulate_sde_driven: need at least 2 points");
  if (static_cast<int>(noise.size()) < n - 1) {
    throw std::invalid_argument("simulate_sde_driven: need n-1 increments");
  }
  SdePath path;
  path.dt = dt;
  path.values.resize(static_cast<std::size_t>(n));
  path.values[0] = 1.0;
  for (int k = 1; k < n; ++k) {
    const double x = step_sde(p, path.values[k - 1], dt, noise[static_cast<std::size_t>(k - 1)]);
    if (!(std::fabs(x) <= kSdeExplosion)) {
      throw std::runtime_error("simulate_sde_driven: path explosion at step " + std::to_string(k));
    }
    path.values[static_cast<std::size_t>(k)] = x;
  }
  return path;
}

std::optional<SdeParams> qmle_sde(const SdePath& path) {
  const std::size_t n = path.values.size();
  if (n < 100) throw std::invalid_argument("qmle_sde: need at least 100 points");
  const double dt = path.dt;

  std::vector<double> l1p(n - 1), dx(n - 1), xs(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    xs[k] = path.values[k];
    l1p[k] = std::log1p(path.values[k] * path.values[k]);
    dx[k] = path.values[k + 1] - path.values[k];
  }

  auto nll = [&](const std::vector<double>& x) {
    const double t1 = logistic_to_box(x[0], 0.0, 1.0);
    const double t2 = logistic_to_box(x[1], 0.0, 1.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < l1p.size(); ++k) {
      const double resid = dx[k] - (2.0 - t2 * xs[k]) * dt;
      acc += t1 * l1p[k] + resid * resid * std::exp(-2.0 * t1 * l1p[k]) / (2.0 * dt);
    }
    return acc;
  };

  const double starts[][2] = {{0.5, 0.5}, {0.25, 0.25}};
  MinimizeResult best;
  best.fval = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    std::vector<double> x0 = {box_to_logistic(s[0], 0.0, 1.0), box_to_logistic(s[1], 0.0, 1.0)};
    MinimizeResult r = minimize_bfgs(nll, x0, 200, 1e-8);
    if (r.converged && r.fval < best.fval) best = r;
  }
  if (!std::isfinite(best.fval)) return std::nullopt;
  for (double xi : best.x) {
    if (std::fabs(xi) > 12.0) return std::nullopt;  // pinned at the box boundary
  }
  return SdeParams{logistic_to_box(best.x[0], 0.0, 1.0), logistic_to_box(best.x[1], 0.0, 1.0)};
}

std::vector<double> sde_abc_summaries(const SdePath& path) {
  const std::size_t n = path.values.size();
  if (n == 0) throw std::invalid_argument("sde_abc_summaries: empty path");
  double mean = 0.0;
  for (double v : path.values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0, mad = 0.0;
  for (double v : path.values) {
    var += (v - mean) * (v - mean);
    mad += std::fabs(v - mean);
  }
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  mad /= static_cast<double>(n);
  return {mean, var, mad};
}

Prior sde_prior() {
  Prior p;
  p.label = "uniform01x01";
  p.dim = 2;
  p.sample = [](RngStream& rng) {
    const double a = rng.uniform(0.0, 1.0);
    const double b = rng.uniform(0.0, 1.0);
    return std::vector<double>{a, b};
  };
  return p;
}

ModelPlugin<SdePath> sde_plugin() {
  ModelPlugin<SdePath> m;
  m.label = "sde";
  m.param_names = {"theta1", "theta2"};
  m.default_plan = {Scheme::Parametric, 1};
  m.estimator.label = "qmle";
  m.estimator.fn = [](const SdePath& data, RngStream&) -> std::optional<std::vector<double>> {
    auto fit = qmle_sde(data);
    if (!fit) return std::nullopt;
    return std::vector<double>{fit->theta1, fit->theta2};
  };
  m.simulate = [](const std::vector<double>& theta, const SdePath& proto, RngStream& rng) {
    const SdeParams p{theta.at(0), theta.at(1)};
    return simulate_sde(p, static_cast<int>(proto.values.size()), proto.dt, rng);
  };
  m.resample = [](const SdePath& src, const std::vector<double>& theta, const ResamplePlan& plan,
                  RngStream& rng) -> SdePath {
    if (plan.scheme != Scheme::Parametric) {
      throw std::invalid_argument("sde: only the parametric plan preserves path dynamics");
    }
    const SdeParams p{theta.at(0), theta.at(1)};
    return simulate_sde(p, static_cast<int>(src.values.size()), src.dt, rng);
  };
  m.prior_sample = sde_prior().sample;
  return m;
}

}  // namespace bootlik
