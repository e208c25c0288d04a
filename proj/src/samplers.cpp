#include "bootlik/samplers.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bootlik {

double WeightedSample::ess() const {
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  if (s2 <= 0.0) return 0.0;
  return s * s / s2;
}

std::vector<double> WeightedSample::component(std::size_t c) const {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& d : draws) out.push_back(d.at(c));
  return out;
}

namespace detail {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<std::size_t> abc_accept(const std::vector<std::vector<double>>& pool,
                                    const std::vector<double>& observed, AbcDistance distance,
                                    std::optional<double> epsilon, std::optional<double> quantile,
                                    std::vector<double>* distances_out) {
  const std::size_t budget = pool.size();
  const std::size_t dim = observed.size();

  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < budget; ++i) {
    if (pool[i].size() == dim) valid.push_back(i);
  }
  if (valid.empty()) throw std::runtime_error("abc_reject: every simulation failed");

  std::vector<double> scale(dim, 1.0);
  if (distance == AbcDistance::StandardizedEuclidean) {
    std::vector<double> col(valid.size());
    for (std::size_t c = 0; c < dim; ++c) {
      for (std::size_t v = 0; v < valid.size(); ++v) col[v] = pool[valid[v]][c];
      const double med = median_of(col);
      for (auto& v : col) v = std::fabs(v - med);
      double mad = median_of(col);
      if (!(mad > 0.0)) mad = 1e-8 * (1.0 + std::fabs(med));
      scale[c] = mad;
    }
  }

  std::vector<double> dist(budget, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < budget; ++i) {
    if (pool[i].size() != dim) continue;
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double d = (pool[i][c] - observed[c]) / scale[c];
      acc += d * d;
    }
    dist[i] = std::sqrt(acc);
  }
  if (distances_out) *distances_out = dist;

  std::vector<std::size_t> accepted;
  if (epsilon) {
    for (std::size_t i = 0; i < budget; ++i) {
      if (dist[i] <= *epsilon) accepted.push_back(i);
    }
    if (accepted.empty()) {
      const double dmin = *std::min_element(dist.begin(), dist.end());
      std::ostringstream msg;
      msg << "abc_reject: no acceptances at epsilon=" << *epsilon
          << " within budget (min distance seen " << dmin << ")";
      throw std::runtime_error(msg.str());
    }
  } else {
    if (!(*quantile > 0.0 && *quantile <= 1.0)) {
      throw std::invalid_argument("abc_reject: quantile must be in (0,1]");
    }
    const std::size_t keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(*quantile * static_cast<double>(budget))));
    std::vector<std::size_t> order(budget);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return a < b;
    });
    accepted.assign(order.begin(), order.begin() + std::min(keep, budget));
    std::sort(accepted.begin(), accepted.end());
  }
  return accepted;
}

}  // namespace detail

namespace {

WeightedSample weights_from_logs(std::vector<std::vector<double>>&& draws,
                                 const std::vector<double>& logw, const char* all_zero_msg) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (double lw : logw) max_log = std::max(max_log, lw);
  if (!std::isfinite(max_log)) throw std::runtime_error(all_zero_msg);

  WeightedSample ws;
  ws.draws = std::move(draws);
  ws.log_norm = max_log;
  ws.weights.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    ws.weights[i] = std::isfinite(logw[i]) ? std::exp(logw[i] - max_log) : 0.0;
  }
  return ws;
}

}  // namespace

WeightedSample bcel_sample(const std::function<ELResult(const std::vector<double>&)>& el_at,
                           const Prior& prior, int m, RngStream& rng, Exec exec) {
  if (m < 1) throw std::invalid_argument("bcel_sample: M must be >= 1");
  std::vector<std::vector<double>> draws(static_cast<std::size_t>(m));
  std::vector<double> logw(static_cast<std::size_t>(m),
                           -std::numeric_limits<double>::infinity());

  detail::indexed_for(m, exec, [&](int i) {
    RngStream ri = rng.child(static_cast<std::uint64_t>(i));
    draws[static_cast<std::size_t>(i)] = prior.sample(ri);
    const ELResult r = el_at(draws[static_cast<std::size_t>(i)]);
    logw[static_cast<std::size_t>(i)] =
        (r.status == ElStatus::Converged) ? r.log_el
                                          : -std::numeric_limits<double>::infinity();
  });

  return weights_from_logs(std::move(draws), logw,
                           "bcel_sample: all weights zero (prior mass outside the data hull)");
}

WeightedSample bcbl_sample(const std::vector<BootLikCurve>& curves, const Prior& prior, int m,
                           RngStream& rng, Exec exec) {
  if (curves.empty()) throw std::invalid_argument("bcbl_sample: no curves");
  if (m < 1) throw std::invalid_argument("bcbl_sample: M must be >= 1");
  if (prior.dim != static_cast<int>(curves.size())) {
    throw std::invalid_argument("bcbl_sample: prior dimension does not match curve count");
  }

  std::vector<std::vector<double>> draws(static_cast<std::size_t>(m));
  std::vector<double> logw(static_cast<std::size_t>(m),
                           -std::numeric_limits<double>::infinity());

  detail::indexed_for(m, exec, [&](int i) {
    RngStream ri = rng.child(static_cast<std::uint64_t>(i));
    auto theta = prior.sample(ri);
    double lw = 0.0;
    bool inside = true;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const auto v = log_bl(curves[c], theta.at(c));
      if (!v) {
        inside = false;
        break;
      }
      lw += *v;
    }
    draws[static_cast<std::size_t>(i)] = std::move(theta);
    if (inside) logw[static_cast<std::size_t>(i)] = lw;
  });

  return weights_from_logs(
      std::move(draws), logw,
      "bcbl_sample: all weights zero (increase K or narrow the prior toward the curve support)");
}

WeightedSample bcbl_sample_serial(const std::vector<BootLikCurve>& curves, const Prior& prior,
                                  int m, RngStream& rng) {
  return bcbl_sample(curves, prior, m, rng, Exec::Serial);
}

std::vector<std::vector<double>> importance_resample(const WeightedSample& ws, int n,
                                                     RngStream& rng) {
  if (ws.draws.empty()) throw std::invalid_argument("importance_resample: empty sample");
  if (n < 1) throw std::invalid_argument("importance_resample: n must be >= 1");

  std::vector<double> cum(ws.weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < ws.weights.size(); ++i) {
    if (ws.weights[i] < 0.0) throw std::invalid_argument("importance_resample: negative weight");
    total += ws.weights[i];
    cum[i] = total;
  }
  if (!(total > 0.0)) throw std::invalid_argument("importance_resample: no positive weight");

  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(0.0, 1.0) * total;
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    out.push_back(ws.draws[std::min(idx, ws.draws.size() - 1)]);
  }
  return out;
}

Summary posterior_summaries(const std::vector<double>& samples, std::optional<double> truth) {
  if (samples.empty()) throw std::invalid_argument("posterior_summaries: empty sample");
  Summary s;
  s.count = samples.size();
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  s.mean = mean;

  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  s.sd = samples.size() > 1 ? std::sqrt(ss / static_cast<double>(samples.size() - 1)) : 0.0;

  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  auto quant = [&](double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.q025 = quant(0.025);
  s.q50 = quant(0.5);
  s.q975 = quant(0.975);
  if (truth) s.mse = (mean - *truth) * (mean - *truth);
  return s;
}

void write_weighted_csv(const WeightedSample& ws, const std::vector<std::string>& param_names,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_weighted_csv: cannot open " + path);
  for (std::size_t c = 0; c < param_names.size(); ++c) {
    out << param_names[c] << ',';
  }
  out << "weight\n";
  char buf[32];
  for (std::size_t i = 0; i < ws.draws.size(); ++i) {
    for (double v : ws.draws[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", ws.weights[i]);
    out << buf << '\n';
  }
}

WeightedSample read_weighted_csv(const std::string& path, std::vector<std::string>* names) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_weighted_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_weighted_csv: empty file " + path);

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header.back() != "weight") {
    throw std::runtime_error("read_weighted_csv: last column must be 'weight'");
  }
  if (names) names->assign(header.begin(), header.end() - 1);

  WeightedSample ws;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != header.size()) {
      throw std::runtime_error("read_weighted_csv: row width mismatch in " + path);
    }
    ws.weights.push_back(row.back());
    row.pop_back();
    ws.draws.push_back(std::move(row));
  }
  return ws;
}

}  // namespace bootlik
