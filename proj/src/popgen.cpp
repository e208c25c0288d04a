#include "bootlik/popgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bootlik/numkit.hpp"
#include "bootlik/optim.hpp"

namespace bootlik {
namespace popgen {

namespace {

constexpr double kTauLo = 1e-3, kTauHi = 5.0;
constexpr double kThetaLo = 0.1, kThetaHi = 50.0;

std::vector<double> bessel_table(double z, int kmax) {
  std::vector<double> t(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) t[static_cast<std::size_t>(k)] = bessel_i(k, z);
  return t;
}

void check_dataset(const MicrosatDataset& data) {
  if (data.genes_per_deme < 1) throw std::invalid_argument("popgen: genes_per_deme must be >= 1");
  if (data.loci.empty()) throw std::invalid_argument("popgen: no loci");
  for (const auto& row : data.loci) {
    if (static_cast<int>(row.size()) != data.gene_count()) {
      throw std::invalid_argument("popgen: unequal gene counts across loci");
    }
  }
}

}  // namespace

double rho(double theta) {
  if (!(theta >= 0.0)) throw std::invalid_argument("rho: theta must be nonnegative");
  if (theta == 0.0) return 0.0;
  return theta / (1.0 + theta + std::sqrt(1.0 + 2.0 * theta));
}

double pair_loglik_same(int d, double theta) {
  const double r = rho(theta);
  const int ad = d < 0 ? -d : d;
  const double base = -0.5 * std::log1p(2.0 * theta);
  if (ad == 0) return base;
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return ad * std::log(r) + base;
}

double pair_loglik_diff(int d, double tau, double theta, int m_max) {
  if (!(tau >= 0.0)) throw std::invalid_argument("pair_loglik_diff: tau must be nonnegative");
  if (m_max < 1) throw std::invalid_argument("pair_loglik_diff: m_max must be >= 1");
  const double r = rho(theta);
  const double z = tau * theta;
  const int ad = d < 0 ? -d : d;

  const auto bes = bessel_table(z, ad + m_max);
  double s = 0.0;
  for (int m = -m_max; m <= m_max; ++m) {
    const int order = ad - m < 0 ? m - ad : ad - m;
    const double rp = (m == 0) ? 1.0 : std::pow(r, m < 0 ? -m : m);
    s += rp * bes[static_cast<std::size_t>(order)];
  }
  if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
  return -z - 0.5 * std::log1p(2.0 * theta) + std::log(s);
}

double pair_diff_tail_bound(double tau, double theta, int m_max) {
  const double r = rho(theta);
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  const double z = tau * theta;
  // |I_k(z)| <= I_0(z); two geometric tails beyond m_max
  return std::exp(-z - 0.5 * std::log1p(2.0 * theta)) * 2.0 * std::pow(r, m_max + 1) /
         (1.0 - r) * bessel_i(0, z);
}

PairHistogram pair_histogram_locus(const MicrosatDataset& data, std::size_t locus) {
  check_dataset(data);
  const auto& row = data.loci.at(locus);
  const int g = data.genes_per_deme;
  PairHistogram h;
  auto bump = [](std::vector<long long>& v, int d) {
    const std::size_t ad = static_cast<std::size_t>(d < 0 ? -d : d);
    if (v.size() <= ad) v.resize(ad + 1, 0);
    ++v[ad];
  };
  const int n = data.gene_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = (i < g) == (j < g);
      bump(same ? h.same : h.diff, row[static_cast<std::size_t>(j)] - row[static_cast<std::size_t>(i)]);
    }
  }
  return h;
}

PairHistogram pair_histogram(const MicrosatDataset& data) {
  check_dataset(data);
  PairHistogram total;
  for (std::size_t k = 0; k < data.loci.size(); ++k) {
    PairHistogram h = pair_histogram_locus(data, k);
    if (total.same.size() < h.same.size()) total.same.resize(h.same.size(), 0);
    if (total.diff.size() < h.diff.size()) total.diff.resize(h.diff.size(), 0);
    for (std::size_t d = 0; d < h.same.size(); ++d) total.same[d] += h.same[d];
    for (std::size_t d = 0; d < h.diff.size(); ++d) total.diff[d] += h.diff[d];
  }
  return total;
}

double composite_loglik_hist(const PairHistogram& hist, const PopGenParams& p, int m_max) {
  if (!p.valid()) throw std::invalid_argument("composite_loglik: invalid parameters");
  const double r = rho(p.theta);
  const double log_r = r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity();
  const double base = -0.5 * std::log1p(2.0 * p.theta);

  double total = 0.0;
  for (std::size_t d = 0; d < hist.same.size(); ++d) {
    const long long c = hist.same[d];
    if (c == 0) continue;
    if (d == 0) {
      total += c * base;
    } else {
      if (r == 0.0) return -std::numeric_limits<double>::infinity();
      total += c * (static_cast<double>(d) * log_r + base);
    }
  }

  if (!hist.diff.empty()) {
    const double z = p.tau * p.theta;
    const int dmax = static_cast<int>(hist.diff.size()) - 1;
    const auto bes = bessel_table(z, dmax + m_max);
    std::vector<double> rpow(static_cast<std::size_t>(m_max) + 1);
    rpow[0] = 1.0;
    for (int m = 1; m <= m_max; ++m) rpow[static_cast<std::size_t>(m)] = rpow[m - 1] * r;

    for (int d = 0; d <= dmax; ++d) {
      const long long c = hist.diff[static_cast<std::size_t>(d)];
      if (c == 0) continue;
      double s = 0.0;
      for (int m = -m_max; m <= m_max; ++m) {
        const int order = d - m < 0 ? m - d : d - m;
        s += rpow[static_cast<std::size_t>(m < 0 ? -m : m)] * bes[static_cast<std::size_t>(order)];
      }
      if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
      total += c * (-z + base + std::log(s));
    }
  }
  return total;
}

double composite_loglik(const MicrosatDataset& data, const PopGenParams& p, int m_max) {
  return composite_loglik_hist(pair_histogram(data), p, m_max);
}

std::optional<PopGenParams> mcle(const MicrosatDataset& data, int m_max) {
  check_dataset(data);
  if (data.loci.size() < 10) throw std::invalid_argument("mcle: need at least 10 loci");
  const PairHistogram hist = pair_histogram(data);

  auto nll = [&](const std::vector<double>& x) {
    const PopGenParams p{logistic_to_box(x[0], kTauLo, kTauHi),
                         logistic_to_box(x[1], kThetaLo, kThetaHi)};
    return -composite_loglik_hist(hist, p, m_max);
  };

  // center + interior corners of the transformed box
  const double us[][2] = {{0.5, 0.5}, {0.1, 0.1}, {0.1, 0.9}, {0.9, 0.1}, {0.9, 0.9}};
  MinimizeResult best;
  best.fval = std::numeric_limits<double>::infinity();
  for (const auto& u : us) {
    std::vector<double> x0 = {std::log(u[0] / (1.0 - u[0])), std::log(u[1] / (1.0 - u[1]))};
    MinimizeResult r = minimize_bfgs(nll, x0, 200, 1e-7);
    if (r.converged && r.fval < best.fval) best = r;
  }
  if (!std::isfinite(best.fval)) return std::nullopt;
  return PopGenParams{logistic_to_box(best.x[0], kTauLo, kTauHi),
                      logistic_to_box(best.x[1], kThetaLo, kThetaHi)};
}

MicrosatDataset simulate_popgen(const PopGenParams& p, int loci, int genes_per_deme,
                                RngStream& rng) {
  if (!p.valid()) throw std::invalid_argument("simulate_popgen: invalid parameters");
  if (loci < 1 || genes_per_deme < 1) {
    throw std::invalid_argument("simulate_popgen: loci and genes_per_deme must be >= 1");
  }

  MicrosatDataset data;
  data.genes_per_deme = genes_per_deme;
  data.loci.assign(static_cast<std::size_t>(loci),
                   std::vector<int>(static_cast<std::size_t>(2 * genes_per_deme), 0));

  struct Lineage {
    std::vector<int> leaves;
    int deme = 0;
  };

  for (int locus = 0; locus < loci; ++locus) {
    RngStream lr = rng.child(static_cast<std::uint64_t>(locus));
    auto& values = data.loci[static_cast<std::size_t>(locus)];

    std::vector<Lineage> lin;
    lin.reserve(static_cast<std::size_t>(2 * genes_per_deme));
    for (int i = 0; i < 2 * genes_per_deme; ++i) {
      lin.push_back({{i}, i < genes_per_deme ? 0 : 1});
    }

    auto mutate_all = [&](double span) {
      if (span <= 0.0) return;
      for (auto& l : lin) {
        const std::uint64_t hits = lr.next_poisson(0.5 * p.theta * span);
        for (std::uint64_t h = 0; h < hits; ++h) {
          const int delta = lr.bernoulli(0.5) ? 1 : -1;
          for (int leaf : l.leaves) values[static_cast<std::size_t>(leaf)] += delta;
        }
      }
    };
    auto merge_pair = [&](std::size_t a, std::size_t b) {
      auto& la = lin[a].leaves;
      la.insert(la.end(), lin[b].leaves.begin(), lin[b].leaves.end());
      lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(b));
    };
    auto pick_pair_in = [&](int deme, bool any) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (any || lin[i].deme == deme) idx.push_back(i);
      }
      const std::size_t a = lr.uniform_int(idx.size());
      std::size_t b = lr.uniform_int(idx.size() - 1);
      if (b >= a) ++b;
      merge_pair(idx[std::min(a, b)], idx[std::max(a, b)]);
    };

    // isolated demes until tau
    double t = 0.0;
    while (t < p.tau) {
      double k0 = 0, k1 = 0;
      for (const auto& l : lin) (l.deme == 0 ? k0 : k1) += 1.0;
      const double rate = 0.5 * (k0 * (k0 - 1.0) + k1 * (k1 - 1.0));
      if (rate <= 0.0) {
        mutate_all(p.tau - t);
        t = p.tau;
        break;
      }
      const double wait = lr.next_exponential(rate);
      if (t + wait >= p.tau) {
        mutate_all(p.tau - t);
        t = p.tau;
        break;
      }
      mutate_all(wait);
      t += wait;
      const double r0 = 0.5 * k0 * (k0 - 1.0);
      pick_pair_in(lr.uniform(0.0, 1.0) * rate < r0 ? 0 : 1, false);
    }

    // single ancestral pool to the MRCA
    while (lin.size() > 1) {
      const double k = static_cast<double>(lin.size());
      const double wait = lr.next_exponential(0.5 * k * (k - 1.0));
      mutate_all(wait);
      pick_pair_in(0, true);
    }
  }
  return data;
}

Prior popgen_prior() {
  Prior p;
  p.label = "tau-uniform_theta-loguniform";
  p.dim = 2;
  p.sample = [](RngStream& rng) {
    const double tau = rng.uniform(0.05, 2.0);
    const double theta = std::exp(rng.uniform(0.0, std::log(30.0)));
    return std::vector<double>{tau, theta};
  };
  return p;
}

ModelPlugin<MicrosatDataset> popgen_plugin(int m_max) {
  ModelPlugin<MicrosatDataset> m;
  m.label = "popgen";
  m.param_names = {"tau", "theta"};
  m.default_plan = {Scheme::IID, 1};
  m.estimator.label = "mcle";
  m.estimator.fn = [m_max](const MicrosatDataset& data, RngStream&)
      -> std::optional<std::vector<double>> {
    auto fit = mcle(data, m_max);
    if (!fit) return std::nullopt;
    return std::vector<double>{fit->tau, fit->theta};
  };
  m.simulate = [](const std::vector<double>& theta, const MicrosatDataset& proto,
                  RngStream& rng) {
    const PopGenParams p{theta.at(0), theta.at(1)};
    return simulate_popgen(p, static_cast<int>(proto.loci.size()), proto.genes_per_deme, rng);
  };
  m.resample = [](const MicrosatDataset& src, const std::vector<double>& theta,
                  const ResamplePlan& plan, RngStream& rng) -> MicrosatDataset {
    switch (plan.scheme) {
      case Scheme::IID:
      case Scheme::Pairs: {
        // loci are the independent records; within-locus structure untouched
        MicrosatDataset out;
        out.genes_per_deme = src.genes_per_deme;
        out.loci = resample_iid(src.loci, rng).data;
        return out;
      }
      case Scheme::Parametric: {
        const PopGenParams p{theta.at(0), theta.at(1)};
        return simulate_popgen(p, static_cast<int>(src.loci.size()), src.genes_per_deme, rng);
      }
      default:
        throw std::invalid_argument("popgen: unsupported resampling plan");
    }
  };
  m.prior_sample = popgen_prior().sample;
  return m;
}

std::vector<std::vector<double>> popgen_el_rows(const MicrosatDataset& data,
                                                const PopGenParams& p, int m_max) {
  check_dataset(data);
  if (!p.valid()) throw std::invalid_argument("popgen_el_rows: invalid parameters");

  std::vector<PairHistogram> hists;
  hists.reserve(data.loci.size());
  for (std::size_t k = 0; k < data.loci.size(); ++k) {
    hists.push_back(pair_histogram_locus(data, k));
  }

  const double ht = 1e-4 * (1.0 + p.tau);
  const double hh = 1e-4 * (1.0 + p.theta);
  std::vector<std::vector<double>> rows(data.loci.size(), std::vector<double>(2, 0.0));
  for (std::size_t k = 0; k < hists.size(); ++k) {
    const double ftp = composite_loglik_hist(hists[k], {p.tau + ht, p.theta}, m_max);
    const double ftm = composite_loglik_hist(hists[k], {p.tau - ht, p.theta}, m_max);
    const double fhp = composite_loglik_hist(hists[k], {p.tau, p.theta + hh}, m_max);
    const double fhm = composite_loglik_hist(hists[k], {p.tau, p.theta - hh}, m_max);
    rows[k][0] = (ftp - ftm) / (2.0 * ht);
    rows[k][1] = (fhp - fhm) / (2.0 * hh);
  }
  return rows;
}

void write_microsat_csv(const MicrosatDataset& data, const std::string& path) {
  check_dataset(data);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_microsat_csv: cannot open " + path);
  out << "locus,deme,gene_index,repeat_count\n";
  for (std::size_t k = 0; k < data.loci.size(); ++k) {
    for (int i = 0; i < data.gene_count(); ++i) {
      const int deme = i < data.genes_per_deme ? 0 : 1;
      const int gene = i % data.genes_per_deme;
      out << k << ',' << deme << ',' << gene << ','
          << data.loci[k][static_cast<std::size_t>(i)] << '\n';
    }
  }
}

MicrosatDataset read_microsat_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_microsat_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "locus,deme,gene_index,repeat_count") {
    throw std::runtime_error("read_microsat_csv: bad header in " + path);
  }
  struct Entry {
    int locus, deme, gene, value;
  };
  std::vector<Entry> entries;
  int max_locus = -1, max_gene = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<int> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stoi(cell));
    if (vals.size() != 4) throw std::runtime_error("read_microsat_csv: bad row '" + line + "'");
    if (vals[1] != 0 && vals[1] != 1) throw std::runtime_error("read_microsat_csv: deme must be 0/1");
    entries.push_back({vals[0], vals[1], vals[2], vals[3]});
    max_locus = std::max(max_locus, vals[0]);
    max_gene = std::max(max_gene, vals[2]);
  }
  if (entries.empty()) throw std::runtime_error("read_microsat_csv: no data rows");

  MicrosatDataset data;
  data.genes_per_deme = max_gene + 1;
  data.loci.assign(static_cast<std::size_t>(max_locus) + 1,
                   std::vector<int>(static_cast<std::size_t>(2 * (max_gene + 1)), 0));
  for (const auto& e : entries) {
    data.loci[static_cast<std::size_t>(e.locus)]
             [static_cast<std::size_t>(e.deme * data.genes_per_deme + e.gene)] = e.value;
  }
  check_dataset(data);
  return data;
}

}  // namespace popgen
}  // namespace bootlik
