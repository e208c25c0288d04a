#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bootlik/elik.hpp"
#include "bootlik/model.hpp"
#include "bootlik/rng.hpp"
#include "bootlik/samplers.hpp"

namespace bootlik {
namespace popgen {

/// Microsatellite repeat numbers for two demes: loci x (2 * genes_per_deme)
/// integer matrix, first half of each row deme 0, second half deme 1.
struct MicrosatDataset {
  int genes_per_deme = 20;
  std::vector<std::vector<int>> loci;

  int gene_count() const { return 2 * genes_per_deme; }
};

struct PopGenParams {
  double tau = 0.0;    // divergence time
  double theta = 0.0;  // 2x mutation rate

  bool valid() const { return tau > 0.0 && theta > 0.0; }
};

/// rho(theta) = theta / (1 + theta + sqrt(1 + 2 theta)), in [0,1).
double rho(double theta);

/// Log probability of repeat difference d for a same-deme gene pair:
/// rho^|d| / sqrt(1 + 2 theta).
double pair_loglik_same(int d, double theta);

/// Different-deme pair: exp(-tau theta)/sqrt(1+2 theta) *
/// sum_m rho^|m| I_{|d|-m}(tau theta), truncated at |m| <= m_max.
double pair_loglik_diff(int d, double tau, double theta, int m_max = 30);

/// Upper bound on the probability mass dropped by the truncation.
double pair_diff_tail_bound(double tau, double theta, int m_max);

/// Pooled within-locus pair-difference counts; pair terms depend only on
/// |d| and deme classification, so the composite likelihood reduces to two
/// histograms.
struct PairHistogram {
  std::vector<long long> same;  // index |d|
  std::vector<long long> diff;
};
PairHistogram pair_histogram(const MicrosatDataset& data);
PairHistogram pair_histogram_locus(const MicrosatDataset& data, std::size_t locus);
double composite_loglik_hist(const PairHistogram& hist, const PopGenParams& p, int m_max = 30);

/// Sum over loci of log prod_{i<j} l2(y_i, y_j | phi).
double composite_loglik(const MicrosatDataset& data, const PopGenParams& p, int m_max = 30);

/// Maximum composite likelihood estimate over [1e-3,5] x [0.1,50], bounded
/// quasi-Newton with multi-start. nullopt when every start fails.
std::optional<PopGenParams> mcle(const MicrosatDataset& data, int m_max = 30);

/// Simplified two-deme structured coalescent with stepwise mutation:
/// within-deme pairwise coalescence at unit rate until tau, one ancestral
/// pool afterwards; mutations +-1 at rate theta/2 per lineage. Repeat
/// numbers are relative to the ancestral allele.
MicrosatDataset simulate_popgen(const PopGenParams& p, int loci, int genes_per_deme,
                                RngStream& rng);

/// tau ~ U(0.05, 2), theta ~ log-uniform on [1, 30].
Prior popgen_prior();

ModelPlugin<MicrosatDataset> popgen_plugin(int m_max = 30);

/// Per-locus composite-score rows (numeric gradient of the locus pairwise
/// log-likelihood in (tau, theta)) for the empirical-likelihood sampler.
std::vector<std::vector<double>> popgen_el_rows(const MicrosatDataset& data,
                                                const PopGenParams& p, int m_max = 30);

/// CSV columns: locus, deme, gene_index, repeat_count.
void write_microsat_csv(const MicrosatDataset& data, const std::string& path);
MicrosatDataset read_microsat_csv(const std::string& path);

}  // namespace popgen
}  // namespace bootlik
