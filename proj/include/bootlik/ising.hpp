#pragma once

#include "bootlik/exec.hpp"
#include "bootlik/lattice.hpp"
#include "bootlik/model.hpp"
#include "bootlik/rng.hpp"
#include "bootlik/samplers.hpp"

namespace bootlik {
namespace ising {

/// Number of agreeing 4-neighbour pairs, each unordered pair counted once.
/// Maximum is 2*M*N - M - N.
int suff_stat(const Lattice& x);

int neighbour_pair_count(int rows, int cols);

/// Raster-scan Gibbs sampler from an iid random start; free (non-toroidal)
/// boundary, full conditional p(x=1 | nbrs) = exp(b n1) / (exp(b n0) + exp(b n1)).
Lattice gibbs_simulate(double beta, int rows, int cols, int cycles, RngStream& rng);

struct MpleResult {
  double beta = 0.0;
  bool at_boundary = false;
};

/// Maximum pseudo-likelihood estimate of beta over [0,3]. The objective is
/// concave; a maximum at an endpoint is returned clamped with the boundary
/// flag set.
MpleResult mple(const Lattice& x);

double pseudo_loglik(const Lattice& x, double beta);

Prior ising_prior();  // U(0,2)

ModelPlugin<Lattice> ising_plugin(int window = 5, int cycles = 200);

/// Bootstrap-likelihood posterior for beta: moving-block bootstrap plan with
/// the given square window, MPLE point estimates, U(0,2) prior.
WeightedSample ising_bcbl(const Lattice& observed, int k, int l, int window, const Prior& prior,
                          int m, RngStream& rng, Exec exec = Exec::Parallel);

/// Rejection ABC on |S(z) - S(y)| with a quantile tolerance.
WeightedSample ising_abc(const Lattice& observed, const Prior& prior, int budget,
                         double quantile, int cycles, RngStream& rng,
                         Exec exec = Exec::Parallel);

}  // namespace ising
}  // namespace bootlik
