#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bootlik/lattice.hpp"
#include "bootlik/rng.hpp"

namespace bootlik {

enum class Scheme { IID, Pairs, Residual, Parametric, MovingBlock };

/// Bootstrap data-generating scheme selector. `window` applies to
/// MovingBlock only.
struct ResamplePlan {
  Scheme scheme = Scheme::IID;
  int window = 1;
};

std::string scheme_name(Scheme s);

/// One bootstrap dataset, tagged with its nesting level and the index of the
/// first-level parent it was drawn from (-1 for level 1).
template <class Dataset>
struct BootstrapPopulation {
  Dataset data;
  int level = 1;
  int parent = -1;
};

/// n draws with replacement, uniform over records. Pairs bootstrap is this
/// applied to (input, response) records.
template <class T>
BootstrapPopulation<std::vector<T>> resample_iid(const std::vector<T>& data, RngStream& rng) {
  if (data.empty()) throw std::invalid_argument("resample_iid: empty data");
  const std::size_t n = data.size();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(data[rng.uniform_int(n)]);
  }
  return {std::move(out), 1, -1};
}

/// Shuffle the innovations, then let the model-owned recursion rebuild a
/// synthetic series. Throws (with the offending time index) when the
/// reconstruction produces non-finite values.
BootstrapPopulation<std::vector<double>> resample_residual(
    const std::vector<double>& residuals,
    const std::function<std::vector<double>(const std::vector<double>&)>& rebuild,
    RngStream& rng);

/// Same-dimension lattice tiled by square blocks copied from uniformly
/// random window-sized positions of the source; edge tiles truncated.
Lattice resample_moving_block(const Lattice& lattice, int window, RngStream& rng);

}  // namespace bootlik
