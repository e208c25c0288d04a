#include "bootlik/resample.hpp"

namespace bootlik {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::IID: return "iid";
    case Scheme::Pairs: return "pairs";
    case Scheme::Residual: return "residual";
    case Scheme::Parametric: return "parametric";
    case Scheme::MovingBlock: return "moving-block";
  }
  return "?";
}

BootstrapPopulation<std::vector<double>> resample_residual(
    const std::vector<double>& residuals,
    const std::function<std::vector<double>(const std::vector<double>&)>& rebuild,
    RngStream& rng) {
  if (residuals.empty()) throw std::invalid_argument("resample_residual: empty residuals");
  auto shuffled = resample_iid(residuals, rng).data;
  auto series = rebuild(shuffled);
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!std::isfinite(series[t])) {
      throw std::runtime_error("resample_residual: reconstruction diverged at index " +
                               std::to_string(t));
    }
  }
  return {std::move(series), 1, -1};
}

Lattice resample_moving_block(const Lattice& src, int window, RngStream& rng) {
  if (window < 1) throw std::invalid_argument("resample_moving_block: window must be >= 1");
  if (window > src.rows || window > src.cols) {
    throw std::invalid_argument("resample_moving_block: window exceeds lattice dimension");
  }
  Lattice out(src.rows, src.cols);
  const int pos_rows = src.rows - window + 1;
  const int pos_cols = src.cols - window + 1;
  for (int bi = 0; bi < src.rows; bi += window) {
    for (int bj = 0; bj < src.cols; bj += window) {
      const int oi = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(pos_rows)));
      const int oj = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(pos_cols)));
      const int h = std::min(window, src.rows - bi);  // edge tiles truncated
      const int w = std::min(window, src.cols - bj);
      for (int di = 0; di < h; ++di) {
        for (int dj = 0; dj < w; ++dj) {
          out.at(bi + di, bj + dj) = src.at(oi + di, oj + dj);
        }
      }
    }
  }
  return out;
}

}  // namespace bootlik
