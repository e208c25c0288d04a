#include "bootlik/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bootlik {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double quantile_sorted(const std::vector<double>& sorted, double p) {
  // R type-7: linear interpolation between order statistics
  const std::size_t n = sorted.size();
  const double h = (static_cast<double>(n) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

KernelDensity::KernelDensity(std::vector<double> samples_, double bandwidth_)
    : samples(std::move(samples_)), bandwidth(bandwidth_) {
  if (samples.empty()) throw std::invalid_argument("KernelDensity: empty sample set");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("KernelDensity: bandwidth must be positive");
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("KernelDensity: non-finite sample");
  }
}

double kde_eval(const KernelDensity& kd, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("kde_eval: non-finite evaluation point");
  const double s = kd.bandwidth;
  double acc = 0.0;
  for (double v : kd.samples) {
    const double u = (t - v) / s;
    acc += std::exp(-0.5 * u * u);
  }
  return acc * kInvSqrt2Pi / (static_cast<double>(kd.samples.size()) * s);
}

double silverman_bandwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("silverman_bandwidth: need at least two samples");

  double mean = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("silverman_bandwidth: non-finite sample");
    mean += v;
  }
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) {
    throw std::invalid_argument("silverman_bandwidth: zero spread (degenerate sample)");
  }
  const double bw = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return std::max(bw, 1e-9 * (1.0 + std::fabs(mean)));
}

Smoother smooth_fit(const std::vector<double>& x, const std::vector<double>& y,
                    double span, int degree) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("smooth_fit: x/y size mismatch");
  if (degree != 1 && degree != 2) throw std::invalid_argument("smooth_fit: degree must be 1 or 2");
  if (!(span > 0.0 && span <= 1.0)) throw std::invalid_argument("smooth_fit: span must be in (0,1]");
  if (n < static_cast<std::size_t>(degree) + 2) {
    throw std::invalid_argument("smooth_fit: need at least degree+2 points");
  }
  if (span * static_cast<double>(n) < static_cast<double>(degree) + 1.0) {
    throw std::invalid_argument("smooth_fit: span*count below degree+1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("smooth_fit: non-finite point");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  Smoother sm;
  sm.xs_.resize(n);
  sm.ys_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    sm.xs_[r] = x[order[r]];
    sm.ys_[r] = y[order[r]];
  }
  sm.span_ = span;
  sm.degree_ = degree;
  sm.window_ = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(span * static_cast<double>(n))),
      static_cast<std::size_t>(degree) + 1);
  sm.window_ = std::min(sm.window_, n);
  return sm;
}

double Smoother::eval(double x) const {
  const std::size_t n = xs_.size();
  if (n == 0) throw std::logic_error("Smoother: not fitted");
  if (x < xs_.front() || x > xs_.back()) {
    throw std::domain_error("Smoother: evaluation outside knot hull");
  }

  // nearest `window_` knots around x
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  std::size_t left = (lo > 0) ? lo - 1 : 0;
  std::size_t right = std::min(lo, n - 1);
  while (right - left + 1 < window_) {
    const bool can_left = left > 0;
    const bool can_right = right < n - 1;
    if (can_left && (!can_right || x - xs_[left - 1] <= xs_[right + 1] - x)) {
      --left;
    } else if (can_right) {
      ++right;
    } else {
      break;
    }
  }

  double dmax = std::max(x - xs_[left], xs_[right] - x);
  if (dmax <= 0.0) {
    // all neighbours coincide with x
    double acc = 0.0;
    for (std::size_t j = left; j <= right; ++j) acc += ys_[j];
    return acc / static_cast<double>(right - left + 1);
  }

  // weighted least squares in the centered basis (x_j - x); the intercept is
  // the fitted value
  const int p = degree_ + 1;
  double m[3][3] = {{0}};
  double b[3] = {0};
  for (std::size_t j = left; j <= right; ++j) {
    const double u = std::fabs(xs_[j] - x) / dmax;
    const double uc = 1.0 - u * u * u;
    const double w = uc * uc * uc;
    if (w <= 0.0) continue;
    const double d = xs_[j] - x;
    double basis[3] = {1.0, d, d * d};
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < p; ++c) m[r][c] += w * basis[r] * basis[c];
      b[r] += w * basis[r] * ys_[j];
    }
  }

  // solve via Gaussian elimination with partial pivoting; fall back to a
  // lower degree when the local design is singular
  for (int dim = p; dim >= 1; --dim) {
    double a[3][4];
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) a[r][c] = m[r][c];
      a[r][dim] = b[r];
    }
    bool ok = true;
    for (int col = 0; col < dim && ok; ++col) {
      int piv = col;
      for (int r = col + 1; r < dim; ++r) {
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
      }
      if (std::fabs(a[piv][col]) < 1e-12 * (1.0 + std::fabs(m[col][col]))) {
        ok = false;
        break;
      }
      if (piv != col) {
        for (int c = col; c <= dim; ++c) std::swap(a[piv][c], a[col][c]);
      }
      for (int r = col + 1; r < dim; ++r) {
        const double f = a[r][col] / a[col][col];
        for (int c = col; c <= dim; ++c) a[r][c] -= f * a[col][c];
      }
    }
    if (!ok) continue;
    double coef[3] = {0, 0, 0};
    for (int r = dim - 1; r >= 0; --r) {
      double acc = a[r][dim];
      for (int c = r + 1; c < dim; ++c) acc -= a[r][c] * coef[c];
      coef[r] = acc / a[r][r];
    }
    if (std::isfinite(coef[0])) return coef[0];
  }
  // all neighbours at one x: weighted mean
  double wsum = 0.0, acc = 0.0;
  for (std::size_t j = left; j <= right; ++j) {
    wsum += 1.0;
    acc += ys_[j];
  }
  return acc / wsum;
}

double bessel_i(int order, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("bessel_i: z must be nonnegative");
  const int d = order < 0 ? -order : order;
  if (z == 0.0) return d == 0 ? 1.0 : 0.0;

  // first term (z/2)^d / d! in logs to survive large orders
  const double half = 0.5 * z;
  double t0;
  if (d == 0) {
    t0 = 1.0;
  } else {
    const double logt0 = d * std::log(half) - std::lgamma(static_cast<double>(d) + 1.0);
    t0 = std::exp(logt0);
    if (t0 == 0.0) return 0.0;  // underflow: value below representable range
  }

  const double q = half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 4000; ++k) {
    term *= q / (static_cast<double>(k) * (static_cast<double>(k) + d));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return t0 * sum;
}

}  // namespace bootlik
