#pragma once

#include <cstddef>
#include <vector>

namespace bootlik {

/// Gaussian kernel density estimate over a fixed sample set.
struct KernelDensity {
  std::vector<double> samples;
  double bandwidth = 0.0;

  KernelDensity(std::vector<double> samples_, double bandwidth_);
};

/// Average of scaled Gaussian kernels at t; integrates to 1 over the line.
double kde_eval(const KernelDensity& kd, double t);

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5), floored at 1e-9*(1+|mean|).
/// Throws on fewer than two samples or zero spread.
double silverman_bandwidth(const std::vector<double>& samples);

/// Locally weighted polynomial scatterplot smoother (tricube weights over
/// the span-fraction nearest neighbours). Reproduces polynomials of the
/// fitted degree exactly.
class Smoother {
 public:
  Smoother() = default;

  double eval(double x) const;
  double min_x() const { return xs_.empty() ? 0.0 : xs_.front(); }
  double max_x() const { return xs_.empty() ? 0.0 : xs_.back(); }
  int degree() const { return degree_; }
  double span() const { return span_; }
  std::size_t size() const { return xs_.size(); }

  friend Smoother smooth_fit(const std::vector<double>& x,
                             const std::vector<double>& y, double span,
                             int degree);

 private:
  std::vector<double> xs_;  // sorted
  std::vector<double> ys_;
  double span_ = 0.75;
  int degree_ = 2;
  std::size_t window_ = 0;  // neighbour count per local fit
};

Smoother smooth_fit(const std::vector<double>& x, const std::vector<double>& y,
                    double span = 0.75, int degree = 2);

inline double smooth_eval(const Smoother& sm, double x) { return sm.eval(x); }

/// Modified Bessel function of the first kind, integer order, z >= 0.
/// Ascending power series with term-ratio stopping; negative orders map to
/// the absolute order.
double bessel_i(int order, double z);

}  // namespace bootlik
