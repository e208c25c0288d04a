#include "bootlik/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bootlik {

namespace {

double safe_eval(const std::function<double(const std::vector<double>&)>& f,
                 const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     const std::vector<double>& x) {
  const std::size_t k = x.size();
  std::vector<double> g(k, 0.0);
  std::vector<double> xp = x;
  for (std::size_t i = 0; i < k; ++i) {
    const double h = 1e-6 * (1.0 + std::fabs(x[i]));
    xp[i] = x[i] + h;
    const double fp = safe_eval(f, xp);
    xp[i] = x[i] - h;
    const double fm = safe_eval(f, xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

MinimizeResult minimize_bfgs(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, int max_iter, double grad_tol) {
  const std::size_t k = x0.size();
  if (k == 0) throw std::invalid_argument("minimize_bfgs: empty start point");

  MinimizeResult res;
  res.x = std::move(x0);
  res.fval = safe_eval(f, res.x);
  if (!std::isfinite(res.fval)) {
    res.converged = false;
    return res;
  }

  // inverse Hessian approximation, identity start
  std::vector<double> hinv(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) hinv[i * k + i] = 1.0;

  std::vector<double> grad = numeric_gradient(f, res.x);

  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter + 1;

    double gmax = 0.0;
    for (double gi : grad) gmax = std::max(gmax, std::fabs(gi));
    if (gmax < grad_tol * (1.0 + std::fabs(res.fval))) {
      res.converged = true;
      return res;
    }

    // direction d = -Hinv * grad
    std::vector<double> d(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc -= hinv[i * k + j] * grad[j];
      d[i] = acc;
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < k; ++i) slope += d[i] * grad[i];
    if (!(slope < 0.0)) {
      // reset to steepest descent
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) hinv[i * k + j] = (i == j) ? 1.0 : 0.0;
        d[i] = -grad[i];
      }
      slope = 0.0;
      for (std::size_t i = 0; i < k; ++i) slope += d[i] * grad[i];
      if (!(slope < 0.0)) {
        res.converged = true;  // zero gradient
        return res;
      }
    }

    double step = 1.0;
    std::vector<double> xn(k);
    double fn = std::numeric_limits<double>::infinity();
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t i = 0; i < k; ++i) xn[i] = res.x[i] + step * d[i];
      fn = safe_eval(f, xn);
      if (fn <= res.fval + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // no descent step found; declare convergence if gradient is modest
      res.converged = gmax < 1e-3 * (1.0 + std::fabs(res.fval));
      return res;
    }

    std::vector<double> gn = numeric_gradient(f, xn);
    std::vector<double> s(k), y(k);
    double sy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      s[i] = xn[i] - res.x[i];
      y[i] = gn[i] - grad[i];
      sy += s[i] * y[i];
    }

    const double fprev = res.fval;
    res.x = xn;
    res.fval = fn;
    grad = std::move(gn);

    if (std::fabs(fprev - fn) < 1e-13 * (1.0 + std::fabs(fn))) {
      res.converged = true;
      return res;
    }

    if (sy > 1e-12) {
      // BFGS inverse update
      std::vector<double> hy(k, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) hy[i] += hinv[i * k + j] * y[j];
      }
      double yhy = 0.0;
      for (std::size_t i = 0; i < k; ++i) yhy += y[i] * hy[i];
      const double c1 = (sy + yhy) / (sy * sy);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          hinv[i * k + j] += c1 * s[i] * s[j] - (hy[i] * s[j] + s[i] * hy[j]) / sy;
        }
      }
    }
  }
  // iteration cap: report best point, flag by gradient size
  double gmax = 0.0;
  for (double gi : grad) gmax = std::max(gmax, std::fabs(gi));
  res.converged = gmax < 1e-3 * (1.0 + std::fabs(res.fval));
  return res;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(hi > lo)) throw std::invalid_argument("golden_max: empty interval");
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double logistic_to_box(double x, double lo, double hi) {
  double u;
  if (x >= 0.0) {
    const double z = std::exp(-x);
    u = 1.0 / (1.0 + z);
  } else {
    const double z = std::exp(x);
    u = z / (1.0 + z);
  }
  return lo + (hi - lo) * u;
}

double box_to_logistic(double v, double lo, double hi) {
  double u = (v - lo) / (hi - lo);
  u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
  return std::log(u / (1.0 - u));
}

}  // namespace bootlik
