#include "bootlik/elik.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bootlik {

namespace {

// log with quadratic extension below eps: keeps the dual objective defined
// (and convex) when a trial lambda pushes some 1 + lambda'h_i nonpositive.
struct LogStar {
  double eps;
  double value(double z) const {
    if (z >= eps) return std::log(z);
    const double r = z / eps;
    return std::log(eps) - 1.5 + 2.0 * r - 0.5 * r * r;
  }
  double d1(double z) const {
    if (z >= eps) return 1.0 / z;
    return (2.0 - z / eps) / eps;
  }
  double d2(double z) const {
    if (z >= eps) return -1.0 / (z * z);
    return -1.0 / (eps * eps);
  }
};

// Cholesky solve of an SPD q x q system; returns false when not SPD.
bool chol_solve(std::vector<double>& a, std::vector<double>& b, int q) {
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * q + j];
      for (int k = 0; k < j; ++k) s -= a[i * q + k] * a[j * q + k];
      if (i == j) {
        if (s <= 0.0) return false;
        a[i * q + i] = std::sqrt(s);
      } else {
        a[i * q + j] = s / a[j * q + j];
      }
    }
  }
  for (int i = 0; i < q; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= a[i * q + k] * b[k];
    b[i] = s / a[i * q + i];
  }
  for (int i = q - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < q; ++k) s -= a[k * q + i] * b[k];
    b[i] = s / a[i * q + i];
  }
  return true;
}

}  // namespace

ELResult el_solve(const std::vector<std::vector<double>>& h_rows) {
  const int n = static_cast<int>(h_rows.size());
  if (n == 0) throw std::invalid_argument("el_solve: empty data");
  const int q = static_cast<int>(h_rows.front().size());
  if (q == 0) throw std::invalid_argument("el_solve: empty constraint rows");
  if (n < q + 1) throw std::invalid_argument("el_solve: need at least q+1 records");
  for (const auto& row : h_rows) {
    if (static_cast<int>(row.size()) != q) {
      throw std::invalid_argument("el_solve: ragged constraint rows");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("el_solve: non-finite constraint value");
    }
  }

  ELResult res;
  const double nn = static_cast<double>(n);

  // necessary hull condition per coordinate (exact for q = 1)
  double scale = 0.0;
  bool all_zero = true;
  for (int c = 0; c < q; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : h_rows) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
      scale = std::max(scale, std::fabs(row[c]));
    }
    const double tiny = 1e-12 * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
    const bool col_zero = std::fabs(lo) <= tiny && std::fabs(hi) <= tiny;
    all_zero = all_zero && col_zero;
    if (!col_zero && (lo >= 0.0 || hi <= 0.0)) {
      res.status = ElStatus::HullViolation;
      res.log_el = -std::numeric_limits<double>::infinity();
      return res;
    }
  }
  if (all_zero) {
    // constraints satisfied by uniform weights
    res.status = ElStatus::Converged;
    res.converged = true;
    res.weights.assign(static_cast<std::size_t>(n), 1.0 / nn);
    res.lambda.assign(static_cast<std::size_t>(q), 0.0);
    res.log_el = -nn * std::log(nn);
    return res;
  }

  const LogStar ls{1.0 / nn};
  std::vector<double> lambda(static_cast<std::size_t>(q), 0.0);
  std::vector<double> z(static_cast<std::size_t>(n));

  auto objective = [&](const std::vector<double>& lam) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      double zi = 1.0;
      for (int c = 0; c < q; ++c) zi += lam[c] * h_rows[i][c];
      f -= ls.value(zi);
    }
    return f;
  };

  double fcur = objective(lambda);
  bool converged = false;
  std::vector<double> grad(static_cast<std::size_t>(q));
  for (int iter = 0; iter < 100; ++iter) {
    for (int i = 0; i < n; ++i) {
      double zi = 1.0;
      for (int c = 0; c < q; ++c) zi += lambda[c] * h_rows[i][c];
      z[i] = zi;
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<double> hess(static_cast<std::size_t>(q) * q, 0.0);
    for (int i = 0; i < n; ++i) {
      const double g1 = ls.d1(z[i]);
      const double g2 = -ls.d2(z[i]);  // positive
      for (int c = 0; c < q; ++c) {
        grad[c] -= h_rows[i][c] * g1;
        for (int d = 0; d <= c; ++d) {
          hess[c * q + d] += h_rows[i][c] * h_rows[i][d] * g2;
        }
      }
    }
    for (int c = 0; c < q; ++c) {
      for (int d = c + 1; d < q; ++d) hess[c * q + d] = hess[d * q + c];
    }

    double gmax = 0.0;
    for (double gv : grad) gmax = std::max(gmax, std::fabs(gv));
    if (gmax < 1e-9 * std::max(1.0, scale)) {
      converged = true;
      break;
    }

    std::vector<double> step(grad);
    for (auto& s : step) s = -s;
    std::vector<double> hcopy(hess);
    if (!chol_solve(hcopy, step, q)) {
      // ridge retry
      double tr = 0.0;
      for (int c = 0; c < q; ++c) tr += hess[c * q + c];
      for (int c = 0; c < q; ++c) hess[c * q + c] += 1e-10 * (1.0 + tr);
      hcopy = hess;
      for (int c = 0; c < q; ++c) step[c] = -grad[c];
      if (!chol_solve(hcopy, step, q)) {
        res.status = ElStatus::FailedSolve;
        res.log_el = -std::numeric_limits<double>::infinity();
        return res;
      }
    }

    double slope = 0.0;
    for (int c = 0; c < q; ++c) slope += grad[c] * step[c];
    double t = 1.0;
    bool moved = false;
    std::vector<double> trial(static_cast<std::size_t>(q));
    for (int ls_it = 0; ls_it < 60; ++ls_it) {
      for (int c = 0; c < q; ++c) trial[c] = lambda[c] + t * step[c];
      const double ft = objective(trial);
      if (ft <= fcur + 1e-4 * t * slope) {
        lambda = trial;
        fcur = ft;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }

  for (int i = 0; i < n; ++i) {
    double zi = 1.0;
    for (int c = 0; c < q; ++c) zi += lambda[c] * h_rows[i][c];
    z[i] = zi;
  }

  if (!converged) {
    // diverging lambda means the dual is unbounded: 0 outside the hull
    double lnorm = 0.0;
    for (double lv : lambda) lnorm = std::max(lnorm, std::fabs(lv));
    res.status = (lnorm * scale > 1e4) ? ElStatus::HullViolation : ElStatus::FailedSolve;
    res.log_el = -std::numeric_limits<double>::infinity();
    res.lambda = lambda;
    return res;
  }

  double log_el = 0.0;
  bool interior = true;
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (z[i] <= 1e-300) {
      interior = false;
      break;
    }
    weights[i] = 1.0 / (nn * z[i]);
    log_el += std::log(weights[i]);
  }
  if (!interior) {
    res.status = ElStatus::HullViolation;
    res.log_el = -std::numeric_limits<double>::infinity();
    res.lambda = lambda;
    return res;
  }

  res.status = ElStatus::Converged;
  res.converged = true;
  res.log_el = log_el;
  res.weights = std::move(weights);
  res.lambda = std::move(lambda);
  return res;
}

}  // namespace bootlik
