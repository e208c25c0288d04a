#pragma once

#include <functional>
#include <vector>

namespace bootlik {

struct MinimizeResult {
  std::vector<double> x;
  double fval = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Quasi-Newton (BFGS) minimizer with central-difference gradients and
/// Armijo backtracking. Non-finite objective values are treated as +inf by
/// the line search.
MinimizeResult minimize_bfgs(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, int max_iter = 200,
                             double grad_tol = 1e-6);

/// Golden-section maximizer for a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-9);

/// Map R -> (lo, hi) and back; used to run unconstrained optimizers over
/// box-constrained parameters.
double logistic_to_box(double x, double lo, double hi);
double box_to_logistic(double v, double lo, double hi);

}  // namespace bootlik
