#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bootlik {

enum class ElStatus { Converged, HullViolation, FailedSolve };

/// Result of one empirical-likelihood evaluation. log_el stores sum(log p_i),
/// so the unconstrained maximum is -n*log(n). A hull violation is a valid
/// outcome (weight zero downstream), not an error.
struct ELResult {
  double log_el = 0.0;
  std::vector<double> weights;
  std::vector<double> lambda;
  bool converged = false;
  ElStatus status = ElStatus::FailedSolve;
};

/// Moment constraints E[h(Y, theta)] = 0; h returns q components per record.
template <class Record>
struct ConstraintSet {
  int q = 1;
  std::function<std::vector<double>(const Record&, const std::vector<double>&)> h;
};

/// Dual Newton solver on precomputed constraint rows (n x q). This is the
/// computational core; el_eval is the record-level wrapper.
ELResult el_solve(const std::vector<std::vector<double>>& h_rows);

/// Maximize sum log(n p_i) over the simplex subject to sum p_i h(y_i; theta)
/// = 0, via the dual problem in lambda with the log-star barrier.
template <class Record>
ELResult el_eval(const std::vector<Record>& data, const std::vector<double>& theta,
                 const ConstraintSet<Record>& constraints) {
  std::vector<std::vector<double>> rows;
  rows.reserve(data.size());
  for (const auto& rec : data) rows.push_back(constraints.h(rec, theta));
  return el_solve(rows);
}

}  // namespace bootlik
