#pragma once

#include <exception>
#include <utility>
#include <vector>

namespace bootlik {

/// Kernel execution mode. Parallel runs replicate-level loops under OpenMP;
/// Serial is the plain-loop reference used by tests and the benchmark.
/// Results are identical by construction: every loop iteration owns a
/// derived RngStream and writes to its own slot.
enum class Exec { Parallel, Serial };

namespace detail {

template <class F>
void indexed_for(int n, Exec exec, F&& body) {
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(n));
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errs[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail
}  // namespace bootlik
