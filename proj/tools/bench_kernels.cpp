// Compares the OpenMP kernels against their serial reference orchestrations
// and reports wall-clock speedups. Results must match bit for bit; the
// benchmark aborts if they do not.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bootlik/blik.hpp"
#include "bootlik/ising.hpp"
#include "bootlik/models_ts.hpp"
#include "bootlik/samplers.hpp"

using namespace bootlik;

namespace {

double time_of(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s serial %8.3fs   omp %8.3fs   speedup %.2fx   %s\n", name, serial, parallel,
              serial / parallel, identical ? "identical" : "MISMATCH");
  if (!identical) std::abort();
}

bool same_curves(const std::vector<BootLikCurve>& a, const std::vector<BootLikCurve>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].theta_points != b[i].theta_points) return false;
    if (a[i].loglik_points != b[i].loglik_points) return false;
  }
  return true;
}

bool same_weights(const WeightedSample& a, const WeightedSample& b) {
  return a.draws == b.draws && a.weights == b.weights;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serial code\n");
#endif

  RngStream data_rng(7);
  const auto normal_data = simulate_normal(0.0, 50, data_rng);
  auto normal = normal_mean_plugin();

  {
    std::vector<BootLikCurve> cs, cp;
    RngStream r1(11), r2(11);
    const double ts = time_of([&] {
      cs = build_curve_serial(normal_data, normal, normal.estimator, 400, 400, normal.default_plan,
                              r1);
    });
    const double tp = time_of([&] {
      cp = build_curve(normal_data, normal, normal.estimator, 400, 400, normal.default_plan, r2);
    });
    report("build_curve (normal)", ts, tp, same_curves(cs, cp));

    const Prior prior = normal_flat_prior(estimate_normal(normal_data), 1.0);
    WeightedSample ws, wp;
    RngStream w1(13), w2(13);
    const double bs = time_of([&] { ws = bcbl_sample_serial(cs, prior, 200000, w1); });
    const double bp = time_of([&] { wp = bcbl_sample(cs, prior, 200000, w2); });
    report("bcbl_sample (normal)", bs, bp, same_weights(ws, wp));

    ConstraintSet<double> cset;
    cset.q = 1;
    cset.h = [](const double& y, const std::vector<double>& th) {
      return std::vector<double>{y - th[0]};
    };
    WeightedSample es, ep;
    RngStream e1(17), e2(17);
    const double els = time_of(
        [&] { es = bcel_sample(normal_data, prior, cset, 20000, e1, Exec::Serial); });
    const double elp = time_of(
        [&] { ep = bcel_sample(normal_data, prior, cset, 20000, e2, Exec::Parallel); });
    report("bcel_sample (normal)", els, elp, same_weights(es, ep));
  }

  {
    RngStream grng(23);
    const auto garch_data = simulate_garch({0.1, 0.15, 0.5}, 300, grng);
    auto garch = garch_plugin();
    std::vector<BootLikCurve> cs, cp;
    RngStream r1(29), r2(29);
    const double ts = time_of([&] {
      cs = build_curve_serial(garch_data, garch, garch.estimator, 20, 60, garch.default_plan, r1);
    });
    const double tp = time_of([&] {
      cp = build_curve(garch_data, garch, garch.estimator, 20, 60, garch.default_plan, r2);
    });
    report("build_curve (garch)", ts, tp, same_curves(cs, cp));
  }

  {
    RngStream irng(31);
    const auto lattice = ising::gibbs_simulate(0.5, 25, 25, 200, irng);
    const Prior prior = ising::ising_prior();
    WeightedSample as, ap;
    RngStream a1(37), a2(37);
    const double ts =
        time_of([&] { as = ising::ising_abc(lattice, prior, 2000, 0.01, 200, a1, Exec::Serial); });
    const double tp = time_of(
        [&] { ap = ising::ising_abc(lattice, prior, 2000, 0.01, 200, a2, Exec::Parallel); });
    report("abc_reject (ising)", ts, tp, same_weights(as, ap));
  }

  return 0;
}
