#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "bootlik/numkit.hpp"
#include "bootlik/rng.hpp"
#include "test_util.hpp"

using namespace bootlik;
using testutil::normal_pdf;

TEST_CASE("kde_eval matches closed forms") {
  KernelDensity single({0.0}, 1.0);
  CHECK(kde_eval(single, 0.0) == doctest::Approx(0.3989422804).epsilon(1e-8));

  // identical samples collapse onto one kernel
  KernelDensity flat({0.0, 0.0, 0.0, 0.0}, 2.0);
  CHECK(kde_eval(flat, 2.0) == doctest::Approx(0.5 * normal_pdf(1.0)).epsilon(1e-10));

  // reflection symmetry of the Gaussian kernel
  KernelDensity pair({-1.0, 1.0}, 0.7);
  KernelDensity mirrored({1.0, -1.0}, 0.7);
  CHECK(kde_eval(pair, 0.3) == doctest::Approx(kde_eval(mirrored, -0.3)).epsilon(1e-15));
  CHECK(kde_eval(pair, 0.0) == doctest::Approx(kde_eval(mirrored, 0.0)).epsilon(1e-15));
}

TEST_CASE("kde_eval rejects non-finite input") {
  CHECK_THROWS_AS(KernelDensity({std::nan("")}, 1.0), std::invalid_argument);
  KernelDensity kd({0.0, 1.0}, 1.0);
  CHECK_THROWS_AS(kde_eval(kd, std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(KernelDensity({0.0, 1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("kde integrates to one") {
  RngStream rng(101);
  for (int rep = 0; rep < 3; ++rep) {
    RngStream r = rng.child(rep);
    std::vector<double> samples;
    for (int i = 0; i < 40; ++i) samples.push_back(r.next_normal() * (1.0 + rep));
    const double s = silverman_bandwidth(samples);
    KernelDensity kd(samples, s);

    double lo = samples[0], hi = samples[0];
    for (double v : samples) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lo -= 6.0 * s;
    hi += 6.0 * s;
    const int n = 4000;  // Simpson
    double acc = kde_eval(kd, lo) + kde_eval(kd, hi);
    for (int i = 1; i < n; ++i) {
      const double x = lo + (hi - lo) * i / n;
      acc += kde_eval(kd, x) * (i % 2 ? 4.0 : 2.0);
    }
    acc *= (hi - lo) / (3.0 * n);
    CHECK(std::fabs(acc - 1.0) < 1e-3);
  }
}

TEST_CASE("kde translation equivariance is exact on dyadic data") {
  RngStream rng(7);
  std::vector<double> samples, shifted;
  for (int i = 0; i < 25; ++i) {
    const double v = static_cast<double>(rng.uniform_int(64)) / 8.0;
    samples.push_back(v);
    shifted.push_back(v + 4.0);
  }
  KernelDensity a(samples, 0.5);
  KernelDensity b(shifted, 0.5);
  for (double t : {0.25, 1.5, 3.0}) {
    CHECK(kde_eval(a, t) == kde_eval(b, t + 4.0));
  }
}

TEST_CASE("silverman bandwidth on standard normal draws") {
  RngStream rng(42);
  std::vector<double> x;
  for (int i = 0; i < 1000; ++i) x.push_back(rng.next_normal());
  const double bw = silverman_bandwidth(x);
  CHECK(bw == doctest::Approx(0.9 * std::pow(1000.0, -0.2)).epsilon(0.09));
}

TEST_CASE("silverman bandwidth errors and equivariance") {
  CHECK_THROWS_AS(silverman_bandwidth({1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(silverman_bandwidth({2.0}), std::invalid_argument);

  RngStream rng(9);
  std::vector<double> x, x2;
  for (int i = 0; i < 200; ++i) {
    const double v = rng.next_normal() + 0.3;
    x.push_back(v);
    x2.push_back(2.0 * v);
  }
  CHECK(silverman_bandwidth(x2) == doctest::Approx(2.0 * silverman_bandwidth(x)).epsilon(1e-12));
}

TEST_CASE("smoother reproduces polynomials exactly") {
  std::vector<double> x, y1, y2;
  for (int i = 0; i < 30; ++i) {
    const double xi = -2.0 + i * 0.21;
    x.push_back(xi);
    y1.push_back(2.0 * xi + 1.0);
    y2.push_back(xi * xi);
  }
  const Smoother lin = smooth_fit(x, y1, 0.4, 1);
  const Smoother quad = smooth_fit(x, y2, 0.75, 2);
  for (double xe : {-1.7, -0.3, 0.0, 1.1, 2.9}) {
    CHECK(lin.eval(xe) == doctest::Approx(2.0 * xe + 1.0).epsilon(1e-8));
    CHECK(quad.eval(xe) == doctest::Approx(xe * xe).epsilon(1e-8));
  }
}

TEST_CASE("smoother recovers a noisy parabola") {
  RngStream rng(77);
  std::vector<double> x, y;
  for (int i = 0; i < 100; ++i) {
    const double xi = -1.0 + 2.0 * i / 99.0;
    x.push_back(xi);
    y.push_back(xi * xi + 0.01 * rng.next_normal());
  }
  const Smoother sm = smooth_fit(x, y, 0.75, 2);
  double max_err = 0.0;
  for (int i = 0; i < 101; ++i) {
    const double xe = -1.0 + 2.0 * i / 100.0;
    max_err = std::max(max_err, std::fabs(sm.eval(xe) - xe * xe));
  }
  CHECK(max_err < 0.05);
}

TEST_CASE("smoother input validation and support") {
  std::vector<double> x = {0.0, 1.0, 2.0};
  std::vector<double> y = {0.0, 1.0, 2.0};
  CHECK_THROWS_AS(smooth_fit(x, y, 0.75, 2), std::invalid_argument);  // too few points

  std::vector<double> x5 = {0, 1, 2, 3, 4}, y5 = {0, 1, 2, 3, 4};
  CHECK_THROWS_AS(smooth_fit(x5, y5, 0.2, 2), std::invalid_argument);  // span*count too small

  const Smoother sm = smooth_fit(x5, y5, 0.9, 1);
  CHECK_THROWS_AS(sm.eval(4.5), std::domain_error);
  CHECK_THROWS_AS(sm.eval(-0.5), std::domain_error);
}

TEST_CASE("bessel_i values") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i(0, 1.0) == doctest::Approx(1.2660658777520084).epsilon(1e-12));
  CHECK(bessel_i(-3, 2.5) == bessel_i(3, 2.5));

  // independent oracle: I_0(z) = (1/pi) integral_0^pi exp(z cos t) dt, Simpson
  for (double z : {0.5, 1.0, 3.0, 8.0}) {
    const int n = 20000;
    double acc = std::exp(z) + std::exp(-z);
    for (int i = 1; i < n; ++i) {
      const double t = 3.14159265358979323846 * i / n;
      acc += std::exp(z * std::cos(t)) * (i % 2 ? 4.0 : 2.0);
    }
    acc *= 3.14159265358979323846 / (3.0 * n) / 3.14159265358979323846;
    CHECK(bessel_i(0, z) == doctest::Approx(acc).epsilon(1e-11));
  }
}

TEST_CASE("bessel_i recurrence I_{d-1} - I_{d+1} = (2d/z) I_d") {
  for (double z = 0.1; z <= 20.0; z += 1.9) {
    for (int d = 1; d <= 10; ++d) {
      const double lhs = bessel_i(d - 1, z) - bessel_i(d + 1, z);
      const double rhs = 2.0 * d / z * bessel_i(d, z);
      const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-30});
      CHECK(std::fabs(lhs - rhs) / scale < 1e-9);
    }
  }
}

TEST_CASE("rng streams are deterministic and path-separated") {
  RngStream a(12345);
  RngStream b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // children derive from identity, not draw position
  RngStream c(99);
  RngStream child_before = c.child(4);
  for (int i = 0; i < 10; ++i) c.next_double();
  RngStream child_after = c.child(4);
  for (int i = 0; i < 20; ++i) CHECK(child_before.next_u64() == child_after.next_u64());

  // distinct paths do not collide on short sequences
  std::set<std::uint64_t> firsts;
  RngStream root(5);
  for (std::uint64_t p = 0; p < 200; ++p) {
    RngStream s = root.child(p);
    firsts.insert(s.next_u64());
  }
  CHECK(firsts.size() == 200);

  // nested path identity
  RngStream x1 = RngStream(7).child(3).child(9);
  RngStream x2 = RngStream(7).child(3).child(9);
  CHECK(x1.next_normal() == x2.next_normal());
  CHECK(RngStream(7).child(3).next_u64() != RngStream(7).child(9).next_u64());
}

TEST_CASE("rng draw sanity") {
  RngStream rng(2024);
  std::vector<double> normals;
  for (int i = 0; i < 20000; ++i) normals.push_back(rng.next_normal());
  CHECK(testutil::mean_of(normals) == doctest::Approx(0.0).epsilon(0.03));
  CHECK(testutil::sd_of(normals) == doctest::Approx(1.0).epsilon(0.03));

  double emean = 0.0;
  for (int i = 0; i < 20000; ++i) emean += rng.next_exponential(1.0);
  CHECK(emean / 20000.0 == doctest::Approx(1.0).epsilon(0.03));

  double pmean = 0.0;
  for (int i = 0; i < 20000; ++i) pmean += static_cast<double>(rng.next_poisson(40.0));
  CHECK(pmean / 20000.0 == doctest::Approx(40.0).epsilon(0.02));
}
