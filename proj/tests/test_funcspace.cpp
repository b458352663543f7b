#include <cmath>
#include <numbers>

#include "doctest.h"
#include "horolab/errors.hpp"
#include "horolab/funcspace.hpp"

using namespace horo;
constexpr double pi = std::numbers::pi;

TEST_CASE("fejer kernel") {
  CHECK(fejer_kernel(7, 0.0) == doctest::Approx(7.0).epsilon(1e-14));
  for (int L : {1, 3, 16}) {
    double mn = 1;
    for (int i = 0; i < 10000; ++i) mn = std::min(mn, fejer_kernel(L, i / 10000.0));
    CHECK(mn >= -1e-12);
    // trapezoid with 2L+1 nodes integrates the trig polynomial exactly
    double s = 0;
    for (int m = 0; m < 2 * L + 1; ++m) s += fejer_kernel(L, double(m) / (2 * L + 1));
    CHECK(s / (2 * L + 1) == doctest::Approx(1.0).epsilon(1e-13));
  }
  // closed form against the defining sum
  for (double k : {0.013, 0.25, 0.7777}) {
    int L = 9;
    double direct = 0;
    for (int j = -L; j <= L; ++j) direct += (1 - std::abs(j) / double(L)) * std::cos(2 * pi * j * k);
    CHECK(fejer_kernel(L, k) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK_THROWS_AS(fejer_kernel(0, 0.1), ParameterError);
}

TEST_CASE("height band") {
  auto f = make_height_band(1.5, 2.5, 0.25);
  double m = f.evaluator(make_point(0, 2.0, 0)) - f.evaluator(make_point(0, 1.0, 0));
  CHECK(m == doctest::Approx(1.0));
  CHECK(f.evaluator(make_point(0.1, 1.0, 0)) == doctest::Approx(f.evaluator(make_point(0.2, 1.1, 3))));
  CHECK_THROWS_AS(make_height_band(0.9, 2, 0.1), ParameterError);
  CHECK_THROWS_AS(make_height_band(2, 1.5, 0.1), ParameterError);
  CHECK_THROWS_AS(make_height_band(1.5, 2, -1), ParameterError);
  auto est = mc_mean(f, 1000000, 1);
  CHECK(std::fabs(est.mean) < 3 * est.stderr_);
}

TEST_CASE("height marginal normalisation") {
  // total mass of the truncated domain is pi/3 - 1/y_cap
  double one = height_marginal_mean([](double) { return 1.0; }, 50);
  CHECK(one == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lipschitz spot checks") {
  Stream rng(17);
  for (auto f : {make_height_band(1.2, 2.0, 0.3), make_angular_band(1.2, 2.0, 0.3, 2)}) {
    for (int i = 0; i < 2000; ++i) {
      auto x = haar_sample(rng, 4);
      // random nearby frame with det 1
      GroupElement e{1 + rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3), 0};
      e.d = (1 + e.b * e.c) / e.a;
      auto y = reduce(x.frame() * e);
      CHECK(std::fabs(f(x)) <= f.sup + 1e-12);
      CHECK(std::fabs(f(x) - f(y)) <= f.lip * distance(x, y) + 1e-12);
    }
  }
}

TEST_CASE("mc_mean") {
  auto c = mc_mean(constant_function(0.375), 5000, 1);
  CHECK(c.mean == 0.375);
  CHECK(c.stderr_ == 0);
  auto f = make_height_band(1.3, 2.0, 0.2);
  auto a = mc_mean(f, 20000, 5), b = mc_mean(f, 20000, 5, 50, Backend::serial);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK_THROWS_AS(mc_mean(f, 10, 1), ParameterError);
}

TEST_CASE("k_smooth") {
  auto inv = make_height_band(1.3, 2.0, 0.2);
  auto g = k_smooth(inv, 8, 34);
  Stream rng(2);
  for (int i = 0; i < 50; ++i) {
    auto x = haar_sample(rng);
    CHECK(g(x) == doctest::Approx(inv(x)).epsilon(1e-12).scale(1));
    CHECK(g.coefficients(x).size() == 17u);
  }
  TestFunction cosf;
  cosf.evaluator = [](const PointX& x) { return std::cos(x.theta); };
  cosf.lip = 2;
  cosf.sup = 1;
  for (int L : {2, 5}) {
    auto a = k_smooth(cosf, L, 4 * L + 2);
    auto c = a.coefficients(haar_sample(rng));
    for (int j = -L; j <= L; ++j) {
      if (std::abs(j) == 1) CHECK(std::abs(c[j + L]) > 0.1);
      else CHECK(std::abs(c[j + L]) < 1e-10);
    }
  }
  CHECK_THROWS_AS(k_smooth(cosf, 4, 10), ParameterError);
}

TEST_CASE("fejer error bound") {
  Stream rng(23);
  // one long check at L = 64 plus 20 random pairs
  auto f = make_angular_band(1.2, 2.0, 0.3, 1);
  auto a = k_smooth(f, 64, 4 * 64 + 2);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    auto x = haar_sample(rng, 3);
    worst = std::max(worst, std::fabs(a(x) - f(x)));
  }
  MESSAGE("L=64 worst " << worst << " bound " << a.error_bound);
  CHECK(worst <= a.error_bound);
  for (int trial = 0; trial < 20; ++trial) {
    double y0 = rng.uniform(1.05, 2), y1 = y0 + rng.uniform(0.1, 1), w = rng.uniform(0.05, 0.5);
    int weight = 1 + int(rng.uniform() * 4);
    int L = 2 + int(rng.uniform() * 40);
    auto ff = make_angular_band(y0, y1, w, weight);
    auto aa = k_smooth(ff, L, 4 * L + 2);
    double wmax = 0;
    for (int i = 0; i < 50; ++i) {
      auto x = haar_sample(rng, y1 + w + 1);
      wmax = std::max(wmax, std::fabs(aa(x) - ff(x)));
    }
    CHECK(wmax <= 1.1 * aa.error_bound);
  }
}

TEST_CASE("parseval contraction") {
  auto f = make_angular_band(1.1, 1.8, 0.3, 3);
  auto a = k_smooth(f, 6, 26);
  auto nf = mc_second_moment(f, 4096, 8);
  auto na = mc_second_moment(a.as_function(), 4096, 8);
  CHECK(na.mean <= nf.mean + 3 * nf.stderr_);
}
