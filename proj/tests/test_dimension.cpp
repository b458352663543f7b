#include <cmath>
#include <numbers>

#include "doctest.h"
#include "horolab/dimension.hpp"
#include "horolab/errors.hpp"

using namespace horo;

namespace {
const auto squares = SamplingScheme::polynomial({0, 0, 1});
}

TEST_CASE("predicted bounds reproduce the printed constants") {
  // Selberg-Ramanujan, Kim-Sarnak (Re s1 = 1/2 - 7/64), gap-free with delta = 1/5
  CHECK(predicted_bound_exact(BoundMode::spectral, 2, Rational(1, 2)) == Rational(11, 4));
  CHECK(predicted_bound_exact(BoundMode::spectral, 2, Rational(1, 2) - Rational(7, 64)) == Rational(3) - Rational(25, 128));
  CHECK(predicted_bound_exact(BoundMode::gap_free, 2, Rational(1, 5)) == Rational(29, 10));
  CHECK(predicted_bound(BoundMode::spectral, 2, 0.5) == 2.75);
  CHECK(predicted_bound(BoundMode::spectral, 2, 25.0 / 64) == doctest::Approx(3 - 25.0 / 128).epsilon(1e-15));
  CHECK(predicted_bound(BoundMode::gap_free, 2, 0.2) == doctest::Approx(2.9).epsilon(1e-15));
}

TEST_CASE("predicted bound edge cases") {
  // d >= 3 saturates at the Selberg-Ramanujan value 3 - 1/(2d)
  CHECK(predicted_bound_exact(BoundMode::spectral, 3, Rational(25, 64)) == Rational(17, 6));
  CHECK(predicted_bound_exact(BoundMode::mixing, 1, Rational(1, 4)) == Rational(23, 8));
  // gap-free floor at 2
  CHECK(predicted_bound(BoundMode::gap_free, 1, 5.0) == 2.0);
  CHECK_THROWS_AS(predicted_bound(BoundMode::mixing, 2, 0.0), ParameterError);
  CHECK_THROWS_AS(predicted_bound(BoundMode::mixing, 0, 0.5), ParameterError);
  CHECK_THROWS_AS(predicted_bound_exact(BoundMode::gap_free, 2, Rational(-1, 5)), ParameterError);
  CHECK(parse_bound_mode("gap-free") == BoundMode::gap_free);
  CHECK_THROWS_AS(parse_bound_mode("mixed"), ParameterError);
  for (auto m : {BoundMode::mixing, BoundMode::spectral, BoundMode::gap_free}) CHECK(parse_bound_mode(to_string(m)) == m);
  // rational and double paths agree
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 20; ++k) {
      const Rational r(k, 16);
      for (auto m : {BoundMode::mixing, BoundMode::gap_free}) {
        const Rational e = predicted_bound_exact(m, d, r);
        CHECK(predicted_bound(m, d, boost::rational_cast<double>(r)) ==
              doctest::Approx(boost::rational_cast<double>(e)).epsilon(1e-15));
      }
    }
}

TEST_CASE("packing ratio") {
  CHECK(packing_ratio(2, 0, 0.5, 0) == 2.75);
  double worst = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        const double d = 1 + i % 4, g = 0.03 * j, a = 0.05 * k, e = 0.002 * (i + j + k);
        worst = std::max(worst, std::fabs(packing_ratio(d, g, a, e) - packing_ratio_difference_form(d, g, a, e)));
      }
  CHECK(worst < 1e-14);
  CHECK(packing_ratio(2, 0.1, 0.5, 0.01) == doctest::Approx(packing_ratio_difference_form(2, 0.1, 0.5, 0.01)).epsilon(1e-14));
  // limit form
  CHECK(std::fabs(packing_ratio(2, 1e-7, 0.4, 1e-7) - (3 - 0.4 / 2)) < 1e-6);
  // increasing in gamma
  double prev = packing_ratio(2, 0, 0.5, 0.01);
  for (int j = 1; j <= 50; ++j) {
    const double v = packing_ratio(2, 0.01 * j, 0.5, 0.01);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(packing_ratio(0.5, 0, 0.5, 0), ParameterError);
  CHECK_THROWS_AS(packing_ratio(2, -0.1, 0.5, 0), ParameterError);
}

TEST_CASE("good measure bound") {
  CHECK(good_measure_bound(100, 0.3, 0.3, 0) == 0);
  const double b = good_measure_bound(1e4, 0.05, 0.5, 0.01);
  CHECK(std::fabs(b - (1 - std::pow(10.0, -3.56))) < 1e-12);
  CHECK(1 - b == doctest::Approx(2.754e-4).epsilon(1e-3));
  CHECK(good_measure_bound(100, 0.6, 0.1, 0) == 0);
  CHECK_THROWS_AS(good_measure_bound(1, 0.1, 0.5, 0), ParameterError);
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.delta = 0.25;
  CHECK_NOTHROW(g.validate());
  CHECK(g.nx() == 4);
  CHECK(g.ny() == 4);
  CHECK(g.nth() == 26);
  const auto c = g.center(0);
  CHECK(c.z.real() == doctest::Approx(-0.375));
  CHECK(c.z.imag() == doctest::Approx(1.125));
  GridSpec bad = g;
  bad.y0 = 0.9;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = g;
  bad.x1 = bad.x0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = g;
  bad.y1 = 60;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = g;
  bad.delta = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  // a box off to the side may dip lower
  bad = g;
  bad.x0 = 0.4;
  bad.y0 = 0.95;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("box counting trivial cases") {
  GridSpec g;
  g.delta = 0.2;
  auto zero = box_count_bad(constant_function(0), 64, 0.1, g, squares);
  CHECK(zero.bad == 0);
  CHECK(zero.good == zero.total);
  CHECK(std::isnan(zero.empirical_ratio));
  auto f = make_height_band(1.2, 1.8, 0.2);
  auto all = box_count_bad(f, 64, 60, g, squares);
  CHECK(all.bad == all.total);
  CHECK(all.good + all.bad == all.total);
  CHECK(all.empirical_ratio == doctest::Approx(-std::log(double(all.total)) / std::log(0.2)));
  BoxOptions o;
  o.budget = 100;
  CHECK_THROWS_AS(box_count_bad(f, 64, 0.1, g, squares, o), ResourceError);
}

TEST_CASE("box counting determinism and probe modes") {
  GridSpec g;
  g.delta = 0.2;
  auto f = make_height_band(1.2, 1.8, 0.2);
  BoxOptions a, b;
  a.backend = Backend::serial;
  a.keep_cells = b.keep_cells = true;
  auto ra = box_count_bad(f, 64, 0.3, g, squares, a), rb = box_count_bad(f, 64, 0.3, g, squares, b);
  CHECK(ra.cell_good == rb.cell_good);
  a.probe = b.probe = CellProbe::three;
  a.seed = b.seed = 5;
  auto ta = box_count_bad(f, 64, 0.3, g, squares, a), tb = box_count_bad(f, 64, 0.3, g, squares, b);
  CHECK(ta.cell_good == tb.cell_good);
  // extra probes can only turn cells good
  CHECK(ta.good >= ra.good);
  for (std::size_t i = 0; i < ra.total; ++i)
    if (ra.cell_good[i]) CHECK(ta.cell_good[i]);
}

TEST_CASE("bad fraction against the fitted decay") {
  // Chebyshev: mu(|A_N f| > N^-g) <= N^{2g} ||A_N f||^2, with the norm from the decay fit
  auto f = make_height_band(1.3, 2.2, 0.2);
  const std::vector<std::size_t> Ns{16, 32, 64, 128, 256};
  auto fit = l2_decay_fit(f, squares, Ns, 2000, 7);
  const std::size_t N = 256;
  const double gamma = 0.05;
  GridSpec g;
  g.y0 = 1.0;
  g.y1 = 3.0;
  g.delta = 0.1;
  BoxOptions o;
  o.alpha2 = fit.alpha;
  auto e = box_count_bad(f, N, gamma, g, squares, o);
  const double norm = fit.norms.back() + 3 * fit.stderrs.back();
  // the grid only covers the y <= 3 part, of Haar mass 1 - 1/pi; rescale the bound
  const double mass = 1 - 3 / (std::numbers::pi * 3.0);
  const double bound = std::pow(double(N), 2 * gamma) * norm * norm / mass;
  MESSAGE("bad fraction " << e.bad_fraction << " +- " << e.fraction_stderr << ", bound " << bound << ", alpha "
                          << fit.alpha);
  CHECK(e.bad_fraction <= bound + 3 * e.fraction_stderr);
  CHECK(e.packing == doctest::Approx(packing_ratio(2, gamma, fit.alpha, 0)));
}

TEST_CASE("isolation") {
  Stream rng(11);
  const PointX x = make_point(0.1, 1.7, 0.4);
  auto z = isolation_probe(constant_function(0), x, 128, 0.05, 20, rng, squares);
  CHECK(z.fraction == 1.0);
  CHECK(z.max_probe_distance < z.radius);

  auto f = make_height_band(1.3, 2.2, 0.2);
  // pick a good base point
  PointX base;
  bool found = false;
  Stream pick(3);
  for (int i = 0; i < 2000 && !found; ++i) {
    base = haar_sample(pick);
    found = classify_good(f, base, 128, 0.05, squares);
  }
  REQUIRE(found);
  auto r = isolation_probe(f, base, 128, 0.05, 100, rng, squares);
  CHECK(r.probes == 100);
  CHECK(r.fraction == 1.0);
  CHECK(r.vacuous == (r.gamma_prime <= 0));
  CHECK(r.max_probe_distance < r.radius);
  CHECK(r.max_probe_average <= std::pow(128.0, -r.gamma_prime));

  // gamma' formula and the vacuous flag
  CHECK(isolation_gamma_prime(0.05, 128, 0) == 0.05);
  CHECK(isolation_gamma_prime(0.05, 128, 10) < 0);

  // x must be good
  PointX badx;
  bool have_bad = false;
  for (int i = 0; i < 2000 && !have_bad; ++i) {
    badx = haar_sample(pick);
    have_bad = !classify_good(f, badx, 128, 1.5, squares);
  }
  REQUIRE(have_bad);
  CHECK_THROWS_AS(isolation_probe(f, badx, 128, 1.5, 5, rng, squares), ParameterError);
}
