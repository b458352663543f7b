#pragma once
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "horolab/errors.hpp"

namespace horo::quad {

template <class T>
struct Result {
  T value{};
  double error = 0;
};

namespace detail {
// one Kronrod-15 panel with its embedded Gauss-7 estimate
template <class F>
auto gk15(F& f, double a, double b, double& err, double& l1) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  auto f0 = f(c);
  decltype(f0) k = f0 * wk[0], g = f0 * wg[0];
  l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    auto fp = f(c + h * x[i]), fm = f(c - h * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
  }
  err = std::abs(k - g) * std::fabs(h);
  l1 *= std::fabs(h);
  return k * h;
}

template <class F, class T>
void gk_bisect(F& f, double a, double b, double abs_tol, unsigned depth, T& value, double& error) {
  double err = 0, l1 = 0;
  T v = gk15(f, a, b, err, l1);
  // stop at the tolerance or at the rounding floor of the rule
  if (depth == 0 || err <= abs_tol || err <= 64 * std::numeric_limits<double>::epsilon() * l1 ||
      !(b - a > 1e-15 * (std::fabs(a) + std::fabs(b)))) {
    value += v;
    error += err;
    return;
  }
  double m = 0.5 * (a + b);
  gk_bisect(f, a, m, abs_tol / 2, depth - 1, value, error);
  gk_bisect(f, m, b, abs_tol / 2, depth - 1, value, error);
}
}  // namespace detail

// adaptive Gauss-Kronrod 7/15 by bisection; the error is the sum of |K15 - G7|
// over the final panels. Works for real and complex integrands.
template <class F>
auto gk(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 18) {
  using T = decltype(f(a));
  Result<T> r;
  if (a == b) return r;
  double l1 = 0, err0 = 0;
  T first = detail::gk15(f, a, b, err0, l1);
  if (err0 <= rel_tol * l1 || max_depth == 0) {
    r.value = first;
    r.error = err0;
    return r;
  }
  detail::gk_bisect(f, a, b, rel_tol * l1, max_depth, r.value, r.error);
  return r;
}

// same, against an absolute tolerance (for integrands whose relative accuracy degrades
// where they are small)
template <class F>
auto gk_abs(F&& f, double a, double b, double abs_tol, unsigned max_depth = 18) {
  using T = decltype(f(a));
  Result<T> r;
  if (a == b) return r;
  detail::gk_bisect(f, a, b, abs_tol, max_depth, r.value, r.error);
  return r;
}

// sum over consecutive breakpoints
template <class F>
auto gk_panels(F&& f, const std::vector<double>& pts, double rel_tol = 1e-12, unsigned max_depth = 18) {
  using T = decltype(f(pts.front()));
  Result<T> tot;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    auto r = gk(f, pts[i], pts[i + 1], rel_tol, max_depth);
    tot.value += r.value;
    tot.error += r.error;
  }
  return tot;
}

// integral over [a, +inf) through x = a + (1-u)/u
template <class F>
auto gk_right_tail(F&& f, double a, double rel_tol = 1e-12) {
  auto g = [&](double u) {
    double x = a + (1 - u) / u;
    auto v = f(x);
    return v * (1.0 / (u * u));
  };
  return gk(g, 0.0, 1.0, rel_tol);
}

// integral over (-inf, b]
template <class F>
auto gk_left_tail(F&& f, double b, double rel_tol = 1e-12) {
  auto g = [&](double u) {
    double x = b - (1 - u) / u;
    auto v = f(x);
    return v * (1.0 / (u * u));
  };
  return gk(g, 0.0, 1.0, rel_tol);
}

// integral over the real line with interior breakpoints (sorted)
template <class F>
auto gk_line(F&& f, std::vector<double> pts, double rel_tol = 1e-12) {
  auto tot = gk_panels(f, pts, rel_tol);
  auto l = gk_left_tail(f, pts.front(), rel_tol);
  auto r = gk_right_tail(f, pts.back(), rel_tol);
  tot.value += l.value + r.value;
  tot.error += l.error + r.error;
  return tot;
}

}  // namespace horo::quad
