#include "horolab/specfun.hpp"

#include <quadmath.h>

#include <cmath>
#include <map>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/quadrature.hpp"

namespace horo {

using f128 = __float128;

double check_spectral(double s) {
  if (!(s > 0 && s < 0.5)) throw ParameterError("spectral parameter must lie in (0, 1/2)");
  return s;
}

namespace {

// I_nu(x) for real nu (nu + 1 not a non-positive integer), power series in quad precision
f128 bessel_i_q(f128 nu, f128 x) {
  const f128 h = x / 2, h2 = h * h;
  f128 term = powq(h, nu) / tgammaq(nu + 1);
  f128 sum = term;
  for (int k = 0; k < 2000; ++k) {
    term *= h2 / ((k + 1) * (k + 1 + nu));
    sum += term;
    if (k > h && fabsq(term) < (f128)1e-36 * fabsq(sum)) break;
  }
  return sum;
}

f128 k_series_q(f128 nu, f128 x) {
  return M_PIq / 2 * (bessel_i_q(-nu, x) - bessel_i_q(nu, x)) / sinq(M_PIq * nu);
}

// orders in [0, 2)
double k_base(double nu, double t) {
  if (t > kBesselSwitch) return detail::bessel_k_asymptotic(nu, t);
  return detail::bessel_k_series(nu, t);
}

}  // namespace

namespace detail {

double bessel_k_series(double nu, double t) {
  nu = std::fabs(nu);
  const double m = std::round(nu), h = 1e-6;
  if (std::fabs(nu - m) < h) {
    // remove the sin(pi nu) pole: interpolate between m -+ h
    f128 lo = k_series_q((f128)(m - h), (f128)t), hi = k_series_q((f128)(m + h), (f128)t);
    f128 w = ((f128)nu - (f128)(m - h)) / (f128)(2 * h);
    return (double)(lo + w * (hi - lo));
  }
  return (double)k_series_q((f128)nu, (f128)t);
}

double bessel_k_asymptotic(double nu, double t) {
  const double mu = 4 * nu * nu;
  double term = 1, sum = 1, prev = 1;
  for (int k = 1; k < 200; ++k) {
    const double o = 2.0 * k - 1;
    term *= (mu - o * o) / (k * 8.0 * t);
    if (std::fabs(term) > std::fabs(prev) && k > 2) break;  // past the smallest term
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    prev = term;
  }
  return std::sqrt(std::numbers::pi / (2 * t)) * std::exp(-t) * sum;
}

}  // namespace detail

double bessel_k(double nu, double t) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("bessel_k needs t > 0");
  nu = std::fabs(nu);
  if (!(nu <= kBesselMaxOrder)) throw DomainError("bessel_k order outside the supported range");
  if (nu < 2) return k_base(nu, t);
  // upward recurrence is stable for K
  const int m = static_cast<int>(std::floor(nu));
  const double mu = nu - m;
  double k0 = k_base(mu, t), k1 = k_base(mu + 1, t);
  for (int j = 1; j < m; ++j) {
    double k2 = k0 + 2 * (mu + j) / t * k1;
    k0 = k1;
    k1 = k2;
  }
  return k1;
}

namespace {
double f0_constant(double a) { return std::sqrt(std::numbers::pi) * std::pow(2.0, 0.5 - a) / std::tgamma(a); }
}  // namespace

double hat_f0(double s, double t) {
  check_spectral(s);
  if (t == 0 || !std::isfinite(t)) throw DomainError("hat_f0 is singular at t = 0");
  const double u = std::fabs(t), nu = s - 0.5;
  return f0_constant(s) * std::pow(u, nu) * bessel_k(nu, u);
}

cplx basis_vector(double s, int n, double x) {
  const cplx r = cplx(x, -1) / cplx(x, 1);
  cplx ph = 1;
  for (int k = 0; k < std::abs(n); ++k) ph *= r;
  if (n < 0) ph = std::conj(ph);
  // (x^2+1)^{-s} without overflow for huge x
  const double ax = std::fabs(x);
  const double m = ax > 1 ? std::pow(ax, -2 * s) * std::pow(1 + 1 / (ax * ax), -s) : std::pow(x * x + 1, -s);
  return ph * m;
}

cplx hat_fn(double s, int n, double t, double rel_tol) {
  check_spectral(s);
  if (std::abs(n) > 8) throw ParameterError("hat_fn supports |n| <= 8");
  if (t == 0 || !std::isfinite(t)) throw DomainError("hat_fn is singular at t = 0");
  // f_n(z) = (z-i)^{n-s} (z+i)^{-n-s}. For sign(t) = sg the line is pushed to the branch point
  // z0 = i sg and wrapped around the cut z0 (1 + y), y > 0: two sides of the cut plus a circle
  const double sg = t > 0 ? 1 : -1, at = std::fabs(t);
  const cplx I(0, 1), z0(0, sg);
  const double a = sg > 0 ? n - s : -n - s;  // exponent at z0
  const double b = sg > 0 ? -n - s : n - s;  // the factor analytic on this side
  const double pi = std::numbers::pi;
  const double r = std::min(0.5, 1 / at);
  const cplx jump = std::exp(I * (a * sg * pi / 2)) * (1.0 - std::exp(-2 * pi * I * (a * sg)));

  // sides of the cut, in v = y |t|
  auto side = [&](double v) -> cplx {
    const double y = v / at;
    return std::pow(y, a) * jump * std::pow(z0 * (2 + y), b) * std::exp(-at * (1 + y)) * (I * sg) / at;
  };
  std::vector<double> pts{r * at};
  while (pts.back() < 1) pts.push_back(std::min(1.0, pts.back() * 4));
  while (pts.back() < 128) pts.push_back(pts.back() * 2);
  auto hp = quad::gk_panels(side, pts, rel_tol, 30);

  const double phi0 = sg * (pi / 2 - 2 * pi);
  auto circ = [&](double psi) -> cplx {
    const double phi = phi0 + sg * psi;
    const cplx e = std::exp(I * phi);
    const cplx z = z0 + r * e;
    return std::pow(r, a) * std::exp(I * (a * phi)) * std::pow(z - (-z0), b) * std::exp(I * t * z) * (I * r * e * sg);
  };
  auto cr = quad::gk_panels(circ, {0, pi / 2, pi, 3 * pi / 2, 2 * pi}, rel_tol, 30);
  return 0.5 * (hp.value + cr.value);
}

double hat_fn_bessel(double s, int n, double t) {
  check_spectral(s);
  if (std::abs(n) > 8) throw ParameterError("hat_fn supports |n| <= 8");
  if (t == 0) throw DomainError("hat_fn is singular at t = 0");
  // f_{-n}(t) = f_n(-t); the polynomial factor (x-i)^{2n} becomes (-1)^n (d/dt + 1)^{2n}
  if (n < 0) {
    n = -n;
    t = -t;
  }
  const double nu = n + s - 0.5, u = std::fabs(t);
  // terms coef * u^{nu-i} K_{nu-j}(u)
  std::map<std::pair<int, int>, double> cur{{{0, 0}, 1.0}}, acc;
  double binom = 1;
  const double dsign = t > 0 ? 1 : -1;  // d/dt = dsign d/du
  for (int k = 0; k <= 2 * n; ++k) {
    for (auto& [key, c] : cur) acc[key] += binom * c;
    if (k == 2 * n) break;
    std::map<std::pair<int, int>, double> nxt;
    for (auto& [key, c] : cur) {
      const double ae = nu - key.first, be = nu - key.second;
      if (ae - be != 0) nxt[{key.first + 1, key.second}] += dsign * c * (ae - be);
      nxt[{key.first, key.second + 1}] -= dsign * c;
    }
    cur.swap(nxt);
    binom = binom * (2 * n - k) / (k + 1);
  }
  double sum = 0;
  for (auto& [key, c] : acc) sum += c * std::pow(u, nu - key.first) * bessel_k(nu - key.second, u);
  return (n % 2 ? -1 : 1) * f0_constant(n + s) * sum;
}

}  // namespace horo
