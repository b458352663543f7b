#include "horolab/fresnel.hpp"

#include <cmath>
#include <numbers>

namespace horo {

namespace {
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
const cd kHalf(0.5, 0.5);

constexpr double kSeriesMax = 1.6;  // power series for w below this
constexpr double kAsymMin = 8.0;    // asymptotic expansion above this

cd series(double w) {
  // sum (i pi/2)^n w^{2n+1} / (n! (2n+1))
  cd term(w, 0), acc(0, 0);
  const cd f(0, pi / 2 * w * w);
  for (int n = 0; n < 200; ++n) {
    cd add = term / double(2 * n + 1);
    acc += add;
    if (std::abs(add) < 1e-18 * std::abs(acc)) break;
    term *= f / double(n + 1);
  }
  return acc;
}

// erfc(z) exp(z^2) for Re z > 0
cd scaled_erfc(cd z) {
  if (std::abs(z) >= std::sqrt(pi / 2) * kAsymMin) {
    // 1/(z sqrt pi) sum (-1)^k (2k-1)!! / (2 z^2)^k
    cd r = 1.0 / (2.0 * z * z), term(1, 0), acc(1, 0);
    for (int k = 1; k < 40; ++k) {
      term *= -double(2 * k - 1) * r;
      acc += term;
      if (std::abs(term) < 1e-18) break;
    }
    return acc / (z * std::sqrt(pi));
  }
  // continued fraction 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), evaluated backwards
  cd t = z;
  for (int k = 400; k >= 1; --k) t = z + (0.5 * k) / t;
  return 1.0 / (t * std::sqrt(pi));
}
}  // namespace

std::complex<double> fresnel_aux(double w) {
  if (w < kSeriesMax) return (kHalf - series(w)) * std::polar(1.0, -pi * w * w / 2);
  cd z = cd(0.5, -0.5) * std::sqrt(pi) * w;
  return kHalf * scaled_erfc(z);
}

std::complex<double> fresnel_e(double w) {
  double a = std::fabs(w);
  cd e = a < kSeriesMax ? series(a) : kHalf - std::polar(1.0, std::fmod(pi * a * a / 2, 2 * pi)) * fresnel_aux(a);
  return w < 0 ? -e : e;
}

}  // namespace horo
