#pragma once
#include <complex>

namespace horo {

// E(w) = C(w) + i S(w) = int_0^w exp(i pi x^2 / 2) dx
std::complex<double> fresnel_e(double w);

// G(w), w >= 0, defined by E(w) = (1+i)/2 - exp(i pi w^2/2) G(w).
// G is slowly varying (no large phase), so callers can supply the phase
// exp(i pi w^2/2) themselves with exact range reduction.
std::complex<double> fresnel_aux(double w);

}  // namespace horo
