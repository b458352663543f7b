#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "horolab/parallel.hpp"
#include "horolab/polynomial.hpp"

namespace horo {

// sum_{n<N} exp(2 pi i p(n) t), phases reduced mod 1 exactly
std::complex<double> weyl_sum(const IntPolynomial& p, std::int64_t N, double t);

// S(j/M), j = 0..M-1, from an FFT of the histogram of p(n) mod M
std::vector<std::complex<double>> weyl_grid(const IntPolynomial& p, std::int64_t N, std::size_t M);

struct WeylIntegral {
  std::complex<double> value;
  double error = 0;
  std::uint64_t panels = 0;
};

// int_0^N exp(2 pi i p(u) t) du by adaptive Gauss-Kronrod on panels with phase change <= 2 rad
WeylIntegral continuous_weyl(const IntPolynomial& p, double N, double t, double tol = 1e-10,
                             std::uint64_t max_panels = 50'000'000);
// closed forms for degree 1 (geometric) and 2 (Fresnel); quadrature otherwise
std::complex<double> continuous_weyl_fast(const IntPolynomial& p, std::int64_t N, double t);

struct WeylGap {
  double gap = 0;    // |S/N - I/N|
  double bound = 0;  // 4 pi |t| max_{u <= N+1} |p'(u)|
};
WeylGap discrete_continuous_gap(const IntPolynomial& p, std::int64_t N, double t);

struct MomentValue {
  double value = 0;
  double richardson_delta = 0;  // |value(2M) - value(M)| / value
  std::size_t grid = 0;
};

// int_0^1 |S_N(t)/N|^q dt on a uniform grid (exact once grid > (q/2) range p);
// grid = 0 picks the smallest power of two that is exact
MomentValue moment_integral(const IntPolynomial& p, std::int64_t N, int q, std::size_t grid = 0,
                            bool richardson = true, Backend backend = Backend::openmp);
// the same quantity by counting solutions of p(n1)+..+p(n_k) = p(m1)+..+p(m_k), k = q/2
double moment_exact(const IntPolynomial& p, std::int64_t N, int q);
std::size_t exact_moment_grid(const IntPolynomial& p, std::int64_t N, int q);

struct MomentRecord {
  int q = 0;
  double level = 0, level_stderr = 0, residual_rms = 0;
  std::vector<std::int64_t> Ns;
  std::vector<double> integrals;
};
MomentRecord hua_level_fit(const IntPolynomial& p, int q, const std::vector<std::int64_t>& Ns,
                           Backend backend = Backend::openmp);

// int_{t_lo}^{t_hi} |S_N(t)/N|^q dt: whole periods plus an exact partial period
// from the Fourier coefficients of |S_N|^q
double restricted_moment(const IntPolynomial& p, std::int64_t N, int q, double t_lo, double t_hi);

// kernel: sum_j w_j |x_j|^q with r2c half-spectrum weights (1, 2, ..., 2, 1)
double half_spectrum_power_sum(const std::vector<std::complex<double>>& x, int q, double scale, Backend backend);

}  // namespace horo
