#pragma once
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace horo {

using cplx = std::complex<double>;

// 0 < s < 1/2, otherwise ParameterError
double check_spectral(double s);

// asymptotic branch above this point; below it the quad-precision series
constexpr double kBesselSwitch = 17.0;
constexpr double kBesselMaxOrder = 8.0;

// modified Bessel function of the second kind, |nu| <= 8, t > 0
double bessel_k(double nu, double t);

namespace detail {
// both branches exposed for the agreement check; orders in [0, 2)
double bessel_k_series(double nu, double t);
double bessel_k_asymptotic(double nu, double t);
}  // namespace detail

// transforms use fhat(t) = 1/2 int f(x) e^{ixt} dx
double hat_f0(double s, double t);

// ((x-i)/(x+i))^n (x^2+1)^{-s}
cplx basis_vector(double s, int n, double x);

// transform of basis_vector by contour integration around the branch point
// on the decaying side; |n| <= 8, t != 0
cplx hat_fn(double s, int n, double t, double rel_tol = 1e-11);
// the same from (-1)^n (d/dt + 1)^{2n} applied to c t^{n+s-1/2} K_{n+s-1/2}(t), expanded
// with d/dt[t^a K_b] = (a-b) t^{a-1} K_b - t^a K_{b-1}; cross-check only
double hat_fn_bessel(double s, int n, double t);

struct KirillovFunction {
  std::function<cplx(double)> evaluator;
  std::vector<std::pair<int, cplx>> weights;  // (n, coefficient)
  double s = 0.25;

  cplx operator()(double t) const { return evaluator ? evaluator(t) : cplx(0); }
  bool is_zero() const;
};

// sum_n c_n hat_fn(s, n, .); n = 0 uses the closed form
KirillovFunction kirillov_function(double s, std::vector<std::pair<int, cplx>> weights);
KirillovFunction kirillov_basis(double s, int n);
KirillovFunction scaled(const KirillovFunction& f, cplx c);
// matching real-line function sum_n c_n f_n(x)
std::function<cplx(double)> line_function(const KirillovFunction& f);

struct NormValue {
  double value = 0;
  double error = 0;
};

// int |fhat(t)|^2 |t|^{1-2s} dt; DomainError when the small-t slope signals divergence
NormValue kirillov_norm(const KirillovFunction& f, double rel_tol = 1e-11);
// closed form of kirillov_norm(hat_f0): 2 c^2 pi^2 / (4 sin(pi s)), c = sqrt(pi) 2^{1/2-s} / Gamma(s)
double kirillov_norm_f0(double s);

// Gagliardo form  1/2 int int (f1(x)-f1(y)) conj(f2(x)-f2(y)) |x-y|^{2s-2} dx dy, i.e. the
// line-model double integral with the diagonal regularised; needs s > 1/4 for the
// autocorrelations to exist
NormValue line_model_inner(const std::function<cplx(double)>& f1, const std::function<cplx(double)>& f2, double s,
                           double rel_tol = 1e-8);
// line_model_inner(f, f) / kirillov_norm(fhat) under the transform convention above
double line_model_constant(double s);

}  // namespace horo
