#pragma once
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "horolab/parallel.hpp"
#include "horolab/sl2.hpp"

namespace horo {

struct MeanEstimate {
  double mean = 0;
  double stderr_ = 0;
};

struct TestFunction {
  std::function<double(const PointX&)> evaluator;
  double lip = 0;  // per unit of frame distance
  double sup = 0;
  MeanEstimate mean_estimate;
  std::string name;

  // evaluators expect reduced points; reduce on the fly otherwise
  double operator()(const PointX& x) const { return evaluator(x.reduced ? x : reduce(x)); }
};

TestFunction constant_function(double c);

// quintic smoothstep band profile in y: 0 below y0-w, 1 on [y0,y1], 0 above y1+w
double band_profile(double y, double y0, double y1, double w);

// band in Im z, recentred to zero mean on the fundamental domain truncated at y_cap
TestFunction make_height_band(double y0, double y1, double smooth_width, double y_cap = 50.0);
// band times a triangle wave in theta (mean zero by symmetry); genuinely not K-invariant
TestFunction make_angular_band(double y0, double y1, double smooth_width, int weight = 1);

// E[phi(Im z)] for the truncated Haar measure, by quadrature of the height marginal
double height_marginal_mean(const std::function<double(double)>& phi, double y_cap, double* err = nullptr);

double fejer_kernel(int L, double k);

struct KFiniteApprox {
  int L = 0;
  int quad_points = 0;
  TestFunction base;
  double error_bound = 0;  // lip * log(L) / L

  // Fourier coefficients along the K-orbit of x, index j + L for j in [-L, L]
  std::vector<std::complex<double>> coefficients(const PointX& x) const;
  double operator()(const PointX& x) const;
  TestFunction as_function() const;
};

KFiniteApprox k_smooth(const TestFunction& f, int L, int quad_points);

// rotate the fibre coordinate: theta -> theta + 2 pi k
PointX rotate_fiber(const PointX& x, double k);

MeanEstimate mc_mean(const TestFunction& f, std::size_t n, std::uint64_t seed, double y_cap = 50.0,
                     Backend backend = Backend::openmp);
// mean of f^2, i.e. the squared L2 norm
MeanEstimate mc_second_moment(const TestFunction& f, std::size_t n, std::uint64_t seed, double y_cap = 50.0,
                              Backend backend = Backend::openmp);

constexpr std::size_t kSampleBlock = 4096;

}  // namespace horo
