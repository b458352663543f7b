#include "horolab/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/quadrature.hpp"

namespace horo {

namespace {
constexpr double pi = std::numbers::pi;

double smootherstep(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return u * u * u * (u * (6 * u - 15) + 10);
}

// width of the fundamental domain at height y
double domain_width(double y) {
  if (y >= 1) return 1.0;
  return 1.0 - 2.0 * std::sqrt(std::max(0.0, 1 - y * y));
}

double tri_wave(double theta, int weight) {
  // period 2pi/weight, values in [-1, 1], mean zero, slope 2 weight / pi
  double u = std::fmod(theta * weight / (2 * pi), 1.0);
  if (u < 0) u += 1;
  return 1 - 4 * std::fabs(u - 0.5);
}
}  // namespace

TestFunction constant_function(double c) {
  TestFunction f;
  f.evaluator = [c](const PointX&) { return c; };
  f.lip = 0;
  f.sup = std::fabs(c);
  f.mean_estimate = {c, 0};
  f.name = "constant";
  return f;
}

double band_profile(double y, double y0, double y1, double w) {
  if (y < y0) return smootherstep((y - (y0 - w)) / w);
  if (y > y1) return 1 - smootherstep((y - y1) / w);
  return 1;
}

double height_marginal_mean(const std::function<double(double)>& phi, double y_cap, double* err) {
  const double ylo = std::sqrt(3.0) / 2;
  std::vector<double> pts{ylo, 1.0};
  for (double y = 2; y < y_cap; y *= 2) pts.push_back(y);
  pts.push_back(y_cap);
  auto num = quad::gk_panels([&](double y) { return phi(y) * domain_width(y) / (y * y); }, pts, 1e-13);
  double Z = pi / 3 - 1 / y_cap;
  if (err) *err = num.error / Z;
  return num.value / Z;
}

TestFunction make_height_band(double y0, double y1, double w, double y_cap) {
  if (!(y0 > 1) || !(y1 > y0) || !(w > 0) || !(y1 + w < y_cap))
    throw ParameterError("height band needs 1 < y0 < y1, w > 0 and y1 + w below the cusp cap");
  double qerr = 0;
  auto phi = [=](double y) { return band_profile(y, y0, y1, w); };
  double m = height_marginal_mean(phi, y_cap, &qerr);
  TestFunction f;
  f.evaluator = [=](const PointX& x) { return band_profile(x.z.imag(), y0, y1, w) - m; };
  // |d phi/dy| <= 15/(8w); |grad Im z| <= 2 y^{3/2} per unit frame distance
  f.lip = 15.0 / (8.0 * w) * 2.0 * std::pow(y1 + w, 1.5);
  f.sup = std::max(1 - m, m);
  f.mean_estimate = {0.0, qerr};
  f.name = "height_band";
  return f;
}

TestFunction make_angular_band(double y0, double y1, double w, int weight) {
  if (!(y0 > 1) || !(y1 > y0) || !(w > 0) || weight < 1)
    throw ParameterError("angular band needs 1 < y0 < y1, w > 0, weight >= 1");
  TestFunction f;
  f.evaluator = [=](const PointX& x) { return band_profile(x.z.imag(), y0, y1, w) * tri_wave(x.theta, weight); };
  // |d theta| <= 2 sqrt(y) per unit frame distance
  double ytop = y1 + w;
  f.lip = 15.0 / (8.0 * w) * 2.0 * std::pow(ytop, 1.5) + (2.0 * weight / pi) * 2.0 * std::sqrt(ytop);
  f.sup = 1;
  f.mean_estimate = {0.0, 0.0};
  f.name = "angular_band";
  return f;
}

double fejer_kernel(int L, double k) {
  if (L < 1) throw ParameterError("fejer_kernel: L must be positive");
  double s = std::sin(pi * k);
  if (std::fabs(s) < 1e-7) {
    // near the peak fall back to the finite sum
    double acc = 1;
    for (int j = 1; j < L; ++j) acc += 2 * (1 - double(j) / L) * std::cos(2 * pi * j * k);
    return acc;
  }
  double r = std::sin(pi * L * k) / s;
  return r * r / L;
}

PointX rotate_fiber(const PointX& x, double k) {
  PointX y = x;
  double th = std::fmod(x.theta + 2 * pi * k, 2 * pi);
  if (th < 0) th += 2 * pi;
  y.theta = th;
  return y;
}

std::vector<std::complex<double>> KFiniteApprox::coefficients(const PointX& x) const {
  const int M = quad_points;
  std::vector<double> vals(M);
  for (int m = 0; m < M; ++m) vals[m] = base(rotate_fiber(x, double(m) / M));
  std::vector<std::complex<double>> c(2 * L + 1);
  for (int j = -L; j <= L; ++j) {
    std::complex<double> acc = 0;
    for (int m = 0; m < M; ++m) acc += vals[m] * std::polar(1.0, 2 * pi * double(j) * m / M);
    c[j + L] = (1 - std::fabs(double(j)) / L) * acc / double(M);
  }
  return c;
}

double KFiniteApprox::operator()(const PointX& x) const {
  auto c = coefficients(x);
  double acc = 0;
  for (auto& v : c) acc += v.real();
  return acc;
}

TestFunction KFiniteApprox::as_function() const {
  TestFunction g;
  KFiniteApprox self = *this;
  g.evaluator = [self](const PointX& x) { return self(x); };
  g.lip = base.lip;  // convolution with a probability kernel does not increase it
  g.sup = base.sup + error_bound;
  g.mean_estimate = base.mean_estimate;
  g.name = base.name + "_ksmooth";
  return g;
}

KFiniteApprox k_smooth(const TestFunction& f, int L, int quad_points) {
  if (L < 1) throw ParameterError("k_smooth: L must be positive");
  if (quad_points < 4 * L + 2) throw ParameterError("k_smooth: quad_points < 4L+2 would alias");
  KFiniteApprox a;
  a.L = L;
  a.quad_points = quad_points;
  a.base = f;
  a.error_bound = L > 1 ? f.lip * std::log(double(L)) / L : f.lip;
  return a;
}

namespace {
MeanEstimate mc_generic(const std::function<double(const PointX&)>& g, std::size_t n, std::uint64_t seed,
                        double y_cap, Backend backend) {
  if (n < 100) throw ParameterError("mc_mean: need at least 100 samples");
  const std::size_t nb = (n + kSampleBlock - 1) / kSampleBlock;
  std::vector<Moments> parts(nb);
  for_each_index(nb, backend, [&](std::size_t b) {
    Stream rng(mix_seed(seed, b));
    std::size_t lo = b * kSampleBlock, hi = std::min(n, lo + kSampleBlock);
    Moments m;
    for (std::size_t i = lo; i < hi; ++i) m.add(g(haar_sample(rng, y_cap)));
    parts[b] = m;
  });
  Moments tot;
  for (auto& p : parts) tot.merge(p);
  return {tot.mean, tot.stderr_of_mean()};
}
}  // namespace

MeanEstimate mc_mean(const TestFunction& f, std::size_t n, std::uint64_t seed, double y_cap, Backend backend) {
  return mc_generic([&](const PointX& x) { return f(x); }, n, seed, y_cap, backend);
}

MeanEstimate mc_second_moment(const TestFunction& f, std::size_t n, std::uint64_t seed, double y_cap,
                              Backend backend) {
  return mc_generic([&](const PointX& x) { double v = f(x); return v * v; }, n, seed, y_cap, backend);
}

}  // namespace horo
