#include "horolab/expsum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "horolab/errors.hpp"
#include "horolab/fit.hpp"
#include "horolab/fresnel.hpp"
#include "horolab/quadrature.hpp"

namespace horo {

namespace {
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
std::mutex planner_mutex;  // fftw planning is not thread safe

cd unit(double frac) { return std::polar(1.0, 2 * pi * frac); }

void check_N(std::int64_t N) {
  if (N < 1) throw ParameterError("N must be >= 1");
}

// histogram of p(n) mod M
std::vector<double> residue_histogram(const IntPolynomial& p, std::int64_t N, std::size_t M) {
  std::vector<double> h(M, 0.0);
  const i128 m = static_cast<i128>(M);
  for (std::int64_t n = 0; n < N; ++n) {
    i128 r = p(n) % m;
    if (r < 0) r += m;
    h[static_cast<std::size_t>(r)] += 1.0;
  }
  return h;
}

// |S(j/M)|, j = 0..M/2, via real-to-complex transform
std::vector<cd> half_spectrum(const std::vector<double>& h) {
  const std::size_t M = h.size();
  std::vector<cd> out(M / 2 + 1);
  std::vector<double> in(h);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(M), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  if (!plan) throw ResourceError("fftw planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

double ipow(double x, int k) {
  double r = 1;
  while (k) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}
}  // namespace

std::complex<double> weyl_sum(const IntPolynomial& p, std::int64_t N, double t) {
  check_N(N);
  if (t == 0) return cd(double(N), 0);
  Neumaier<cd> acc;
  for (std::int64_t n = 0; n < N; ++n) acc.add(unit(frac_mul(p(n), t)));
  return acc.value();
}

std::vector<std::complex<double>> weyl_grid(const IntPolynomial& p, std::int64_t N, std::size_t M) {
  check_N(N);
  if (M < 2 || M > (std::size_t(1) << 30)) throw ResourceError("weyl_grid: grid size out of range");
  auto h = residue_histogram(p, N, M);
  std::vector<cd> in(h.begin(), h.end()), out(M);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(M), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw ResourceError("fftw planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

WeylIntegral continuous_weyl(const IntPolynomial& p, double N, double t, double tol, std::uint64_t max_panels) {
  if (!(N >= 1)) throw ParameterError("continuous_weyl: N must be >= 1");
  WeylIntegral r;
  if (t == 0) {
    r.value = N;
    return r;
  }
  Neumaier<cd> acc;
  // unit blocks [n, n+1]: phase = frac(p(n) t) + (p(n+h) - p(n)) t, no large cancellation
  for (std::int64_t n = 0; double(n) < N; ++n) {
    const double len = std::min(1.0, N - double(n));
    const double base = frac_mul(p(n), t);
    const auto q = p.shifted_increment(n);
    auto f = [&](double h) { return unit(base + std::fmod(horner(q, h) * t, 1.0)); };
    const double d = p.derivative_bound(double(n) + len);
    // at most 2 rad of phase per panel
    const double step = std::min(len, 2.0 / (2 * pi * std::fabs(t) * d + 1e-300));
    for (double h = 0; h < len;) {
      double e = std::min(len, h + step);
      auto qr = quad::gk(f, h, e, 1e-13, 10);
      acc.add(qr.value);
      r.error += qr.error;
      h = e;
      if (++r.panels > max_panels) throw QuadratureError("continuous_weyl: panel budget exhausted");
    }
  }
  r.value = acc.value();
  if (r.error > tol) throw QuadratureError("continuous_weyl: tolerance not reached");
  return r;
}

std::complex<double> continuous_weyl_fast(const IntPolynomial& p, std::int64_t N, double t) {
  check_N(N);
  if (t == 0) return cd(double(N), 0);
  const auto& c = p.coeffs();
  if (p.degree() == 1) {
    const double a = double(c[1]);
    cd lead = unit(frac_mul(c[0], t));
    double phi = 2 * pi * t * a * double(N);
    if (std::fabs(phi) < 1.0) {
      // exp(i phi/2) N sinc(phi/2), accurate for small phi
      double hphi = phi / 2;
      double sinc = hphi == 0 ? 1.0 : std::sin(hphi) / hphi;
      return lead * std::polar(1.0, hphi) * (double(N) * sinc);
    }
    cd e = unit(frac_mul(i128(c[1]) * N, t));
    return lead * (e - 1.0) / cd(0, 2 * pi * t * a);
  }
  if (p.degree() == 2) {
    const double a = double(c[2]), b = double(c[1]);
    const double tau = t * a;
    const bool pos = tau > 0;
    const double kappa = 2 * std::sqrt(std::fabs(tau));
    const double beta = b / (2 * a);
    // exp(2 pi i t gamma0), gamma0 = c0 - b^2/(4a)
    double g0 = frac_mul(c[0], t) - frac_mul(i128(c[1]) * c[1], t / (4 * a));
    cd A = pos ? cd(0.5, 0.5) : cd(0.5, -0.5);
    cd lead = unit(g0);
    auto term = [&](double w, i128 P) -> cd {
      if (w == 0) return 0;
      cd G = fresnel_aux(std::fabs(w));
      if (!pos) G = std::conj(G);
      cd v = A * lead - unit(frac_mul(P, t)) * G;
      return w > 0 ? v : -v;
    };
    cd hi = term(kappa * (double(N) + beta), p(N));
    cd lo = term(kappa * beta, p(0));
    return (hi - lo) / kappa;
  }
  return continuous_weyl(p, double(N), t, 1e-8).value;
}

WeylGap discrete_continuous_gap(const IntPolynomial& p, std::int64_t N, double t) {
  WeylGap g;
  cd s = weyl_sum(p, N, t), i = continuous_weyl_fast(p, N, t);
  g.gap = std::abs(s - i) / double(N);
  g.bound = 4 * pi * std::fabs(t) * p.derivative_bound(double(N) + 1);
  return g;
}

std::size_t exact_moment_grid(const IntPolynomial& p, std::int64_t N, int q) {
  // |S|^q has frequencies up to (q/2) range; need M > that
  i128 need = i128(q / 2) * p.range(N) + 1;
  std::size_t M = 64;
  while (i128(M) <= need) M <<= 1;
  return M;
}

double half_spectrum_power_sum(const std::vector<std::complex<double>>& x, int q, double scale, Backend backend) {
  const std::size_t n = x.size(), blk = 1 << 16, nb = (n + blk - 1) / blk;
  std::vector<double> part(nb);
  const int k = q / 2;
  for_each_index(nb, backend, [&](std::size_t b) {
    Neumaier<double> acc;
    std::size_t lo = b * blk, hi = std::min(n, lo + blk);
    for (std::size_t j = lo; j < hi; ++j) {
      double w = (j == 0 || j == n - 1) ? 1.0 : 2.0;
      acc.add(w * ipow(std::norm(x[j]) * scale, k));
    }
    part[b] = acc.value();
  });
  Neumaier<double> tot;
  for (double v : part) tot.add(v);
  return tot.value();
}

namespace {
double moment_on_grid(const IntPolynomial& p, std::int64_t N, int q, std::size_t M, Backend backend) {
  auto spec = half_spectrum(residue_histogram(p, N, M));
  double scale = 1.0 / (double(N) * double(N));
  return half_spectrum_power_sum(spec, q, scale, backend) / double(M);
}
}  // namespace

MomentValue moment_integral(const IntPolynomial& p, std::int64_t N, int q, std::size_t grid, bool richardson,
                            Backend backend) {
  check_N(N);
  if (q < 2 || q % 2) throw ParameterError("moment_integral: q must be a positive even integer");
  std::size_t need = exact_moment_grid(p, N, q);
  if (grid == 0) grid = need;
  if (grid % 2) throw ParameterError("moment_integral: grid must be even");
  if (i128(grid) <= i128(q / 2) * p.range(N))
    throw ResolutionError("moment_integral: grid does not resolve the highest frequency of |S|^q");
  if (grid > (std::size_t(1) << 29)) throw ResourceError("moment_integral: grid too large");
  MomentValue r;
  r.grid = grid;
  r.value = moment_on_grid(p, N, q, grid, backend);
  if (richardson) {
    double v2 = moment_on_grid(p, N, q, 2 * grid, backend);
    r.richardson_delta = std::fabs(v2 - r.value) / std::fabs(v2);
    if (r.richardson_delta > 1e-6) throw ResolutionError("moment_integral: grid doubling moved the value");
  }
  return r;
}

double moment_exact(const IntPolynomial& p, std::int64_t N, int q) {
  check_N(N);
  if (q < 2 || q % 2) throw ParameterError("moment_exact: q must be a positive even integer");
  std::unordered_map<std::int64_t, double> base;
  for (std::int64_t n = 0; n < N; ++n) base[static_cast<std::int64_t>(p(n))] += 1;
  auto r = base;
  for (int k = 1; k < q / 2; ++k) {
    std::unordered_map<std::int64_t, double> next;
    for (auto& [v, c] : r)
      for (auto& [u, d] : base) next[v + u] += c * d;
    r.swap(next);
  }
  double count = 0;
  for (auto& [v, c] : r) count += c * c;
  return count / ipow(double(N), q);
}

MomentRecord hua_level_fit(const IntPolynomial& p, int q, const std::vector<std::int64_t>& Ns, Backend backend) {
  if (Ns.size() < 2) throw DegenerateFitError("hua_level_fit: need at least two N");
  MomentRecord m;
  m.q = q;
  m.Ns = Ns;
  for (auto N : Ns) m.integrals.push_back(moment_integral(p, N, q, 0, false, backend).value);
  std::vector<double> x(Ns.begin(), Ns.end());
  auto lf = loglog_fit(x, m.integrals);
  m.level = -lf.slope;
  m.level_stderr = lf.slope_stderr;
  m.residual_rms = lf.residual_rms;
  return m;
}

double restricted_moment(const IntPolynomial& p, std::int64_t N, int q, double t_lo, double t_hi) {
  if (!(t_lo >= 0) || !(t_hi > t_lo)) throw ParameterError("restricted_moment: need 0 <= t_lo < t_hi");
  if (q < 2 || q % 2) throw ParameterError("restricted_moment: q must be a positive even integer");
  // values of |S/N|^q on a grid fine enough to recover all Fourier coefficients
  const std::size_t M = 2 * exact_moment_grid(p, N, q);
  if (M > (std::size_t(1) << 28)) throw ResourceError("restricted_moment: grid too large");
  auto S = weyl_grid(p, N, M);
  std::vector<cd> g(M);
  const double scale = 1.0 / (double(N) * double(N));
  for (std::size_t j = 0; j < M; ++j) g[j] = ipow(std::norm(S[j]) * scale, q / 2);
  std::vector<cd> c(M);
  {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lk(planner_mutex);
      plan = fftw_plan_dft_1d(static_cast<int>(M), reinterpret_cast<fftw_complex*>(g.data()),
                              reinterpret_cast<fftw_complex*>(c.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lk(planner_mutex);
    fftw_destroy_plan(plan);
  }
  for (auto& v : c) v /= double(M);
  const std::size_t K = M / 2 - 1;  // c_k = 0 beyond the true bandwidth anyway
  const double full = c[0].real();
  // F(x) = int_0^x = floor(x) full + P(frac x)
  auto F = [&](double x) {
    double whole = std::floor(x), u = x - whole;
    Neumaier<double> acc;
    acc.add(full * u);
    for (std::size_t k = 1; k <= K; ++k) {
      if (std::abs(c[k]) < 1e-300) continue;
      cd e = unit(frac_mul(i128(k), u)) - 1.0;
      acc.add(2 * (c[k] * e / cd(0, 2 * pi * double(k))).real());
    }
    return whole * full + acc.value();
  };
  return F(t_hi) - F(t_lo);
}

}  // namespace horo
