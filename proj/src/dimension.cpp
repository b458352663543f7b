#include "horolab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horolab/errors.hpp"

namespace horo {

BoundMode parse_bound_mode(const std::string& s) {
  if (s == "mixing") return BoundMode::mixing;
  if (s == "spectral") return BoundMode::spectral;
  if (s == "gap_free" || s == "gap-free") return BoundMode::gap_free;
  throw ParameterError("unknown bound mode '" + s + "' (mixing, spectral, gap_free)");
}

std::string to_string(BoundMode m) {
  switch (m) {
    case BoundMode::mixing: return "mixing";
    case BoundMode::spectral: return "spectral";
    case BoundMode::gap_free: return "gap_free";
  }
  return "?";
}

Rational predicted_bound_exact(BoundMode mode, int d, Rational rate) {
  if (d < 1) throw ParameterError("predicted_bound: degree must be >= 1");
  if (rate <= 0) throw ParameterError("predicted_bound: rate must be positive");
  const Rational three(3), dd(d);
  if (mode == BoundMode::gap_free) return std::max(three - rate / dd, Rational(2));
  // mixing and spectral share the recipe; rate is alpha or Re(s1)
  const Rational a = std::min(Rational(1), dd * rate) / Rational(2);
  return three - a / dd;
}

double predicted_bound(BoundMode mode, int d, double rate) {
  if (d < 1) throw ParameterError("predicted_bound: degree must be >= 1");
  if (!(rate > 0) || !std::isfinite(rate)) throw ParameterError("predicted_bound: rate must be positive");
  if (mode == BoundMode::gap_free) return std::max(3 - rate / d, 2.0);
  const double a = 0.5 * std::min(1.0, d * rate);
  return 3 - a / d;
}

namespace {
void check_packing(double d, double gamma, double alpha2, double eps) {
  if (!(d >= 1) || !(gamma >= 0) || !(alpha2 >= 0) || !(eps >= 0))
    throw ParameterError("packing_ratio: need d >= 1 and nonnegative gamma, alpha'', eps");
}
}  // namespace

double packing_ratio(double d, double gamma, double alpha2, double eps) {
  check_packing(d, gamma, alpha2, eps);
  return (6 * d + 5 * gamma - 2 * alpha2 + 5 * eps) / (2 * d + gamma + eps);
}

double packing_ratio_difference_form(double d, double gamma, double alpha2, double eps) {
  check_packing(d, gamma, alpha2, eps);
  return 3 - (2 * alpha2 - 2 * gamma - 2 * eps) / (2 * d + gamma + eps);
}

double good_measure_bound(double N, double gamma, double alpha2, double eps) {
  if (!(N >= 2)) throw ParameterError("good_measure_bound: N must be >= 2");
  const double v = 1 - std::pow(N, 2 * gamma + eps - 2 * alpha2);
  return std::clamp(v, 0.0, 1.0);
}

// grid ---------------------------------------------------------------------

void GridSpec::validate() const {
  if (!(delta > 0) || !std::isfinite(delta)) throw ParameterError("grid: delta must be positive");
  if (!(x1 > x0) || !(y1 > y0) || !(th1 > th0)) throw ParameterError("grid: empty region");
  if (x0 < -0.5 - 1e-12 || x1 > 0.5 + 1e-12) throw ParameterError("grid: Re z must lie in [-1/2, 1/2]");
  if (th0 < 0 || th1 > 6.283185307179586 + 1e-12) throw ParameterError("grid: theta must lie in [0, 2pi]");
  if (y1 > y_cap) throw ParameterError("grid: region reaches above the cusp cap");
  const double xm = (x0 <= 0 && x1 >= 0) ? 0.0 : std::min(x0 * x0, x1 * x1);
  if (xm + y0 * y0 < 1 - 1e-12) throw ParameterError("grid: region leaves the fundamental domain (|z| < 1)");
}

namespace {
std::size_t count(double lo, double hi, double delta) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / delta - 1e-9)));
}
}  // namespace

std::size_t GridSpec::nx() const { return count(x0, x1, delta); }
std::size_t GridSpec::ny() const { return count(y0, y1, delta); }
std::size_t GridSpec::nth() const { return count(th0, th1, delta); }

PointX GridSpec::center(std::size_t idx) const {
  const std::size_t a = nx(), b = ny(), c = nth();
  const std::size_t i = idx % a, j = (idx / a) % b, k = idx / (a * b);
  if (k >= c) throw ParameterError("grid: cell index out of range");
  return make_point(x0 + (x1 - x0) * (double(i) + 0.5) / double(a), y0 + (y1 - y0) * (double(j) + 0.5) / double(b),
                    th0 + (th1 - th0) * (double(k) + 0.5) / double(c));
}

PointX GridSpec::sample(std::size_t idx, Stream& rng) const {
  const std::size_t a = nx(), b = ny(), c = nth();
  const std::size_t i = idx % a, j = (idx / a) % b, k = idx / (a * b);
  if (k >= c) throw ParameterError("grid: cell index out of range");
  const double u = rng.uniform(), v = rng.uniform(), w = rng.uniform();
  return make_point(x0 + (x1 - x0) * (double(i) + u) / double(a), y0 + (y1 - y0) * (double(j) + v) / double(b),
                    th0 + (th1 - th0) * (double(k) + w) / double(c));
}

// box counting -------------------------------------------------------------

BadSetEstimate box_count_bad(const TestFunction& f, std::size_t N, double gamma, const GridSpec& grid,
                             const SamplingScheme& scheme, const BoxOptions& opt) {
  grid.validate();
  if (N < 1) throw ParameterError("box_count_bad: N must be >= 1");
  if (!(gamma > 0)) throw ParameterError("box_count_bad: gamma must be positive");
  // overflow-safe product against the budget
  const double total_d = double(grid.nx()) * double(grid.ny()) * double(grid.nth());
  if (total_d > double(opt.budget)) throw ResourceError("box_count_bad: grid exceeds the cell budget");
  const std::size_t total = grid.cells();

  std::vector<std::uint8_t> good(total, 0);
  for_each_index(total, opt.backend, [&](std::size_t i) {
    bool g = classify_good(f, grid.center(i), N, gamma, scheme);
    if (!g && opt.probe == CellProbe::three) {
      Stream rng(mix_seed(opt.seed, i));
      for (int r = 0; r < 2 && !g; ++r) g = classify_good(f, grid.sample(i, rng), N, gamma, scheme);
    }
    good[i] = g ? 1 : 0;
  });

  BadSetEstimate e;
  e.N = N;
  e.gamma = gamma;
  e.delta = grid.delta;
  e.total = total;
  for (auto g : good) e.good += g;
  e.bad = total - e.good;
  e.empirical_ratio =
      e.bad == 0 ? std::numeric_limits<double>::quiet_NaN() : -std::log(double(e.bad)) / std::log(grid.delta);
  e.bad_fraction = double(e.bad) / double(total);
  e.fraction_stderr = std::sqrt(e.bad_fraction * (1 - e.bad_fraction) / double(total));
  e.packing = packing_ratio(scheme.degree(), gamma, opt.alpha2, opt.eps);
  if (opt.keep_cells) e.cell_good = std::move(good);
  return e;
}

// isolation ----------------------------------------------------------------

double isolation_gamma_prime(double gamma, std::size_t N, double lip) {
  if (N < 2) throw ParameterError("isolation: N must be >= 2");
  return gamma - std::log1p(3 * std::max(lip, 0.0)) / std::log(double(N));
}

IsolationReport isolation_probe(const TestFunction& f, const PointX& x, std::size_t N, double gamma,
                                std::size_t n_probes, Stream& rng, const SamplingScheme& scheme) {
  if (!(gamma > 0)) throw ParameterError("isolation_probe: gamma must be positive");
  IsolationReport r;
  r.N = N;
  r.gamma = gamma;
  r.gamma_prime = isolation_gamma_prime(gamma, N, f.lip);
  r.vacuous = r.gamma_prime <= 0;
  r.radius = std::pow(double(N), -2.0 * scheme.degree() - gamma);
  r.x_average = sparse_average(f, x, N, scheme);
  if (!is_good_value(r.x_average, N, gamma)) throw ParameterError("isolation_probe: x is not good at (N, gamma)");

  // y = F h with h a random unimodular perturbation; F h u_t = F u_t (u_-t h u_t) keeps the
  // drift polynomial in t
  const GroupElement F = x.frame();
  const double fn = std::sqrt(F.a * F.a + F.b * F.b + F.c * F.c + F.d * F.d);
  const double rho = 0.45 * r.radius / fn;
  const double thr = std::pow(double(N), -r.gamma_prime);
  for (std::size_t p = 0; p < n_probes; ++p) {
    PointX y;
    double dist = INFINITY;
    for (int attempt = 0; attempt < 64 && !(dist < r.radius); ++attempt) {
      const double a = rng.uniform(-rho, rho), b = rng.uniform(-rho, rho), c = rng.uniform(-rho, rho);
      const GroupElement h{1 + a, b, c, (1 + b * c) / (1 + a)};
      y = point_from_frame(F * h);
      dist = distance(x, y);
    }
    if (!(dist < r.radius)) throw SamplingError("isolation_probe: could not place a probe inside the radius");
    const double avg = sparse_average(f, y, N, scheme);
    r.max_probe_average = std::max(r.max_probe_average, std::fabs(avg));
    r.max_probe_distance = std::max(r.max_probe_distance, dist);
    ++r.probes;
    if (std::fabs(avg) <= thr) ++r.good;
  }
  r.fraction = r.probes ? double(r.good) / double(r.probes) : 1.0;
  return r;
}

}  // namespace horo
