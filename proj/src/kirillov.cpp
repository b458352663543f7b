#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/quadrature.hpp"
#include "horolab/specfun.hpp"

namespace horo {

bool KirillovFunction::is_zero() const {
  if (!evaluator) return true;
  for (auto& w : weights)
    if (w.second != cplx(0)) return false;
  return true;
}

KirillovFunction kirillov_function(double s, std::vector<std::pair<int, cplx>> weights) {
  check_spectral(s);
  for (auto& w : weights)
    if (std::abs(w.first) > 8) throw ParameterError("basis index |n| must be <= 8");
  KirillovFunction f;
  f.s = s;
  f.weights = weights;
  f.evaluator = [s, weights](double t) {
    cplx v = 0;
    for (auto& [n, c] : weights) {
      if (c == cplx(0)) continue;
      v += c * (n == 0 ? cplx(hat_f0(s, t)) : hat_fn(s, n, t));
    }
    return v;
  };
  return f;
}

KirillovFunction kirillov_basis(double s, int n) { return kirillov_function(s, {{n, 1.0}}); }

KirillovFunction scaled(const KirillovFunction& f, cplx c) {
  auto w = f.weights;
  for (auto& x : w) x.second *= c;
  return kirillov_function(f.s, w);
}

std::function<cplx(double)> line_function(const KirillovFunction& f) {
  return [s = f.s, w = f.weights](double x) {
    cplx v = 0;
    for (auto& [n, c] : w) v += c * basis_vector(s, n, x);
    return v;
  };
}

double kirillov_norm_f0(double s) {
  check_spectral(s);
  const double pi = std::numbers::pi;
  const double c = std::sqrt(pi) * std::pow(2.0, 0.5 - s) / std::tgamma(s);
  return 2 * c * c * pi * pi / (4 * std::sin(pi * s));
}

NormValue kirillov_norm(const KirillovFunction& f, double rel_tol) {
  NormValue out;
  if (f.is_zero()) return out;
  const double s = f.s;
  // both signs folded onto t > 0
  auto h = [&](double t) { return (std::norm(f(t)) + std::norm(f(-t))) * std::pow(t, 1 - 2 * s); };

  const double umax = 60;
  const double eps = std::exp(-umax);
  const double h_eps = h(eps), h_eps5 = h(eps * std::exp(5.0));
  if (h_eps > 0 && h_eps5 > 0) {
    const double slope = std::log(h_eps5 / h_eps) / 5;
    if (!(slope > -1 + 1e-6)) throw DomainError("Kirillov norm diverges at t = 0");
  }
  // power-law remainder below eps: h ~ rho t^{2s-1}
  const double rho = h_eps * std::pow(eps, 1 - 2 * s);
  const double rho5 = h_eps5 * std::pow(eps * std::exp(5.0), 1 - 2 * s);
  const double rem = rho * std::pow(eps, 2 * s) / (2 * s);
  out.value += rem;
  out.error += std::fabs(rho - rho5) * std::pow(eps, 2 * s) / (2 * s);

  // t = e^{-u} on (eps, 1]
  auto hu = [&](double u) { return h(std::exp(-u)) * std::exp(-u); };
  std::vector<double> up;
  for (double u = 0; u <= umax; u += 2) up.push_back(u);
  auto lo = quad::gk_panels(hu, up, rel_tol, 24);
  auto hi = quad::gk_panels(h, {1, 2, 4, 8, 16, 32, 64}, rel_tol, 24);
  out.value += lo.value + hi.value;
  out.error += lo.error + hi.error;
  // exponential envelope beyond 64
  out.error += h(64) / 2;
  return out;
}

namespace {

// int over x = c + dir e^v, v in [log d0, log d1]; d1 = inf gives a power-law remainder
template <class G>
quad::Result<cplx> log_segment(G&& g, double c, double dir, double d0, double d1, double rel_tol,
                               unsigned depth = 24, double span = 60) {
  const double v0 = std::log(d0);
  const bool open = !std::isfinite(d1);
  const double v1 = open ? std::min(v0 + span, 340.0) : std::log(d1);
  auto gv = [&](double v) {
    const double e = std::exp(v);
    return g(c + dir * e) * e;
  };
  std::vector<double> pts;
  for (double v = v0; v < v1; v += 2) pts.push_back(v);
  pts.push_back(v1);
  auto r = quad::gk_panels(gv, pts, rel_tol, depth);
  if (open) {
    // tail ~ C x^{-k}: estimate k from the last two points
    const double xa = std::exp(v1 - 1), xb = std::exp(v1);
    const cplx ga = g(c + dir * xa), gb = g(c + dir * xb);
    if (std::abs(gb) > 0 && std::abs(ga) > 0) {
      const double k = std::log(std::abs(ga) / std::abs(gb));
      if (k > 1) {
        const cplx rem = gb * xb / (k - 1);
        r.value += rem;
        r.error += std::abs(rem);
      } else {
        throw DomainError("line-model integrand does not decay");
      }
    }
  }
  return r;
}

template <class G>
void add(quad::Result<cplx>& acc, const quad::Result<G>& r) {
  acc.value += r.value;
  acc.error += r.error;
}

}  // namespace

double line_model_constant(double s) {
  check_spectral(s);
  const double pi = std::numbers::pi;
  return 4 / pi * (-std::tgamma(2 * s - 1) * std::sin(pi * s));
}

NormValue line_model_inner(const std::function<cplx(double)>& f1, const std::function<cplx(double)>& f2, double s,
                           double rel_tol) {
  check_spectral(s);
  if (!(s > 0.25)) throw DomainError("line-model form needs s > 1/4");
  const double inf = std::numeric_limits<double>::infinity();
  const double heps = std::exp(-12.0);

  // order swapped: G = int f1(x) conj(L f2(x)) dx with
  // L f(x) = int_0^inf h^{2s-2} (2 f(x) - f(x+h) - f(x-h)) dh
  auto lap = [&](double x) {
    const cplx fx = f2(x);
    // the pieces are O(|x|^{-2s}) but |x|^{-2s} is annihilated by L, so L f ~ |x|^{2s-2}:
    // tighten accordingly
    const double itol = std::max(1e-14, rel_tol * std::pow(1 + std::fabs(x), 4 * s - 2));
    // h = e^{-u}; one adaptive pass so the tolerance is relative to the whole range and
    // the cancellation noise of the second difference at tiny h is not chased
    auto d2 = [&](double u) {
      const double h = std::exp(-u);
      return (2.0 * fx - f2(x + h) - f2(x - h)) * std::pow(h, 2 * s - 1);
    };
    // second difference ~ h^2 below heps
    cplx v = (2.0 * fx - f2(x + heps) - f2(x - heps)) * std::pow(heps, 2 * s - 1) / (2 * s + 1);
    v += quad::gk(d2, 0.0, 12.0, itol, 12).value;
    v += 2.0 * fx / (1 - 2 * s);
    // the shifted copies peak at h = |x|
    const double ax = std::fabs(x);
    const double P = std::max(4.0, 2 * ax + 4);
    std::vector<double> hp{1, P};
    for (double d = 1; d < P; d *= 2) {
      hp.push_back(d);
      hp.push_back(ax + d);
      hp.push_back(ax - d);
    }
    hp.push_back(ax);
    std::sort(hp.begin(), hp.end());
    std::vector<double> clip;
    for (double h : hp)
      if (h >= 1 && h <= P && (clip.empty() || h > clip.back())) clip.push_back(h);
    auto sh = [&](double h) { return (f2(x + h) + f2(x - h)) * std::pow(h, 2 * s - 2); };
    v -= quad::gk_panels(sh, clip, itol, 12).value;
    v -= quad::gk_right_tail(sh, P, itol).value;
    return v;
  };
  auto g = [&](double x) { return f1(x) * std::conj(lap(x)); };

  quad::Result<cplx> tot;
  add(tot, quad::gk_panels(g, {-4, -3, -2, -1, 0, 1, 2, 3, 4}, 10 * rel_tol, 12));
  add(tot, log_segment(g, 0, -1, 4, inf, 10 * rel_tol, 12, 12));
  add(tot, log_segment(g, 0, 1, 4, inf, 10 * rel_tol, 12, 12));

  NormValue out;
  out.value = tot.value.real();
  out.error = tot.error;
  return out;
}

}  // namespace horo
