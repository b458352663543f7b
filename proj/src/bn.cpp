#include "horolab/bn.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <memory>

#include "horolab/errors.hpp"
#include "horolab/expsum.hpp"
#include "horolab/fit.hpp"
#include "horolab/quadrature.hpp"

namespace horo {

double bn_kernel(const IntPolynomial& p, std::int64_t N, double t) {
  const cplx S = weyl_sum(p, N, t), I = continuous_weyl_fast(p, N, t);
  return std::norm(S - I) / (double(N) * double(N));
}

namespace {

double raw_weight(const KirillovFunction& f, double t) {
  return (std::norm(f(t)) + std::norm(f(-t))) * std::pow(t, 1 - 2 * f.s);
}

// W(t) = (|fhat(t)|^2 + |fhat(-t)|^2) t^{1-2s} on t > 0, as a cubic B-spline in log t
// (of log W when W stays positive); power law t^{2s-1} below the table, zero above
class Weight {
 public:
  Weight(const KirillovFunction& f, double t_lo, double t_hi, double du, Backend backend)
      : s_(f.s), t_lo_(t_lo), t_hi_(t_hi), u0_(std::log(t_lo)) {
    const std::size_t n = static_cast<std::size_t>(std::ceil((std::log(t_hi) - u0_) / du)) + 1;
    du_ = (std::log(t_hi) - u0_) / double(n - 1);
    std::vector<double> w(n);
    for_each_index(n, backend, [&](std::size_t i) { w[i] = raw_weight(f, std::exp(u0_ + du_ * double(i))); });
    log_ = true;
    for (double v : w)
      if (!(v > 0) || !std::isfinite(v)) log_ = false;
    w_lo_ = w.front();
    if (log_)
      for (double& v : w) v = std::log(v);
    sp_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(w.begin(), w.end(), u0_, du_);
  }

  double operator()(double t) const {
    if (t <= t_lo_) return w_lo_ * std::pow(t / t_lo_, 2 * s_ - 1);
    if (t >= t_hi_) return 0;
    const double v = (*sp_)(std::log(t));
    return log_ ? std::exp(v) : v;
  }

 private:
  double s_, t_lo_, t_hi_, u0_, du_ = 0, w_lo_ = 0;
  bool log_ = true;
  std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> sp_;
};

// FFT-friendly size
std::size_t nice_size(double need) {
  std::size_t best = 0;
  const double cap = 4 * need + 64;
  for (double a = 1; a <= cap; a *= 2)
    for (double b = a; b <= cap; b *= 3)
      for (double c = b; c <= cap; c *= 5)
        for (double d = c; d <= cap; d *= 7)
          if (d >= need && (best == 0 || d < double(best))) best = static_cast<std::size_t>(d);
  return best;
}

}  // namespace

std::vector<BnNorm> bn_spectral_norms(const IntPolynomial& p, std::int64_t N, const std::vector<KirillovFunction>& fs,
                                      const BnOptions& opt) {
  if (N < 1) throw ParameterError("bn_spectral_norm: N must be >= 1");
  if (!(opt.alpha > 0) || !(opt.beta >= 0)) throw ParameterError("zone exponents must be positive");
  const std::size_t K = fs.size();
  std::vector<BnNorm> out(K);
  std::vector<std::size_t> live;
  for (std::size_t k = 0; k < K; ++k) {
    out[k].s = fs[k].s;
    if (!fs[k].is_zero()) live.push_back(k);
  }
  const int d = p.degree();
  if (d < 1) throw ParameterError("bn_spectral_norm needs a non-constant polynomial");
  const double Nd = double(N);
  const double R = double(p.range(N));
  const double t1 = std::pow(Nd, -(d - 1 + opt.alpha));
  const double c1 = std::max(t1, std::pow(Nd, opt.beta));
  for (auto& o : out) {
    o.t_gap = t1;
    o.t_moment = c1;
  }
  if (live.empty()) return out;

  // cut-off from the envelope W(t) ~ C t^a e^{-2t}: int_T^inf 4W <= 2 W(T) max(1, 2T/(2T-a))
  std::vector<double> ref(K, 0);
  for (std::size_t k : live) ref[k] = kirillov_norm(fs[k], 1e-6).value;
  double T = std::max(4.0, std::ceil(c1) + 1);
  std::vector<double> bound(K, 0);
  for (std::size_t k : live) {
    double Tk = std::max(4.0, std::ceil(c1) + 1);
    for (; Tk < 400; Tk += 1) {
      const double w = raw_weight(fs[k], Tk);
      if (w == 0) break;
      const double w2 = raw_weight(fs[k], 1.01 * Tk);
      const double a = std::log(w2 / w) / std::log(1.01) + 2 * Tk;
      const double env = 2 * w * std::max(1.0, 2 * Tk / (2 * Tk - a));
      bound[k] = env;
      if (2 * Tk > a && env <= opt.tail_rel * ref[k]) break;
    }
    T = std::max(T, Tk);
  }

  // grid for the moment and tail zones: |S-I|^2 has frequencies in [-R, R]; the spare
  // bandwidth M - R absorbs the smooth zone windows (erfc of width sigma)
  const double margin = std::max({256.0, std::ceil(30 / t1), R / 8});
  const std::size_t M = nice_size(R + margin + 1);
  const double sigma = 2.5 / (double(M) - R), delta = 6.5 * sigma;
  const double b0 = t1, b1 = c1, b2 = T;

  const double npts = (b2 - b0 + 2 * delta) * double(M);
  if (npts * (d >= 3 ? Nd : 1.0) > 4e10) throw ResourceError("bn_spectral_norm: grid too large");

  std::vector<std::unique_ptr<Weight>> W(K);
  for (std::size_t k : live)
    W[k] = std::make_unique<Weight>(fs[k], 1e-3 * std::max(b0 - delta, 0.5 * b0), b2 + 1, opt.knot_step, opt.backend);

  auto step = [&](double t, double c) {
    if (t >= c + delta) return 1.0;
    if (t <= c - delta) return 0.0;
    return 0.5 * std::erfc((c - t) / sigma);
  };

  // zone 1 and the window corrections: direct kernel evaluation, adaptive GK
  const double pw = 1.0 / (R + 1);
  auto direct = [&](std::size_t k, double a, double b, auto&& weight) {
    if (b <= a) return 0.0;
    const double tol = 1e-13 * ref[k];
    const std::size_t np = static_cast<std::size_t>(std::ceil((b - a) / pw));
    std::vector<double> part(np);
    for_each_index(np, opt.backend, [&](std::size_t i) {
      const double lo = a + (b - a) * double(i) / double(np), hi = a + (b - a) * double(i + 1) / double(np);
      auto g = [&](double t) { return t <= 0 ? 0.0 : bn_kernel(p, N, t) * (*W[k])(t) * weight(t); };
      part[i] = quad::gk_abs(g, lo, hi, tol * (hi - lo) / (b - a), 10).value;
    });
    Neumaier<double> acc;
    for (double v : part) acc.add(v);
    return acc.value();
  };
  auto one = [](double) { return 1.0; };
  // int g (1[t >= c] - step(t, c)) dt
  auto corr = [&](std::size_t k, double c) {
    return direct(k, c - delta, c, [&](double t) { return -step(t, c); }) +
           direct(k, c, c + delta, [&](double t) { return 1 - step(t, c); });
  };

  for (std::size_t k : live) {
    out[k].zone_gap = direct(k, 0.0, b0, one);
    out[k].zone_moment = corr(k, b0) - corr(k, b1);
    out[k].zone_tail = corr(k, b1) - corr(k, b2);
  }

  // grid part, shared kernel values
  const auto tab = weyl_grid(p, N, M);
  const std::int64_t jlo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor((b0 - delta) * double(M))));
  const std::int64_t jhi = static_cast<std::int64_t>(std::ceil((b2 + delta) * double(M)));
  const std::int64_t blk = 1 << 15;
  const std::size_t nb = static_cast<std::size_t>((jhi - jlo + blk) / blk);
  std::vector<double> part(nb * K * 2, 0.0);
  for_each_index(nb, opt.backend, [&](std::size_t b) {
    std::vector<Neumaier<double>> a2(K), a3(K);
    const std::int64_t lo = jlo + std::int64_t(b) * blk, hi = std::min(jhi + 1, lo + blk);
    for (std::int64_t j = lo; j < hi; ++j) {
      const double t = double(j) / double(M);
      const double s0 = step(t, b0), s1 = step(t, b1), s2 = step(t, b2);
      const double h2 = s0 - s1, h3 = s1 - s2;
      if (h2 == 0 && h3 == 0) continue;
      const cplx S = tab[static_cast<std::size_t>(j % std::int64_t(M))];
      const cplx I = continuous_weyl_fast(p, N, t);
      const double D = std::norm(S - I) / (Nd * Nd);
      for (std::size_t k : live) {
        const double w = D * (*W[k])(t);
        a2[k].add(w * h2);
        a3[k].add(w * h3);
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      part[(b * K + k) * 2] = a2[k].value();
      part[(b * K + k) * 2 + 1] = a3[k].value();
    }
  });
  for (std::size_t k : live) {
    Neumaier<double> z2, z3;
    for (std::size_t b = 0; b < nb; ++b) {
      z2.add(part[(b * K + k) * 2]);
      z3.add(part[(b * K + k) * 2 + 1]);
    }
    out[k].zone_moment += z2.value() / double(M);
    out[k].zone_tail += z3.value() / double(M);
    out[k].total = out[k].zone_gap + out[k].zone_moment + out[k].zone_tail;
    out[k].tail_bound = bound[k];
    out[k].t_cut = b2;
    out[k].grid = M;
  }
  for (std::size_t k = 0; k < K; ++k) {
    out[k].t_cut = b2;
    out[k].grid = M;
  }
  return out;
}

BnNorm bn_spectral_norm(const IntPolynomial& p, std::int64_t N, const KirillovFunction& f, const BnOptions& opt) {
  return bn_spectral_norms(p, N, {f}, opt).front();
}

std::vector<BnDecay> bn_decay(const IntPolynomial& p, const std::vector<std::int64_t>& Ns,
                              const std::vector<KirillovFunction>& fs, const BnOptions& opt) {
  if (Ns.size() < 3) throw ParameterError("bn_decay needs at least three N");
  std::vector<BnDecay> out(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    out[k].s = fs[k].s;
    out[k].Ns = Ns;
  }
  for (std::int64_t N : Ns) {
    auto r = bn_spectral_norms(p, N, fs, opt);
    for (std::size_t k = 0; k < fs.size(); ++k) out[k].norms.push_back(r[k].total);
  }
  for (auto& o : out) {
    std::vector<double> x(Ns.begin(), Ns.end());
    auto fit = loglog_fit(x, o.norms);
    o.slope = fit.slope;
    o.slope_stderr = fit.slope_stderr;
    o.residual_rms = fit.residual_rms;
    o.delta = -fit.slope / 2;
  }
  return out;
}

}  // namespace horo
