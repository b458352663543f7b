#include "horolab/averages.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "horolab/errors.hpp"
#include "horolab/fit.hpp"

namespace horo {

SamplingScheme SamplingScheme::polynomial(const IntPolynomial& p) {
  if (p.degree() < 1) throw ParameterError("sampling polynomial must be non-constant");
  SamplingScheme s;
  s.kind_ = SchemeKind::polynomial;
  s.poly_ = p;
  s.degree_ = p.degree();
  double c = 0;
  for (auto v : p.coeffs()) c += std::fabs(double(v));
  s.growth_ = c;
  return s;
}

SamplingScheme SamplingScheme::primes() {
  SamplingScheme s;
  s.kind_ = SchemeKind::primes;
  s.degree_ = 1;
  s.growth_ = 2;  // p_n <= 2 n log n, loosely; only informational
  return s;
}

SamplingScheme SamplingScheme::explicit_sequence(std::vector<std::int64_t> seq, double growth_c, int degree) {
  if (seq.empty()) throw ParameterError("explicit sequence is empty");
  if (degree < 1 || !(growth_c > 0)) throw ParameterError("explicit sequence needs degree >= 1 and C > 0");
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i] <= seq[i - 1]) throw ParameterError("explicit sequence must be strictly increasing");
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (double(seq[i]) > growth_c * std::pow(double(i + 1), degree) + 1e-9)
      throw ParameterError("explicit sequence violates a_n <= C (n+1)^d");
  SamplingScheme s;
  s.kind_ = SchemeKind::explicit_sequence;
  s.seq_ = std::move(seq);
  s.growth_ = growth_c;
  s.degree_ = degree;
  return s;
}

const IntPolynomial& SamplingScheme::poly() const {
  if (kind_ != SchemeKind::polynomial) throw ParameterError("scheme is not polynomial");
  return poly_;
}

std::vector<i128> SamplingScheme::times(std::size_t N) const {
  std::vector<i128> t(N);
  switch (kind_) {
    case SchemeKind::polynomial:
      for (std::size_t n = 0; n < N; ++n) t[n] = poly_(static_cast<std::int64_t>(n));
      break;
    case SchemeKind::primes: {
      auto p = first_primes(N);
      for (std::size_t n = 0; n < N; ++n) t[n] = p[n];
      break;
    }
    case SchemeKind::explicit_sequence:
      if (N > seq_.size()) throw ParameterError("explicit sequence shorter than N");
      for (std::size_t n = 0; n < N; ++n) t[n] = seq_[n];
      break;
  }
  return t;
}

std::string SamplingScheme::describe() const {
  switch (kind_) {
    case SchemeKind::polynomial: return "polynomial " + poly_.str();
    case SchemeKind::primes: return "primes";
    case SchemeKind::explicit_sequence: return "explicit sequence of length " + std::to_string(seq_.size());
  }
  return "";
}

namespace {

double step_as_double(i128 d) {
  if (d > (i128(1) << 53) || d < -(i128(1) << 53)) throw OverflowError("orbit step exceeds 2^53");
  return static_cast<double>(d);
}

// walks the orbit, calling visit(i, point) for each i
template <class Visit>
void walk_orbit(const PointX& x, const std::vector<i128>& t, const OrbitOptions& opt, double* drift, Visit&& visit) {
  if (t.empty()) return;
  Orbit o(x, opt.precision);
  o.advance(step_as_double(t[0]));
  visit(0, o.point());
  for (std::size_t i = 1; i < t.size(); ++i) {
    o.advance(step_as_double(t[i] - t[i - 1]));
    visit(i, o.point());
  }
  if (opt.verify || drift) {
    for (std::size_t i = t.size() - 1; i >= 1; --i) o.advance(-step_as_double(t[i] - t[i - 1]));
    o.advance(-step_as_double(t[0]));
    double dr = distance(o.point(), x.reduced ? x : reduce(x));
    if (drift) *drift = dr;
    if (opt.verify && dr > opt.drift_tol)
      throw PrecisionError("orbit reversibility drift " + std::to_string(dr) + " exceeds tolerance");
  }
}

}  // namespace

std::vector<PointX> orbit_points(const PointX& x, std::size_t N, const SamplingScheme& s, const OrbitOptions& opt,
                                 double* drift) {
  std::vector<PointX> pts(N);
  walk_orbit(x, s.times(N), opt, drift, [&](std::size_t i, const PointX& p) { pts[i] = p; });
  return pts;
}

double sparse_average(const TestFunction& f, const PointX& x, std::size_t N, const SamplingScheme& s,
                      const OrbitOptions& opt) {
  if (N < 1) throw ParameterError("sparse_average: N must be >= 1");
  Neumaier<double> acc;
  walk_orbit(x, s.times(N), opt, nullptr, [&](std::size_t, const PointX& p) { acc.add(f(p)); });
  return acc.value() / double(N);
}

std::vector<double> sparse_average_series(const TestFunction& f, const PointX& x,
                                          const std::vector<std::size_t>& Ns, const SamplingScheme& s,
                                          const OrbitOptions& opt) {
  if (Ns.empty()) return {};
  if (!std::is_sorted(Ns.begin(), Ns.end()) || Ns.front() < 1) throw ParameterError("Ns must be ascending and >= 1");
  std::vector<double> out(Ns.size());
  Neumaier<double> acc;
  std::size_t next = 0;
  walk_orbit(x, s.times(Ns.back()), opt, nullptr, [&](std::size_t i, const PointX& p) {
    acc.add(f(p));
    while (next < Ns.size() && Ns[next] == i + 1) out[next++] = acc.value() / double(i + 1);
  });
  return out;
}

ContinuousAverage continuous_average(const TestFunction& f, const PointX& x, double N, const SamplingScheme& s,
                                     double tol, std::uint64_t max_evals, Backend backend) {
  if (!(N >= 1)) throw ParameterError("continuous_average: N must be >= 1");
  if (!(tol > 0)) throw ParameterError("continuous_average: tol must be positive");
  const auto& p = s.poly();
  const std::size_t units = static_cast<std::size_t>(std::ceil(N));
  // anchors u_{p(n)} x at the integers
  std::vector<GroupElement> anchors(units);
  {
    auto t = s.times(units);
    Orbit o(x);
    o.advance(step_as_double(t[0]));
    anchors[0] = o.frame();
    for (std::size_t n = 1; n < units; ++n) {
      o.advance(step_as_double(t[n] - t[n - 1]));
      anchors[n] = o.frame();
    }
  }
  std::vector<std::uint64_t> panels(units);
  std::vector<double> len(units), lg(units);
  std::uint64_t total = 0;
  for (std::size_t n = 0; n < units; ++n) {
    len[n] = std::min(1.0, N - double(n));
    double speed = std::hypot(anchors[n].a, anchors[n].c);
    lg[n] = f.lip * p.derivative_bound(double(n) + len[n]) * speed;
    // midpoint error on a Lipschitz integrand: lg * len^2 / (4 m)
    double m = std::ceil(lg[n] * len[n] * len[n] / (4 * tol * len[n]));
    panels[n] = static_cast<std::uint64_t>(std::max(1.0, m));
    total += panels[n];
    if (total > max_evals) throw QuadratureError("continuous_average: evaluation budget exceeded");
  }
  std::vector<double> part(units), err(units);
  for_each_index(units, backend, [&](std::size_t n) {
    auto q = p.shifted_increment(static_cast<std::int64_t>(n));
    const std::uint64_t m = panels[n];
    const double h = len[n] / double(m);
    Neumaier<double> acc;
    for (std::uint64_t k = 0; k < m; ++k) {
      double dt = horner(q, (double(k) + 0.5) * h);
      GroupElement g = anchors[n];
      g.b += dt * g.a;
      g.d += dt * g.c;
      acc.add(f(reduce(g)));
    }
    part[n] = acc.value() * h;
    err[n] = lg[n] * len[n] * h / 4;
  });
  ContinuousAverage r;
  Neumaier<double> v, e;
  for (std::size_t n = 0; n < units; ++n) {
    v.add(part[n]);
    e.add(err[n]);
  }
  r.value = v.value() / N;
  r.error = e.value() / N;
  r.evaluations = total;
  return r;
}

Discrepancy discrepancy(const TestFunction& f, const PointX& x, std::size_t N, const SamplingScheme& s, double tol,
                        Backend backend) {
  Discrepancy d;
  d.sparse = sparse_average(f, x, N, s);
  auto c = continuous_average(f, x, double(N), s, tol, 4'000'000'000ULL, backend);
  d.continuous = c.value;
  d.value = d.sparse - d.continuous;
  d.error = c.error;
  return d;
}

std::vector<std::int64_t> first_primes(std::size_t N) {
  if (N == 0) return {};
  if (N > 50'000'000) throw ResourceError("first_primes: sieve capacity exceeded");
  double n = double(N);
  std::size_t limit = N < 6 ? 15 : static_cast<std::size_t>(n * (std::log(n) + std::log(std::log(n)))) + 10;
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::int64_t> out;
  out.reserve(N);
  for (std::size_t i = 2; i <= limit && out.size() < N; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::int64_t>(i));
    for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  if (out.size() < N) throw ResourceError("first_primes: sieve bound too small");
  return out;
}

double prime_average(const TestFunction& f, const PointX& x, std::size_t N, const OrbitOptions& opt) {
  return sparse_average(f, x, N, SamplingScheme::primes(), opt);
}

std::int64_t difference_count(const SamplingScheme& s, std::size_t N, std::int64_t k) {
  if (N < 1) throw ParameterError("difference_count: N must be >= 1");
  auto t = s.times(N);
  std::unordered_map<std::int64_t, std::int64_t> cnt;
  for (auto v : t) ++cnt[static_cast<std::int64_t>(v)];
  std::int64_t total = 0;
  for (auto v : t) {
    auto it = cnt.find(static_cast<std::int64_t>(v) - k);
    if (it != cnt.end()) total += it->second;
  }
  return total;
}

std::vector<std::int64_t> lacunary_indices(double eps, std::int64_t N_max) {
  if (!(eps > 0)) throw ParameterError("lacunary_indices: eps must be positive");
  std::vector<std::int64_t> out;
  for (int m = 0;; ++m) {
    double v = std::pow(1 + eps, m);
    auto iv = static_cast<std::int64_t>(std::floor(v * (1 + 1e-12)));
    if (iv > N_max) break;
    if (out.empty() || iv > out.back()) out.push_back(iv);
  }
  return out;
}

MeanEstimate empirical_correlation(const TestFunction& f, double k, std::size_t n, std::uint64_t seed, double y_cap,
                                   Backend backend) {
  if (n < 100) throw ParameterError("empirical_correlation: need at least 100 samples");
  const std::size_t nb = (n + kSampleBlock - 1) / kSampleBlock;
  std::vector<Moments> parts(nb);
  for_each_index(nb, backend, [&](std::size_t b) {
    Stream rng(mix_seed(seed, b));
    std::size_t lo = b * kSampleBlock, hi = std::min(n, lo + kSampleBlock);
    Moments m;
    for (std::size_t i = lo; i < hi; ++i) {
      auto x = haar_sample(rng, y_cap);
      m.add(f(flow_point(x, k)) * f(x));
    }
    parts[b] = m;
  });
  Moments tot;
  for (auto& p : parts) tot.merge(p);
  return {tot.mean, tot.stderr_of_mean()};
}

namespace {
constexpr std::size_t kOrbitBlock = 64;  // base points per substream

DecayFit finish_norms(const std::vector<std::size_t>& Ns, std::vector<std::vector<Moments>>& parts) {
  DecayFit d;
  d.Ns = Ns;
  for (std::size_t j = 0; j < Ns.size(); ++j) {
    Moments tot;
    for (auto& p : parts) tot.merge(p[j]);
    double norm = std::sqrt(std::max(0.0, tot.mean));
    d.norms.push_back(norm);
    d.stderrs.push_back(norm > 0 ? tot.stderr_of_mean() / (2 * norm) : 0.0);
  }
  return d;
}

void check_Ns(const std::vector<std::size_t>& Ns) {
  if (Ns.empty()) throw ParameterError("Ns is empty");
  if (!std::is_sorted(Ns.begin(), Ns.end()) || Ns.front() < 1) throw ParameterError("Ns must be ascending and >= 1");
}
}  // namespace

DecayFit l2_norms(const TestFunction& f, const SamplingScheme& s, const std::vector<std::size_t>& Ns,
                  std::size_t n_samples, std::uint64_t seed, double y_cap, Backend backend) {
  check_Ns(Ns);
  if (n_samples < 2) throw ParameterError("l2_norms: need at least two samples");
  const std::size_t nb = (n_samples + kOrbitBlock - 1) / kOrbitBlock;
  const auto times = s.times(Ns.back());
  std::vector<std::vector<Moments>> parts(nb, std::vector<Moments>(Ns.size()));
  for_each_index(nb, backend, [&](std::size_t b) {
    Stream rng(mix_seed(seed, b));
    std::size_t lo = b * kOrbitBlock, hi = std::min(n_samples, lo + kOrbitBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      auto x = haar_sample(rng, y_cap);
      Neumaier<double> acc;
      std::size_t next = 0;
      walk_orbit(x, times, OrbitOptions{}, nullptr, [&](std::size_t k, const PointX& p) {
        acc.add(f(p));
        while (next < Ns.size() && Ns[next] == k + 1) {
          double a = acc.value() / double(k + 1);
          parts[b][next++].add(a * a);
        }
      });
    }
  });
  return finish_norms(Ns, parts);
}

DecayFit l2_norms_surrogate(const std::vector<std::size_t>& Ns, std::size_t n_samples, std::uint64_t seed,
                            Backend backend) {
  check_Ns(Ns);
  const std::size_t nb = (n_samples + kOrbitBlock - 1) / kOrbitBlock;
  std::vector<std::vector<Moments>> parts(nb, std::vector<Moments>(Ns.size()));
  for_each_index(nb, backend, [&](std::size_t b) {
    Stream rng(mix_seed(seed, b));
    std::size_t lo = b * kOrbitBlock, hi = std::min(n_samples, lo + kOrbitBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      double acc = 0;
      std::size_t next = 0;
      for (std::size_t k = 0; k < Ns.back(); ++k) {
        acc += rng.normal();
        while (next < Ns.size() && Ns[next] == k + 1) {
          double a = acc / double(k + 1);
          parts[b][next++].add(a * a);
        }
      }
    }
  });
  return finish_norms(Ns, parts);
}

void fit_decay(DecayFit& d) {
  for (double v : d.norms)
    if (!(v > 0)) throw DegenerateFitError("decay fit: non-positive norm estimate");
  std::vector<double> x(d.Ns.begin(), d.Ns.end());
  auto lf = loglog_fit(x, d.norms, d.stderrs);
  d.alpha = -lf.slope;
  d.alpha_stderr = lf.slope_stderr;
  d.residual_rms = lf.residual_rms;
  d.fitted = true;
}

DecayFit l2_decay_fit(const TestFunction& f, const SamplingScheme& s, const std::vector<std::size_t>& Ns,
                      std::size_t n_samples, std::uint64_t seed, double y_cap, Backend backend) {
  auto d = l2_norms(f, s, Ns, n_samples, seed, y_cap, backend);
  fit_decay(d);
  return d;
}

bool is_good_value(double average, std::size_t N, double gamma) {
  return std::fabs(average) <= std::pow(double(N), -gamma);
}

bool classify_good(const TestFunction& f, const PointX& x, std::size_t N, double gamma, const SamplingScheme& s,
                   const OrbitOptions& opt) {
  if (!(gamma > 0)) throw ParameterError("classify_good: gamma must be positive");
  return is_good_value(sparse_average(f, x, N, s, opt), N, gamma);
}

}  // namespace horo
