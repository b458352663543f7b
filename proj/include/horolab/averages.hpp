#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "horolab/funcspace.hpp"
#include "horolab/parallel.hpp"
#include "horolab/polynomial.hpp"
#include "horolab/sl2.hpp"

namespace horo {

enum class SchemeKind { polynomial, primes, explicit_sequence };

class SamplingScheme {
 public:
  static SamplingScheme polynomial(const IntPolynomial& p);
  static SamplingScheme polynomial(std::vector<std::int64_t> coeffs) { return polynomial(IntPolynomial(std::move(coeffs))); }
  static SamplingScheme primes();
  // strictly increasing sequence with a_n <= C n^d
  static SamplingScheme explicit_sequence(std::vector<std::int64_t> seq, double growth_c, int degree);

  SchemeKind kind() const { return kind_; }
  int degree() const { return degree_; }
  double growth() const { return growth_; }
  const IntPolynomial& poly() const;
  // times n_0 .. n_{N-1}
  std::vector<i128> times(std::size_t N) const;
  std::string describe() const;

 private:
  SchemeKind kind_ = SchemeKind::polynomial;
  IntPolynomial poly_;
  std::vector<std::int64_t> seq_;
  double growth_ = 1;
  int degree_ = 1;
};

struct OrbitOptions {
  Precision precision = Precision::standard;
  bool verify = false;  // run the orbit backwards and check the drift
  double drift_tol = 1e-6;
};

// orbit points u_{n_i} x, i = 0..N-1, by incremental steps; optional drift report
std::vector<PointX> orbit_points(const PointX& x, std::size_t N, const SamplingScheme& s,
                                 const OrbitOptions& opt = {}, double* drift = nullptr);

double sparse_average(const TestFunction& f, const PointX& x, std::size_t N, const SamplingScheme& s,
                      const OrbitOptions& opt = {});
// A_N f(x) for every N in Ns (ascending) from a single orbit pass
std::vector<double> sparse_average_series(const TestFunction& f, const PointX& x,
                                          const std::vector<std::size_t>& Ns, const SamplingScheme& s,
                                          const OrbitOptions& opt = {});

struct ContinuousAverage {
  double value = 0;
  double error = 0;          // certified bound on |value - exact|
  std::uint64_t evaluations = 0;
};

ContinuousAverage continuous_average(const TestFunction& f, const PointX& x, double N, const SamplingScheme& s,
                                     double tol = 1e-3, std::uint64_t max_evals = 4'000'000'000ULL,
                                     Backend backend = Backend::openmp);

struct Discrepancy {
  double sparse = 0, continuous = 0, value = 0, error = 0;
};
Discrepancy discrepancy(const TestFunction& f, const PointX& x, std::size_t N, const SamplingScheme& s,
                        double tol = 1e-3, Backend backend = Backend::openmp);

std::vector<std::int64_t> first_primes(std::size_t N);
double prime_average(const TestFunction& f, const PointX& x, std::size_t N, const OrbitOptions& opt = {});

// #{(i, j) : n_i - n_j = k}, 0 <= i, j < N
std::int64_t difference_count(const SamplingScheme& s, std::size_t N, std::int64_t k);
std::vector<std::int64_t> lacunary_indices(double eps, std::int64_t N_max);

// <u_k f, f> by Monte Carlo
MeanEstimate empirical_correlation(const TestFunction& f, double k, std::size_t n_samples, std::uint64_t seed,
                                   double y_cap = 50.0, Backend backend = Backend::openmp);

struct DecayFit {
  std::vector<std::size_t> Ns;
  std::vector<double> norms, stderrs;
  bool fitted = false;
  double alpha = 0, alpha_stderr = 0, residual_rms = 0;
};

// Monte-Carlo estimates of ||A_N f||_2, one orbit per base point
DecayFit l2_norms(const TestFunction& f, const SamplingScheme& s, const std::vector<std::size_t>& Ns,
                  std::size_t n_samples, std::uint64_t seed, double y_cap = 50.0,
                  Backend backend = Backend::openmp);
// same with the orbit values replaced by i.i.d. standard normals (CLT oracle)
DecayFit l2_norms_surrogate(const std::vector<std::size_t>& Ns, std::size_t n_samples, std::uint64_t seed,
                            Backend backend = Backend::openmp);
// fills alpha: -slope of log norm against log N
void fit_decay(DecayFit& d);
DecayFit l2_decay_fit(const TestFunction& f, const SamplingScheme& s, const std::vector<std::size_t>& Ns,
                      std::size_t n_samples, std::uint64_t seed, double y_cap = 50.0,
                      Backend backend = Backend::openmp);

bool classify_good(const TestFunction& f, const PointX& x, std::size_t N, double gamma, const SamplingScheme& s,
                   const OrbitOptions& opt = {});
bool is_good_value(double average, std::size_t N, double gamma);

}  // namespace horo
