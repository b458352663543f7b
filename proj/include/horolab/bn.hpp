#pragma once
#include <cstdint>
#include <vector>

#include "horolab/parallel.hpp"
#include "horolab/polynomial.hpp"
#include "horolab/specfun.hpp"

namespace horo {

struct BnOptions {
  double alpha = 0.2;       // gap zone |t| <= N^{-(d-1+alpha)}
  double beta = 0.1;        // moment zone up to N^beta
  double tail_rel = 1e-13;  // cut-off once the envelope tail is this small against the Kirillov norm
  double knot_step = 0.005; // spacing in log t of the weight interpolant
  Backend backend = Backend::openmp;
};

struct BnNorm {
  double total = 0;
  double zone_gap = 0, zone_moment = 0, zone_tail = 0;
  double tail_bound = 0;  // envelope bound for |t| > t_cut, not included in total
  double t_gap = 0, t_moment = 0, t_cut = 0;
  std::size_t grid = 0;
  double s = 0;
};

// |S_N(t)/N - I_N(t)/N|^2 with S the Weyl sum and I its continuous counterpart
double bn_kernel(const IntPolynomial& p, std::int64_t N, double t);

// int |S_N/N - I_N/N|^2 |fhat|^2 |t|^{1-2s} dt split into the gap, moment and tail zones
BnNorm bn_spectral_norm(const IntPolynomial& p, std::int64_t N, const KirillovFunction& f, const BnOptions& opt = {});
// several test functions against one kernel evaluation
std::vector<BnNorm> bn_spectral_norms(const IntPolynomial& p, std::int64_t N, const std::vector<KirillovFunction>& fs,
                                      const BnOptions& opt = {});

struct BnDecay {
  double s = 0;
  std::vector<std::int64_t> Ns;
  std::vector<double> norms;
  double slope = 0, slope_stderr = 0, residual_rms = 0;
  double delta = 0;  // -slope / 2
};
std::vector<BnDecay> bn_decay(const IntPolynomial& p, const std::vector<std::int64_t>& Ns,
                              const std::vector<KirillovFunction>& fs, const BnOptions& opt = {});

}  // namespace horo
