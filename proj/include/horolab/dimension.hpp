#pragma once
#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "horolab/averages.hpp"
#include "horolab/funcspace.hpp"
#include "horolab/parallel.hpp"
#include "horolab/rng.hpp"
#include "horolab/sl2.hpp"

namespace horo {

using Rational = boost::rational<std::int64_t>;

enum class BoundMode { mixing, spectral, gap_free };
BoundMode parse_bound_mode(const std::string& s);
std::string to_string(BoundMode m);

// mixing / spectral: 3 - a/d with a = min{1, d*rate}/2; gap_free: max{3 - rate/d, 2}
double predicted_bound(BoundMode mode, int d, double rate);
Rational predicted_bound_exact(BoundMode mode, int d, Rational rate);

// (6d + 5g - 2a + 5e) / (2d + g + e)
double packing_ratio(double d, double gamma, double alpha2, double eps);
// the same written as 3 - (2a - 2g - 2e) / (2d + g + e)
double packing_ratio_difference_form(double d, double gamma, double alpha2, double eps);

// 1 - N^{2g + e - 2a}, clamped to [0, 1]
double good_measure_bound(double N, double gamma, double alpha2, double eps);

// box in (Re z, Im z, theta) with cubic cells of side delta; must sit in the fundamental domain
// below the cusp cap
struct GridSpec {
  double x0 = -0.5, x1 = 0.5;
  double y0 = 1.0, y1 = 2.0;
  double th0 = 0.0, th1 = 6.283185307179586;
  double delta = 0.1;
  double y_cap = 50.0;

  void validate() const;
  std::size_t nx() const;
  std::size_t ny() const;
  std::size_t nth() const;
  std::size_t cells() const { return nx() * ny() * nth(); }
  PointX center(std::size_t idx) const;
  // uniform point in cell idx
  PointX sample(std::size_t idx, Stream& rng) const;
};

enum class CellProbe { center, three };

struct BoxOptions {
  CellProbe probe = CellProbe::center;
  std::uint64_t seed = 1;      // only used by the three-probe mode
  std::size_t budget = 1'000'000;
  double alpha2 = 0.5, eps = 0.0;  // for the reported theoretical ratio
  bool keep_cells = false;
  Backend backend = Backend::openmp;
};

struct BadSetEstimate {
  std::size_t N = 0;
  double gamma = 0, delta = 0;
  std::size_t good = 0, bad = 0, total = 0;
  double empirical_ratio = 0;  // -log(E) / log(delta) at this delta; NaN when E = 0
  double bad_fraction = 0, fraction_stderr = 0;
  double packing = 0;          // packing_ratio(d, gamma, alpha2, eps)
  std::vector<std::uint8_t> cell_good;  // filled with keep_cells
};

BadSetEstimate box_count_bad(const TestFunction& f, std::size_t N, double gamma, const GridSpec& grid,
                             const SamplingScheme& scheme, const BoxOptions& opt = {});

struct IsolationReport {
  std::size_t N = 0;
  double gamma = 0, gamma_prime = 0, radius = 0;
  bool vacuous = false;  // gamma' <= 0: the implication holds for any bounded f and says nothing
  double x_average = 0;
  std::size_t probes = 0, good = 0;
  double fraction = 0;
  double max_probe_average = 0, max_probe_distance = 0;
};

// probes y with distance(x, y) < N^{-2d-gamma}; counts those that are (N, gamma')-good
IsolationReport isolation_probe(const TestFunction& f, const PointX& x, std::size_t N, double gamma,
                                std::size_t n_probes, Stream& rng, const SamplingScheme& scheme);
// gamma - log_N(1 + 3 lip)
double isolation_gamma_prime(double gamma, std::size_t N, double lip);

}  // namespace horo
