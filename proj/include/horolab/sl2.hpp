#pragma once
#include <complex>
#include <vector>

#include "horolab/rng.hpp"

namespace horo {

struct GroupElement {
  double a = 1, b = 0, c = 0, d = 1;
  double det() const { return a * d - b * c; }
  GroupElement inverse() const { return {d, -b, -c, a}; }
  bool finite() const;
  static GroupElement identity() { return {}; }
};

GroupElement operator*(const GroupElement& x, const GroupElement& y);
// throws InvalidElementError unless det = 1 within tol and entries finite
GroupElement make_element(double a, double b, double c, double d, double tol = 1e-12);

GroupElement horocycle(double t);
GroupElement rotation(double theta);
// u_T h u_{-T}, closed form
GroupElement conjugate_drift(const GroupElement& h, double T);
std::complex<double> mobius(const GroupElement& g, std::complex<double> z);

// point of the unit tangent bundle of the modular surface
struct PointX {
  std::complex<double> z{0, 1};
  double theta = 0;  // [0, 2pi)
  bool reduced = true;

  // canonical frame n(x) a(y) k(theta/2)
  GroupElement frame() const;
};

PointX make_point(double x, double y, double theta);
// frame -> (z, theta) without reduction
PointX point_from_frame(const GroupElement& g);
PointX reduce(const GroupElement& g);
PointX reduce(const PointX& x);
bool in_fundamental_domain(std::complex<double> z, double tol = 1e-9);

enum class Precision { standard, extended };

// A point moving along the horocycle flow. The frame is kept in double or,
// for validation runs, in binary128; long flows are split into blocks and
// reduced after every block.
class Orbit {
 public:
  explicit Orbit(const PointX& x, Precision p = Precision::standard, double max_block = 65536.0);
  void advance(double t);
  PointX point() const;
  GroupElement frame() const;
  Precision precision() const { return prec_; }

 private:
  struct Quad { __float128 a, b, c, d; };
  Precision prec_;
  double max_block_;
  GroupElement m_;
  Quad q_{};
};

PointX flow_point(const PointX& x, double t, Precision p = Precision::standard);

double distance(const PointX& x, const PointX& y);
double frame_distance(const GroupElement& f, const GroupElement& g);

// Haar measure restricted to the fundamental domain truncated at Im z <= y_cap
PointX haar_sample(Stream& rng, double y_cap = 50.0);
// mass lost by truncation relative to the full normalised measure
double haar_truncation_error(double y_cap);

}  // namespace horo
