#include "horolab/sl2.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>

#include "horolab/errors.hpp"

namespace horo {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double kEdgeTol = 1e-12;
constexpr int kMaxReduceSteps = 100000;

inline double rnd(double x) { return std::nearbyint(x); }
inline __float128 rnd(__float128 x) { return rintq(x); }
inline double absval(double x) { return std::fabs(x); }
inline __float128 absval(__float128 x) { return fabsq(x); }
inline bool finite_val(double x) { return std::isfinite(x); }
inline bool finite_val(__float128 x) { return !isinfq(x) && !isnanq(x); }

// Left multiply by SL2(Z) until g.i lies in the standard fundamental domain.
// Row operations only: translation T^-n and inversion S.
template <class R>
void gauss_reduce(R& a, R& b, R& c, R& d) {
  for (int it = 0; it < kMaxReduceSteps; ++it) {
    R den = c * c + d * d;
    if (!(den > 0) || !finite_val(den)) throw InvalidElementError("reduce: degenerate frame");
    R x = (a * c + b * d) / den;
    if (absval(x) > R(0.5 + kEdgeTol)) {
      R n = rnd(x);
      a -= n * c;
      b -= n * d;
      continue;
    }
    R r2 = (a * a + b * b) / den;
    if (r2 < R(1.0 - kEdgeTol)) {
      R ta = a, tb = b;
      a = -c;
      b = -d;
      c = ta;
      d = tb;
      continue;
    }
    return;
  }
  throw PrecisionError("reduce: Gauss reduction did not terminate");
}

double wrap_angle(double th) {
  th = std::fmod(th, two_pi);
  if (th < 0) th += two_pi;
  if (th >= two_pi) th -= two_pi;
  return th;
}

}  // namespace

bool GroupElement::finite() const {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

GroupElement make_element(double a, double b, double c, double d, double tol) {
  GroupElement g{a, b, c, d};
  if (!g.finite()) throw InvalidElementError("group element has non-finite entries");
  if (std::fabs(g.det() - 1.0) > tol) throw InvalidElementError("group element determinant differs from 1");
  return g;
}

GroupElement horocycle(double t) { return {1.0, t, 0.0, 1.0}; }

GroupElement rotation(double theta) {
  double s = std::sin(theta), c = std::cos(theta);
  return {c, s, -s, c};
}

GroupElement conjugate_drift(const GroupElement& h, double T) {
  return {h.a + T * h.c, h.b + T * (h.d - h.a) - T * T * h.c, h.c, h.d - T * h.c};
}

std::complex<double> mobius(const GroupElement& g, std::complex<double> z) {
  return (g.a * z + g.b) / (g.c * z + g.d);
}

GroupElement PointX::frame() const {
  double x = z.real(), y = z.imag();
  double sy = std::sqrt(y);
  double phi = 0.5 * theta;
  double cp = std::cos(phi), sp = std::sin(phi);
  // n(x) a(y) = (sy, x/sy; 0, 1/sy), times (cp, sp; -sp, cp)
  return {sy * cp - x / sy * sp, sy * sp + x / sy * cp, -sp / sy, cp / sy};
}

PointX make_point(double x, double y, double theta) {
  if (!(y > 0) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(theta))
    throw InvalidElementError("point must have finite coordinates and Im z > 0");
  PointX p;
  p.z = {x, y};
  p.theta = wrap_angle(theta);
  p.reduced = in_fundamental_domain(p.z);
  return p;
}

PointX point_from_frame(const GroupElement& g) {
  if (!g.finite()) throw InvalidElementError("non-finite frame");
  double den = g.c * g.c + g.d * g.d;
  if (!(den > 0)) throw InvalidElementError("degenerate frame");
  PointX p;
  p.z = {(g.a * g.c + g.b * g.d) / den, g.det() / den};
  if (!(p.z.imag() > 0)) throw InvalidElementError("frame maps i outside the upper half plane");
  p.theta = wrap_angle(-2.0 * std::atan2(g.c, g.d));
  p.reduced = in_fundamental_domain(p.z);
  return p;
}

PointX reduce(const GroupElement& g) {
  if (!g.finite() || !(g.det() > 0)) throw InvalidElementError("reduce: invalid element");
  double a = g.a, b = g.b, c = g.c, d = g.d;
  gauss_reduce(a, b, c, d);
  PointX p = point_from_frame({a, b, c, d});
  p.reduced = true;
  return p;
}

PointX reduce(const PointX& x) {
  if (!(x.z.imag() > 0) || !std::isfinite(x.z.real()) || !std::isfinite(x.z.imag()))
    throw InvalidElementError("reduce: point outside the upper half plane");
  return reduce(x.frame());
}

bool in_fundamental_domain(std::complex<double> z, double tol) {
  return std::fabs(z.real()) <= 0.5 + tol && std::norm(z) >= (1 - tol) * (1 - tol) && z.imag() > 0;
}

Orbit::Orbit(const PointX& x, Precision p, double max_block) : prec_(p), max_block_(max_block) {
  if (!(max_block > 0)) throw ParameterError("orbit block length must be positive");
  m_ = x.frame();
  if (prec_ == Precision::extended) {
    // rebuild the frame in binary128 so the initial point is represented exactly
    __float128 X = x.z.real(), Y = x.z.imag();
    __float128 sy = sqrtq(Y);
    __float128 phi = (__float128)0.5 * (__float128)x.theta;
    __float128 cp = cosq(phi), sp = sinq(phi);
    q_ = {sy * cp - X / sy * sp, sy * sp + X / sy * cp, -sp / sy, cp / sy};
  }
}

void Orbit::advance(double t) {
  if (!std::isfinite(t)) throw ParameterError("flow time must be finite");
  double left = t;
  while (left != 0) {
    double step = std::fabs(left) > max_block_ ? std::copysign(max_block_, left) : left;
    left -= step;
    if (prec_ == Precision::standard) {
      m_.b += step * m_.a;
      m_.d += step * m_.c;
      gauss_reduce(m_.a, m_.b, m_.c, m_.d);
    } else {
      __float128 s = step;
      q_.b += s * q_.a;
      q_.d += s * q_.c;
      gauss_reduce(q_.a, q_.b, q_.c, q_.d);
    }
  }
}

GroupElement Orbit::frame() const {
  if (prec_ == Precision::extended) return {(double)q_.a, (double)q_.b, (double)q_.c, (double)q_.d};
  return m_;
}

PointX Orbit::point() const {
  if (prec_ == Precision::standard) {
    GroupElement g = m_;
    gauss_reduce(g.a, g.b, g.c, g.d);
    PointX p = point_from_frame(g);
    p.reduced = true;
    return p;
  }
  Quad g = q_;
  gauss_reduce(g.a, g.b, g.c, g.d);
  __float128 den = g.c * g.c + g.d * g.d;
  PointX p;
  p.z = {(double)((g.a * g.c + g.b * g.d) / den), (double)((g.a * g.d - g.b * g.c) / den)};
  p.theta = wrap_angle(-2.0 * (double)atan2q(g.c, g.d));
  p.reduced = true;
  return p;
}

PointX flow_point(const PointX& x, double t, Precision p) {
  if (t == 0 && x.reduced) return x;
  Orbit o(x, p);
  o.advance(t);
  return o.point();
}

namespace {
std::vector<GroupElement> small_gamma() {
  std::vector<GroupElement> out;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d)
          if (a * d - b * c == 1) out.push_back({double(a), double(b), double(c), double(d)});
  return out;
}
const std::vector<GroupElement>& gamma_set() {
  static const std::vector<GroupElement> s = small_gamma();
  return s;
}
}  // namespace

double frame_distance(const GroupElement& f, const GroupElement& g) {
  double da = f.a - g.a, db = f.b - g.b, dc = f.c - g.c, dd = f.d - g.d;
  return std::sqrt(da * da + db * db + dc * dc + dd * dd);
}

double distance(const PointX& x, const PointX& y) {
  GroupElement fx = x.frame(), fy = y.frame();
  double best = INFINITY;
  for (const auto& g : gamma_set()) {
    best = std::min(best, frame_distance(fx, g * fy));
    best = std::min(best, frame_distance(fy, g * fx));
  }
  return best;
}

PointX haar_sample(Stream& rng, double y_cap) {
  if (!(y_cap > 1)) throw ParameterError("haar_sample: y_cap must exceed 1");
  const double inv_lo = 2.0 / std::sqrt(3.0), inv_hi = 1.0 / y_cap;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    // density 1/y^2 on [sqrt3/2, y_cap] <=> 1/y uniform
    double w = rng.uniform(inv_hi, inv_lo);
    double y = 1.0 / w;
    double x = rng.uniform() - 0.5;
    double th = two_pi * rng.uniform();
    if (x * x + y * y < 1.0) continue;
    PointX p;
    p.z = {x, y};
    p.theta = th;
    p.reduced = true;
    return p;
  }
  throw SamplingError("haar_sample: rejection retry cap reached");
}

double haar_truncation_error(double y_cap) { return 3.0 / (std::numbers::pi * y_cap); }

}  // namespace horo
