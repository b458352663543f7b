#include "horolab/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/errors.hpp"

namespace horo {

IntPolynomial::IntPolynomial(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) {
  while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
  if (c_.empty() || (c_.size() == 1 && c_[0] == 0)) throw ParameterError("polynomial must be nonzero");
}

i128 IntPolynomial::operator()(std::int64_t n) const {
  i128 acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    i128 t;
    if (__builtin_mul_overflow(acc, static_cast<i128>(n), &t) ||
        __builtin_add_overflow(t, static_cast<i128>(*it), &acc))
      throw OverflowError("polynomial value exceeds 127 bits");
  }
  return acc;
}

double IntPolynomial::eval(double u) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + static_cast<double>(*it);
  return acc;
}

double IntPolynomial::derivative(double u) const {
  double acc = 0;
  for (int k = degree(); k >= 1; --k) acc = acc * u + k * static_cast<double>(c_[k]);
  return acc;
}

double IntPolynomial::second_derivative(double u) const {
  double acc = 0;
  for (int k = degree(); k >= 2; --k) acc = acc * u + double(k) * (k - 1) * static_cast<double>(c_[k]);
  return acc;
}

double IntPolynomial::derivative_bound(double u) const {
  double au = std::abs(u), acc = 0;
  for (int k = degree(); k >= 1; --k) acc = acc * au + k * std::abs(static_cast<double>(c_[k]));
  return acc;
}

i128 IntPolynomial::range(std::int64_t N) const {
  if (N <= 0) return 0;
  i128 lo = (*this)(0), hi = lo;
  for (std::int64_t n = 1; n < N; ++n) {
    i128 v = (*this)(n);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

std::vector<double> IntPolynomial::shifted_increment(std::int64_t n) const {
  const int d = degree();
  std::vector<double> q(d + 1, 0.0);
  for (int k = 1; k <= d; ++k) {
    i128 acc = 0;
    for (int j = k; j <= d; ++j) {
      i128 binom = 1;
      for (int r = 0; r < k; ++r) binom = binom * (j - r) / (r + 1);
      i128 pw = 1;
      for (int r = 0; r < j - k; ++r) pw *= n;
      acc += i128(c_[j]) * binom * pw;
    }
    q[k] = static_cast<double>(acc);
  }
  return q;
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string IntPolynomial::str() const {
  std::string s;
  for (int k = degree(); k >= 0; --k) {
    if (c_[k] == 0) continue;
    if (!s.empty()) s += c_[k] > 0 ? " + " : " - ";
    else if (c_[k] < 0) s += "-";
    auto a = std::abs(c_[k]);
    if (a != 1 || k == 0) s += std::to_string(a);
    if (k >= 1) s += "n";
    if (k >= 2) s += "^" + std::to_string(k);
  }
  return s;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) { s.push_back(char('0' + int(u % 10))); u /= 10; }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {
// frac(x*t) for integer-valued x with |x| < 2^53: the product and its rounding
// error are both exact doubles
double frac_exact(double x, double t) {
  double p = x * t;
  double e = std::fma(x, t, -p);
  double f = p - std::floor(p);
  f += e;
  return f - std::floor(f);
}
}  // namespace

double frac_mul(i128 P, double t) {
  // P = hi * 2^32 + lo, 0 <= lo < 2^32
  i128 lo = P & 0xffffffff;
  i128 hi = (P - lo) >> 32;
  if (hi > (i128(1) << 52) || hi < -(i128(1) << 52)) throw OverflowError("frac_mul: integer too wide");
  double f = frac_exact(static_cast<double>(lo), t);
  if (hi != 0) {
    double f_hi = frac_exact(static_cast<double>(hi), t * 4294967296.0);
    f += f_hi;
  }
  return f - std::floor(f);
}

}  // namespace horo
