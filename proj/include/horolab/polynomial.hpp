#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace horo {

using i128 = __int128;

// integer-coefficient polynomial, coefficients in increasing degree
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<std::int64_t> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<std::int64_t>& coeffs() const { return c_; }

  // exact value; throws OverflowError if it leaves 127 bits
  i128 operator()(std::int64_t n) const;
  // floating evaluation (Horner) of p and p'
  double eval(double u) const;
  double derivative(double u) const;
  double second_derivative(double u) const;
  // upper bound for |p'| on [0, u]
  double derivative_bound(double u) const;
  // max p(n) - min p(n) over 0 <= n < N (exact)
  i128 range(std::int64_t N) const;
  // coefficients of h -> p(n + h) - p(n), formed exactly then rounded
  std::vector<double> shifted_increment(std::int64_t n) const;
  std::string str() const;

 private:
  std::vector<std::int64_t> c_;
};

double horner(const std::vector<double>& c, double x);

// frac(P * t) in [0,1), accurate to a few ulps even when P*t is huge
double frac_mul(i128 P, double t);

std::string to_string(i128 v);

}  // namespace horo
