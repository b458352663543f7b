#include "horolab/fit.hpp"

#include <cmath>

#include "horolab/errors.hpp"

namespace horo {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y,
            const std::vector<double>& sigma_y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw ParameterError("ols: size mismatch");
  if (n < 2) throw DegenerateFitError("ols: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw DegenerateFitError("ols: abscissae coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.residual_rms = std::sqrt(rss / n);
  double var = n > 2 ? rss / (n - 2) / sxx : 0.0;
  if (!sigma_y.empty()) {
    // slope = sum w_i y_i with w_i = (x_i - mx)/sxx
    double prop = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = (x[i] - mx) / sxx;
      prop += w * w * sigma_y[i] * sigma_y[i];
    }
    var += prop;
  }
  f.slope_stderr = std::sqrt(var);
  return f;
}

LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& sigma_y) {
  std::vector<double> lx, ly, ls;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw DegenerateFitError("loglog_fit: nonpositive value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    if (!sigma_y.empty()) ls.push_back(sigma_y[i] / y[i]);
  }
  return ols(lx, ly, ls);
}

}  // namespace horo
