#pragma once
#include <vector>

namespace horo {

struct LineFit {
  double slope = 0, intercept = 0;
  double slope_stderr = 0;  // from residual scatter
  double residual_rms = 0;
};

// ordinary least squares y = a + b x; optional per-point sigma on y propagates
// into slope_stderr in quadrature with the residual term
LineFit ols(const std::vector<double>& x, const std::vector<double>& y,
            const std::vector<double>& sigma_y = {});

// log-log fit of y ~ C x^slope
LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& sigma_y = {});

}  // namespace horo
