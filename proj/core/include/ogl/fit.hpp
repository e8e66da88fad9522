#pragma once

#include <span>

namespace ogl {

/// Ordinary least-squares line y = slope x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fits log(y) = slope x + c; y must be positive.
LineFit fit_log_linear(std::span<const double> x, std::span<const double> y);

/// Fits log(y) = slope log(x) + c; both must be positive.
LineFit fit_log_log(std::span<const double> x, std::span<const double> y);

}  // namespace ogl
