#include "ogl/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ogl {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two paired points");
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

namespace {

std::vector<double> logs(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double e : v) {
    if (!(e > 0.0)) throw std::invalid_argument("log fit: values must be positive");
    out.push_back(std::log(e));
  }
  return out;
}

}  // namespace

LineFit fit_log_linear(std::span<const double> x, std::span<const double> y) {
  const auto ly = logs(y);
  return fit_line(x, ly);
}

LineFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  const auto lx = logs(x);
  const auto ly = logs(y);
  return fit_line(lx, ly);
}

}  // namespace ogl
