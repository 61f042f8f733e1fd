#include "spde/exponent_fit.hpp"

#include <cmath>

#include "spde/errors.hpp"

namespace spde {

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4)
    throw DegenerateSamples("fit_exponent: need at least 4 samples");
  ExponentFit fit;
  fit.abscissae.reserve(samples.size());
  fit.values.reserve(samples.size());
  double prev = 0.0;
  bool first = true;
  for (const auto& [t, v] : samples) {
    if (t <= 0.0 || v <= 0.0)
      throw DegenerateSamples("fit_exponent: abscissae and values must be positive");
    if (!first && t >= prev)
      throw DegenerateSamples("fit_exponent: abscissae must be strictly decreasing");
    prev = t;
    first = false;
    fit.abscissae.push_back(t);
    fit.values.push_back(v);
  }

  const std::size_t n = samples.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(fit.abscissae[i]);
    ys[i] = std::log(fit.values[i]);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace spde
