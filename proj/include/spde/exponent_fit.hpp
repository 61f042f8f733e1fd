#pragma once

#include <utility>
#include <vector>

namespace spde {

// Least-squares power-law fit in log-log coordinates: log v = slope*log t +
// intercept. Used to verify decay/blow-up exponents against their predicted
// values.
struct ExponentFit {
  std::vector<double> abscissae;  // strictly decreasing, positive
  std::vector<double> values;     // positive
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Requires >= 4 samples, strictly decreasing positive times and positive
// values; throws DegenerateSamples otherwise.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace spde
