#include "spde/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spde/drift.hpp"

namespace spde {

ResidualReport counterexample_residual(int time_points, int space_points) {
  ResidualReport rep;
  static const double frac_mult = std::pow(4.0, 7.0 / 12.0);  // (-d_xx)^{7/12} on sin(2x)
  for (int i = 0; i < time_points; ++i) {
    const double tau = static_cast<double>(i) / (time_points - 1);
    const double t6 = std::pow(tau, 6);
    const double t7 = t6 * tau;
    const double t8 = t7 * tau;
    for (int j = 0; j < space_points; ++j) {
      const double x = std::numbers::pi * (j + 0.5) / space_points;
      const double s = std::sin(2.0 * x);

      // y1 = 0: every term vanishes except c(x, 0), which is zero.
      rep.max_residual_zero =
          std::max(rep.max_residual_zero, std::abs(counterexample_c(x, 0.0)));

      const double y = t8 * s;
      const double ytt = 56.0 * t6 * s;
      const double yxx = -4.0 * t8 * s;
      const double frac = frac_mult * 8.0 * t7 * s;  // (-d_xx)^{7/12} y_t
      const double c = counterexample_c(x, y);
      const double residual = ytt - yxx + frac - c;
      rep.max_residual_tau8 = std::max(rep.max_residual_tau8, std::abs(residual));
      rep.max_amplitude_tau8 = std::max(rep.max_amplitude_tau8, std::abs(y));
      rep.term_ytt_max = std::max(rep.term_ytt_max, std::abs(ytt));
      rep.term_yxx_max = std::max(rep.term_yxx_max, std::abs(yxx));
      rep.term_frac_max = std::max(rep.term_frac_max, std::abs(frac));
      rep.term_c_max = std::max(rep.term_c_max, std::abs(c));
    }
  }
  return rep;
}

}  // namespace spde
