#pragma once

// Residual verifier for the deterministic non-uniqueness exhibit on
// [0,1] x [0,pi]:
//
//   y_tt = y_xx - (-d^2/dx^2)^{7/12} y_t + c(x, y),   y(t,0) = y(t,pi) = 0,
//   y(0,.) = y_t(0,.) = 0,
//
// solved by both y1 = 0 and y2 = tau^8 sin(2x). The fractional damping acts
// spectrally on the single excited mode sin(2x) (eigenvalue 4), time
// derivatives are analytic, so the residual is pure floating-point
// cancellation.

namespace spde {

struct ResidualReport {
  double max_residual_zero = 0.0;   // y1 = 0
  double max_residual_tau8 = 0.0;   // y2 = tau^8 sin(2x)
  double max_amplitude_tau8 = 0.0;  // sup |y2| (must stay inside the cutoff's plateau)
  // Per-term maxima of the y2 balance.
  double term_ytt_max = 0.0;
  double term_yxx_max = 0.0;
  double term_frac_max = 0.0;
  double term_c_max = 0.0;
};

ResidualReport counterexample_residual(int time_points, int space_points);

}  // namespace spde
