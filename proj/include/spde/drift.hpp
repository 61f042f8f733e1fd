#pragma once

// Drift specifications B~ : H -> U given by per-mode coefficient functions.
// Every drift declares its Hoelder exponent theta and per-mode Hoelder-norm
// bounds; the bounds are inputs to the series condition and are falsifiable by
// sampling (sampled_holder_ratio), not derived symbolically.

#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace spde {

struct SpectralModel;

struct DriftSpec {
  enum class Kind { zero, mode_coefficients, nemytskii, counterexample };

  Kind kind = Kind::zero;
  double theta = 0.9;

  // mode_coefficients: out_j = amp_j * w(z_j + velocity_mix * v_j + phase_j)
  // with w(s) = sgn(sin s)|sin s|^theta and amp_j = amplitude * (j+1)^{-decay}.
  double amplitude = 0.0;
  double decay = 0.0;
  double velocity_mix = 0.7;

  // nemytskii / counterexample: pointwise c(xi, y, y') on (0, pi), applied in
  // physical space on a midpoint grid and projected back onto the sine modes.
  std::function<double(double, double, double)> pointwise;
  double c1_bound = 0.0;  // Hoelder coefficient: |c(xi,p) - c(xi,q)| <= c1 |p-q|^theta
  double c2_bound = 0.0;  // uniform bound |c| <= c2
  int grid_points = 512;

  static DriftSpec zero();
  static DriftSpec mode_coefficients(double amplitude, double theta, double decay = 0.0);
  static DriftSpec nemytskii(std::function<double(double, double, double)> c, double theta,
                             double c1, double c2, int grid_points = 512);

  bool is_zero() const { return kind == Kind::zero; }
  bool is_pointwise() const {
    return kind == Kind::nemytskii || kind == Kind::counterexample;
  }

  // Declared bound on || <B~(.), e_j> ||_{C_b^theta}.
  double mode_norm(int j) const;
  // Exponent p with mode_norm(j) ~ j^{-p} (0 for uniformly bounded norms).
  double mode_norm_decay() const { return kind == Kind::mode_coefficients ? decay : 0.0; }
  // Bound on ||B~||_infty over the first n modes.
  double sup_norm(int n) const;

  // Direct evaluation of the per-mode coefficient functions (engine-facing for
  // kind == mode_coefficients; pointwise kinds go through DriftEvaluator).
  void eval_modes(std::span<const double> z, std::span<const double> v,
                  std::span<double> out) const;
};

// The cutoff of the non-uniqueness example: smooth, 0 <= phi <= 1, phi = 1 on
// (-2, 2), phi = 0 outside (-3, 3).
double counterexample_bump(double y);

// Nemytskii drift c(xi, y) of the deterministic non-uniqueness example:
//   c = phi(y) (56 sgn(sin 2xi)|sin 2xi|^{1/4}|y|^{3/4}
//               + 8*4^{7/12} sgn(sin 2xi)|sin 2xi|^{1/8}|y|^{7/8} + 4y).
double counterexample_c(double xi, double y);
DriftSpec counterexample_drift(int grid_points = 512);

// Sampling check of the declared per-mode Hoelder norms: draws `samples` state
// pairs in the ball of radius `radius`, returns the largest observed ratio
// |out_j(h1) - out_j(h2)| / (mode_norm(j) * ||h1 - h2||^theta); values <= 1
// mean the declaration holds on the sample.
double sampled_holder_ratio(const DriftSpec& drift, const SpectralModel& model, int samples,
                            double radius, std::uint64_t seed);

}  // namespace spde
