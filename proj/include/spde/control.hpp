#pragma once

// Explicit null control for the truncated damped system
//
//   dY = A_n Y dtau + G_n u(tau) dtau,   Y(0) = h,
//
// built from the profile Phi_t(tau) = C_m tau^m (t - tau) with ∫ Phi_t = 1 and
// the inverse K = [G_n | A_n G_n]^{-1}: u = K_1 psi_t + K_2 psi_t' with
// psi_t(tau) = -Phi_t(tau) e^{tau A_n} h, u(0) = u(t) = 0. The control steers
// h to zero exactly; its L^2(0,t;U) energy reproduces the blow-up exponents
// -(1/2 + gamma/alpha) (gamma > alpha, and always for h = G_n a) and -3/2
// (gamma <= alpha) as t -> 0.

#include <span>
#include <vector>

#include "spde/exponent_fit.hpp"
#include "spde/model.hpp"

namespace spde {

struct PhiProfile {
  double t = 1.0;
  int m = 1;
  double c_m = 0.0;  // (m+1)(m+2)/t^{m+2}, so that ||Phi_t||_{L^1} = 1
  double value(double tau) const;
  double derivative(double tau) const;
};

// Requires t > 0 and m >= 1.
PhiProfile phi_profile(double t, int m);

struct ControlProblem {
  std::vector<EigenBlock> blocks;   // first n blocks of the model
  double rho = 0.0, alpha = 0.0, gamma = 0.0;
  double horizon = 0.0;             // t
  std::vector<double> h0;           // initial datum, uv coordinates
  int profile_order = 1;            // m with 2m - 2 gamma/alpha > -1
};

// m defaults to the smallest integer with 2m - 2 gamma/alpha > -1.
ControlProblem make_control_problem(const SpectralModel& model, int n, double t,
                                    std::span<const double> h0, int profile_order = 0);

class ControlSignal {
 public:
  ControlSignal(const ControlProblem& problem);

  double horizon() const { return t_; }
  int modes() const { return static_cast<int>(blocks_.size()); }
  double energy() const { return energy_; }  // ||u||_{L^2(0,t;U)}

  // Mode coefficient of u(tau) against the normalized basis of U; zero at the
  // endpoints by definition.
  double eval_mode(int mode, double tau) const;
  // ||u(tau)||_U.
  double norm_at(double tau) const;

  const std::vector<double>& sample_times() const { return sample_times_; }
  const std::vector<double>& sample_norms() const { return sample_norms_; }

 private:
  friend ControlSignal build_control(const ControlProblem&);
  std::vector<EigenBlock> blocks_;
  std::vector<vec2> h_blocks_;
  PhiProfile phi_;
  double t_ = 0.0;
  double rho_ = 0.0, alpha_ = 0.0, gamma_ = 0.0;
  double energy_ = 0.0;
  std::vector<double> sample_times_;
  std::vector<double> sample_norms_;
};

// Builds the control and computes its energy by panel-refined Gauss-Legendre
// quadrature (relative 1e-8; QuadratureFailure otherwise). Throws
// IllConditionedK when an eigenvalue gap is numerically degenerate,
// ResonantEigenvalue propagates from block construction.
ControlSignal build_control(const ControlProblem& problem);

// Integrates the controlled system with the exponential-Euler scheme and
// per-step Gauss-Legendre quadrature of the control forcing; returns Y(t) in
// uv coordinates.
std::vector<double> integrate_controlled(const ControlProblem& problem,
                                         const ControlSignal& signal, int steps);

// Closed-form controlled trajectory
//   Y(tau) = (1 - ∫_0^tau Phi_t) e^{tau A} h + G_n K_2 psi_t(tau),
// the identity behind the construction; used to cross-check the integrator.
std::vector<double> controlled_trajectory_closed_form(const ControlProblem& problem,
                                                      double tau);

enum class EnergyVariant { state, g_a };

// Energy over a decreasing t-grid, log-log fitted. For variant g_a the datum
// is h = G_n a with the given mode coefficients a.
ExponentFit energy_scaling(const SpectralModel& model, int n,
                           std::span<const double> t_grid, EnergyVariant variant,
                           std::span<const double> datum, int profile_order = 0);

// Minimum-energy lower bound ||Gamma_{t,n} h||; blocks whose Q_t condition
// number exceeds cond_cap are skipped and counted.
struct GammaComparison {
  double gamma_h_norm = 0.0;
  int skipped_blocks = 0;
};
GammaComparison minimum_energy_lower_bound(const SpectralModel& model, int n, double t,
                                           std::span<const double> h0,
                                           double cond_cap = 1e12);

}  // namespace spde
