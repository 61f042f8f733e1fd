#pragma once

// Concrete SPDE instances sharing the block machinery:
//
//   heat           dX = -(-D)^beta X dt + (-D)^{-sigma} B(X) dt + (-D)^{-gamma/2} dW
//   damped_wave    y_tt = -L y - rho L^a y_t + L^{-sigma} C(y, y_t) + L^{-gamma} dW
//   beam           same with L = (-D)^2 up to dimension 3
//   damped_wave_xi damped wave moved to H_xi with sigma = gamma = xi and the
//                  drift wrapped as C_xi(z) = L^xi C(z)
//
// The heat family stores the generator exponent beta in the alpha slot.

#include <string>
#include <vector>

#include "spde/block.hpp"

namespace spde {

enum class Family { heat, damped_wave, beam, damped_wave_xi };

const char* family_name(Family family);
Family family_from_name(const std::string& name);

struct ModelParams {
  Family family = Family::damped_wave;
  double alpha = 0.5;   // damping exponent (heat: generator exponent beta)
  double rho = 1.0;
  double gamma = 0.0;
  double sigma = 0.0;
  double theta = 0.9;   // declared Hoelder exponent of the drift
  double xi = 0.0;      // change-of-space exponent (damped_wave_xi only)
  int m = 1;            // spatial dimension
  int n_max = 16;
  double eps_res = 1e-9;
  double noise_scale = 1.0;  // multiplies G; 0 switches the noise off
};

struct SpectralModel {
  ModelParams params;
  double mu_c = 1.0;      // tail law mu_n ~ mu_c * n^mu_delta
  double mu_delta = 2.0;
  std::vector<double> mu;            // exact low-mode eigenvalues of Lambda
  std::vector<EigenBlock> blocks;    // one per mode, dims all equal

  Family family() const { return params.family; }
  int n_max() const { return params.n_max; }
  int block_dim() const { return blocks.empty() ? 1 : blocks.front().dim; }
  int state_dim() const { return static_cast<int>(blocks.size()) * block_dim(); }

  // Exponent w such that the drift's first argument reads z_n = mu_n^w u_n
  // from the first uv coordinate (the position component y = L^{-1/2} X_1).
  double drift_arg_weight() const;

  // Orthonormal eigenfunction of Lambda at a spatial point, m = 1 families
  // only: sqrt(2/pi) sin(n xi) on (0, pi).
  double mode_eval(int n, double point) const;
};

// Builds the model: exact spectra (Dirichlet sums of squares, squared for the
// beam), eigenblocks, multipliers. Throws ResonantEigenvalue if a damped mode
// is within eps_res of the double-eigenvalue set, UnsupportedFamily for
// invalid dimension/family combinations.
SpectralModel build_model(const ModelParams& params);

// Restriction to the first n modes; building at n and restricting from a
// larger build agree exactly.
SpectralModel truncate_model(const SpectralModel& model, int n);

// G = G~ V and L~ G~ = G~ K read per mode; the residual of the commutation
// identity is exactly zero for every supported family and is exposed for the
// property tests.
struct OperatorFactorization {
  std::vector<double> v_mult;       // V multiplier per mode
  std::vector<double> k_mult;       // K multiplier per mode
  std::vector<double> ltilde_mult;  // L~ multiplier per mode
  bool gtilde_is_identity = false;  // heat: G~ = I; damped: column (0, Id)
};
OperatorFactorization factorization(const SpectralModel& model);
double commutation_residual(const SpectralModel& model);

// Q_t = ∫_0^t e^{sA} G G* e^{sA*} ds as a block operator: closed form on the
// heat family, adaptive quadrature (relative 1e-10) on the damped families.
BlockOperator q_t(const SpectralModel& model, double t, int n_max);

// Gamma_t = Q_t^{-1/2} e^{tA} restricted to one block; throws SingularQt when
// cond(Q_t) exceeds cond_cap.
mat2 block_gamma(const EigenBlock& block, double t, double cond_cap = 1e14);

// sup over unit u of ||Gamma_t G~ u||: max over blocks of the G~ column image.
double gamma_gtilde_norm(const SpectralModel& model, double t, double cond_cap = 1e14);
double gamma_norm(const SpectralModel& model, double t, double cond_cap = 1e14);

}  // namespace spde
