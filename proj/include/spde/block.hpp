#pragma once

// Block-diagonal spectral representation of the damped-wave / heat operator
// families. Per eigenvalue mu_n of Lambda, the state lives in the span of
// (e_n, 0) and (0, e_n); in those orthonormal coordinates ("uv coordinates")
// the restricted generator is
//
//   A_n = [ 0          sqrt(mu) ]        lambda^2 + rho*mu^alpha*lambda + mu = 0,
//         [ -sqrt(mu)  -rho*mu^alpha ],  lambda_± = (-rho*mu^a ± sqrt(rho^2 mu^2a - 4mu))/2,
//
// with eigenvectors Phi_± = (sqrt(mu) e_n, lambda_± e_n) (Phi_- scaled by
// chi_n). Both eigenvalues always have negative real part; the double-root set
// rho^2 = 4 mu^{1-2alpha} is excluded with a relative tolerance. A complex
// pair a ± ib is kept as the real basis {Re Phi_+, Im Phi_+}, in which every
// analytic function of A_n is a rotation-scaling block; all downstream algebra
// stays real.

#include <complex>
#include <span>
#include <vector>

#include "spde/mat2.hpp"

namespace spde {

enum class BlockSpectrum { scalar, real_pair, complex_pair };

struct EigenBlock {
  int index = 0;      // n
  double mu = 0.0;    // eigenvalue of Lambda on the block
  int dim = 1;
  BlockSpectrum spectrum = BlockSpectrum::scalar;

  // Eigenvalues of A restricted to the block; a scalar block stores its single
  // eigenvalue in lambda_plus.
  std::complex<double> lambda_plus{0.0, 0.0};
  std::complex<double> lambda_minus{0.0, 0.0};

  double chi = 1.0;     // scaling of Phi_- making ||Phi_-|| = ||Phi_+||
  std::complex<double> b_plus{0.0, 0.0};   // G~ u = sum b± u_n Phi_±
  std::complex<double> b_minus{0.0, 0.0};
  double e_norm = 1.0;  // ||e_n||_U
  double zeta = 1.0;    // ||L~|| restricted to the block
  double ltilde_mult = 1.0;  // mu^{-sigma}
  double g_coeff = 1.0;      // noise column coefficient (mu^{-gamma}, heat: lambda^{-gamma/2})

  mat2 gram = mat2::identity();  // Gram of {Phi_+, Phi_-} (real-pair Gram when complex)

  mat2 a{};                            // A in uv coordinates
  mat2 basis = mat2::identity();       // columns: eigenbasis (or real pair) in uv coords
  mat2 basis_inv = mat2::identity();

  // e^{tA} restricted to the block, in eigen coordinates: diag(e^{l+t},e^{l-t})
  // for a real pair, e^{at}[cos bt, sin bt; -sin bt, cos bt] for a ± ib.
  mat2 semigroup_eigen(double t) const;
  // Same operator in the orthonormal uv coordinates.
  mat2 semigroup_uv(double t) const;
  // ∫_0^h e^{sA} ds (the exponential-Euler drift factor).
  mat2 drift_integral_uv(double h) const;
  mat2 ltilde_uv() const;
  vec2 g_column() const;  // G column in uv coordinates (x entry for scalar blocks)
  mat2 a_etA_ltilde_uv(double t) const;
};

// Damped-family block from (mu, rho, alpha). Throws ResonantEigenvalue when
// |rho^2 mu^2a - 4 mu| <= eps_res * max(1, 4 mu). sigma/gamma fill the L~ and
// noise multipliers (they do not affect the eigen geometry).
EigenBlock build_damped_block(double mu, double rho, double alpha, double eps_res = 1e-9,
                              double sigma = 0.0, double gamma = 0.0);

// Heat-family scalar block: A = -lambda^beta, L~ = lambda^{-sigma},
// G = lambda^{-gamma/2} on an orthonormal mode.
EigenBlock build_heat_block(int index, double lambda, double beta, double sigma,
                            double gamma);

// Gram matrix of {Phi_+, Phi_-} recomputed from (mu, lambda_±, chi, ||e||);
// identity for scalar blocks, real-pair Gram for complex pairs.
mat2 gram_matrix(const EigenBlock& block);

// Relative residuals of the Vieta identities lambda_+ + lambda_- = -rho mu^a
// and lambda_+ lambda_- = mu.
struct VietaResiduals {
  double sum_residual = 0.0;
  double product_residual = 0.0;
};
VietaResiduals vieta_residuals(const EigenBlock& block, double rho, double alpha);

// Operator norm of A e^{tA} L~ on the span of the given blocks (exact: max of
// per-block 2-norms in orthonormal coordinates).
double a_etA_ltilde_norm(std::span<const EigenBlock> blocks, double t);

// Same norm for a single block evaluated through the non-orthogonal eigen
// coordinates with the Gram-weighted generalized eigenproblem; agrees with the
// uv route and is kept as the independent second route.
double a_etA_ltilde_norm_gram(const EigenBlock& block, double t);

// OU covariance Q_t of the block: ∫_0^t e^{sA} g g^T e^{sA^T} ds by adaptive
// Gauss-Legendre panels (relative tolerance rel_tol); throws QuadratureFailure
// when the panel budget is exhausted.
mat2 block_qt(const EigenBlock& block, double t, double rel_tol = 1e-10);

enum class BlockOperatorKind { A, Semigroup, Ltilde, GColumn, AetALtilde, Qt, Gamma };

// A block-diagonal operator: blocks[i] acts only on the coordinates of
// block i.
struct BlockOperator {
  BlockOperatorKind kind = BlockOperatorKind::A;
  double t = 0.0;  // parameter for the time-dependent kinds
  std::vector<mat2> blocks;
  std::vector<int> dims;
};

}  // namespace spde
