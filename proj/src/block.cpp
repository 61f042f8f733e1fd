#include "spde/block.hpp"

#include <cmath>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/quadrature.hpp"

namespace spde {

namespace {

// f(A) on the block from the stored eigen data: P diag(f(l+), f(l-)) P^{-1}
// for a real pair, P (Re f(l+) I + Im f(l+) J) P^{-1} for a complex pair.
mat2 analytic_of_a(const EigenBlock& b, const std::complex<double> fp,
                   const std::complex<double> fm) {
  switch (b.spectrum) {
    case BlockSpectrum::scalar:
      return mat2::diag(fp.real(), 0.0);
    case BlockSpectrum::real_pair:
      return b.basis * mat2::diag(fp.real(), fm.real()) * b.basis_inv;
    case BlockSpectrum::complex_pair:
      return b.basis * mat2::rotation_scaling(fp.real(), fp.imag()) * b.basis_inv;
  }
  return mat2::zero();
}

std::complex<double> phi1(std::complex<double> lambda, double h) {
  // (e^{lambda h} - 1)/lambda; lambda never vanishes here (|l+ l-| = mu > 0).
  return (std::exp(lambda * h) - 1.0) / lambda;
}

}  // namespace

mat2 EigenBlock::semigroup_eigen(double t) const {
  switch (spectrum) {
    case BlockSpectrum::scalar:
      return mat2::diag(std::exp(lambda_plus.real() * t), 0.0);
    case BlockSpectrum::real_pair:
      return mat2::diag(std::exp(lambda_plus.real() * t), std::exp(lambda_minus.real() * t));
    case BlockSpectrum::complex_pair: {
      const double a = lambda_plus.real();
      const double bb = lambda_plus.imag();
      const double e = std::exp(a * t);
      return mat2::rotation_scaling(e * std::cos(bb * t), e * std::sin(bb * t));
    }
  }
  return mat2::zero();
}

mat2 EigenBlock::semigroup_uv(double t) const {
  if (spectrum == BlockSpectrum::scalar) return semigroup_eigen(t);
  return basis * semigroup_eigen(t) * basis_inv;
}

mat2 EigenBlock::drift_integral_uv(double h) const {
  return analytic_of_a(*this, phi1(lambda_plus, h), phi1(lambda_minus, h));
}

mat2 EigenBlock::ltilde_uv() const {
  if (spectrum == BlockSpectrum::scalar) return mat2::diag(ltilde_mult, 0.0);
  return mat2::diag(0.0, ltilde_mult);
}

vec2 EigenBlock::g_column() const {
  if (spectrum == BlockSpectrum::scalar) return {g_coeff, 0.0};
  return {0.0, g_coeff};
}

mat2 EigenBlock::a_etA_ltilde_uv(double t) const {
  return a * semigroup_uv(t) * ltilde_uv();
}

EigenBlock build_damped_block(double mu, double rho, double alpha, double eps_res,
                              double sigma, double gamma) {
  const double rm = rho * std::pow(mu, alpha);
  const double disc = rm * rm - 4.0 * mu;
  if (std::abs(disc) <= eps_res * std::max(1.0, 4.0 * mu)) {
    std::ostringstream os;
    os << "build_damped_block: double eigenvalue at mu=" << mu << " rho=" << rho
       << " alpha=" << alpha << " (rho^2 mu^{2a} - 4mu = " << disc << ")";
    throw ResonantEigenvalue(os.str());
  }

  EigenBlock blk;
  blk.mu = mu;
  blk.dim = 2;
  blk.e_norm = 1.0 / std::sqrt(mu);
  blk.ltilde_mult = std::pow(mu, -sigma);
  blk.g_coeff = std::pow(mu, -gamma);
  blk.a = {0.0, std::sqrt(mu), -std::sqrt(mu), -rm};

  const double root_mu = std::sqrt(mu);
  if (disc > 0.0) {
    blk.spectrum = BlockSpectrum::real_pair;
    const double sq = std::sqrt(disc);
    const double lp = 0.5 * (-rm + sq);
    const double lm = 0.5 * (-rm - sq);
    blk.lambda_plus = lp;
    blk.lambda_minus = lm;
    blk.chi = std::sqrt((mu + lp * lp) / (mu + lm * lm));
    blk.b_plus = 1.0 / ((lp - lm) * blk.e_norm);
    blk.b_minus = 1.0 / ((lm - lp) * blk.chi * blk.e_norm);
    // Unit eigenvector columns in uv coordinates.
    const vec2 cp{root_mu, lp};
    const vec2 cm{root_mu, lm};
    const double np = cp.norm(), nm = cm.norm();
    blk.basis = {cp.x / np, cm.x / nm, cp.y / np, cm.y / nm};
    blk.basis_inv = blk.basis.inverse();
    const double en2 = blk.e_norm * blk.e_norm;
    blk.gram = {en2 * (mu + lp * lp), blk.chi * en2 * (mu + lp * lm),
                blk.chi * en2 * (mu + lp * lm), blk.chi * blk.chi * en2 * (mu + lm * lm)};
  } else {
    blk.spectrum = BlockSpectrum::complex_pair;
    const double re = -0.5 * rm;
    const double im = 0.5 * std::sqrt(-disc);
    blk.lambda_plus = {re, im};
    blk.lambda_minus = {re, -im};
    blk.chi = 1.0;  // |lambda_+| = |lambda_-| makes the norms equal already
    blk.b_plus = std::complex<double>{0.0, -1.0 / (2.0 * im * blk.e_norm)};
    blk.b_minus = std::conj(blk.b_plus);
    // Real pair {Re Phi_+, Im Phi_+} with a common scale.
    const vec2 r{root_mu, re};
    const vec2 iv{0.0, im};
    const double s = 1.0 / std::max(r.norm(), iv.norm());
    blk.basis = {s * r.x, s * iv.x, s * r.y, s * iv.y};
    blk.basis_inv = blk.basis.inverse();
    const double en2 = blk.e_norm * blk.e_norm;
    blk.gram = {en2 * (mu + re * re), en2 * re * im, en2 * re * im, en2 * im * im};
  }
  blk.zeta = spectral_norm(blk.ltilde_uv());
  return blk;
}

EigenBlock build_heat_block(int index, double lambda, double beta, double sigma,
                            double gamma) {
  EigenBlock blk;
  blk.index = index;
  blk.mu = lambda;
  blk.dim = 1;
  blk.spectrum = BlockSpectrum::scalar;
  blk.lambda_plus = -std::pow(lambda, beta);
  blk.e_norm = 1.0;
  blk.chi = 1.0;
  blk.ltilde_mult = std::pow(lambda, -sigma);
  blk.g_coeff = std::pow(lambda, -0.5 * gamma);
  blk.gram = mat2::identity();
  blk.a = mat2::diag(blk.lambda_plus.real(), 0.0);
  blk.zeta = blk.ltilde_mult;
  return blk;
}

mat2 gram_matrix(const EigenBlock& block) {
  if (block.dim == 1) return mat2::identity();
  const double en2 = block.e_norm * block.e_norm;
  if (block.spectrum == BlockSpectrum::real_pair) {
    const double lp = block.lambda_plus.real();
    const double lm = block.lambda_minus.real();
    const double g01 = block.chi * en2 * (block.mu + lp * lm);
    return {en2 * (block.mu + lp * lp), g01, g01,
            block.chi * block.chi * en2 * (block.mu + lm * lm)};
  }
  const double re = block.lambda_plus.real();
  const double im = block.lambda_plus.imag();
  return {en2 * (block.mu + re * re), en2 * re * im, en2 * re * im, en2 * im * im};
}

VietaResiduals vieta_residuals(const EigenBlock& block, double rho, double alpha) {
  const std::complex<double> sum = block.lambda_plus + block.lambda_minus;
  const std::complex<double> prod = block.lambda_plus * block.lambda_minus;
  const double target_sum = -rho * std::pow(block.mu, alpha);
  VietaResiduals r;
  r.sum_residual = std::abs(sum - target_sum) / std::abs(target_sum);
  r.product_residual = std::abs(prod - block.mu) / block.mu;
  return r;
}

double a_etA_ltilde_norm(std::span<const EigenBlock> blocks, double t) {
  double best = 0.0;
  for (const auto& b : blocks) {
    const double v = b.dim == 1 ? std::abs(b.a.m00) * std::exp(b.lambda_plus.real() * t) *
                                      b.ltilde_mult
                                : spectral_norm(b.a_etA_ltilde_uv(t));
    if (v > best) best = v;
  }
  return best;
}

double a_etA_ltilde_norm_gram(const EigenBlock& block, double t) {
  if (block.dim == 1)
    return std::abs(block.a.m00) * std::exp(block.lambda_plus.real() * t) * block.ltilde_mult;
  // Second route through the mode expansion
  //   A e^{tA} L~ k = mu^{-s} (k_2)_n (l+ e^{l+ t} b+ Phi_+ + l- e^{l- t} b- Phi_-),
  // assembled from (b_±, chi, ||e||) instead of the uv matrices.
  const std::complex<double> cp =
      block.lambda_plus * std::exp(block.lambda_plus * t) * block.b_plus;
  if (block.spectrum == BlockSpectrum::real_pair) {
    // Rank-one operator in eigen coordinates, measured in the Gram metric.
    const double cm =
        (block.lambda_minus * std::exp(block.lambda_minus * t) * block.b_minus).real();
    const vec2 col{cp.real(), cm};
    const vec2 row{block.ltilde_mult * block.lambda_plus.real() * block.e_norm,
                   block.ltilde_mult * block.chi * block.lambda_minus.real() * block.e_norm};
    return gram_weighted_norm(outer(col, row), block.gram);
  }
  // Complex pair: the +/- terms are conjugate, so the image is
  // 2 Re(cp * Phi_+) and the operator reads off the second uv coordinate.
  const std::complex<double> phi_u = std::sqrt(block.mu) * block.e_norm;
  const std::complex<double> phi_v = block.lambda_plus * block.e_norm;
  const vec2 image{2.0 * (cp * phi_u).real(), 2.0 * (cp * phi_v).real()};
  return spectral_norm(outer(block.ltilde_mult * image, vec2{0.0, 1.0}));
}

mat2 block_qt(const EigenBlock& block, double t, double rel_tol) {
  if (block.dim == 1) {
    const double l = block.lambda_plus.real();
    const double g2 = block.g_coeff * block.g_coeff;
    const double q = g2 * (std::exp(2.0 * l * t) - 1.0) / (2.0 * l);
    return mat2::diag(q, 0.0);
  }
  const vec2 g = block.g_column();
  auto entry = [&](int i, int j) {
    return adaptive_gauss_legendre(
        [&](double s) {
          const vec2 col = block.semigroup_uv(s).apply(g);
          const double vals[2] = {col.x, col.y};
          return vals[i] * vals[j];
        },
        0.0, t, rel_tol);
  };
  const double q00 = entry(0, 0);
  const double q01 = entry(0, 1);
  const double q11 = entry(1, 1);
  return {q00, q01, q01, q11};
}

}  // namespace spde
