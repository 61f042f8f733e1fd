#include "spde/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/quadrature.hpp"

namespace spde {

double PhiProfile::value(double tau) const {
  return c_m * std::pow(tau, m) * (t - tau);
}

double PhiProfile::derivative(double tau) const {
  return c_m * (m * std::pow(tau, m - 1) * t - (m + 1) * std::pow(tau, m));
}

PhiProfile phi_profile(double t, int m) {
  if (!(t > 0.0)) throw std::invalid_argument("phi_profile: t must be positive");
  if (m < 1) throw std::invalid_argument("phi_profile: m must be >= 1");
  PhiProfile p;
  p.t = t;
  p.m = m;
  p.c_m = (m + 1.0) * (m + 2.0) / std::pow(t, m + 2);
  return p;
}

namespace {

int default_profile_order(double gamma, double alpha) {
  int m = 1;
  while (2.0 * m - 2.0 * gamma / alpha <= -1.0) ++m;
  return m;
}

}  // namespace

ControlProblem make_control_problem(const SpectralModel& model, int n, double t,
                                    std::span<const double> h0, int profile_order) {
  if (model.block_dim() != 2)
    throw UnsupportedFamily("make_control_problem: control applies to the damped families");
  if (!(t > 0.0)) throw std::invalid_argument("make_control_problem: t must be positive");
  ControlProblem p;
  const int nn = std::min<int>(n, static_cast<int>(model.blocks.size()));
  p.blocks.assign(model.blocks.begin(), model.blocks.begin() + nn);
  p.rho = model.params.rho;
  p.alpha = model.params.alpha;
  p.gamma = model.params.gamma;
  p.horizon = t;
  p.h0.assign(2 * nn, 0.0);
  std::copy_n(h0.begin(), std::min<std::size_t>(h0.size(), p.h0.size()), p.h0.begin());
  p.profile_order =
      profile_order > 0 ? profile_order : default_profile_order(p.gamma, p.alpha);
  if (2.0 * p.profile_order - 2.0 * p.gamma / p.alpha <= -1.0)
    throw std::invalid_argument(
        "make_control_problem: profile order violates 2m - 2 gamma/alpha > -1");
  return p;
}

ControlSignal::ControlSignal(const ControlProblem& problem)
    : blocks_(problem.blocks),
      phi_(phi_profile(problem.horizon, problem.profile_order)),
      t_(problem.horizon),
      rho_(problem.rho),
      alpha_(problem.alpha),
      gamma_(problem.gamma) {
  h_blocks_.resize(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    h_blocks_[k] = {problem.h0[2 * k], problem.h0[2 * k + 1]};
}

double ControlSignal::eval_mode(int mode, double tau) const {
  if (tau <= 0.0 || tau >= t_) return 0.0;  // u(0) = u(t) = 0 by definition
  const EigenBlock& blk = blocks_[mode];
  const vec2 w = blk.semigroup_uv(tau).apply(h_blocks_[mode]);
  const vec2 aw = blk.a.apply(w);
  const double phi = phi_.value(tau);
  const double dphi = phi_.derivative(tau);
  // psi = -phi w, psi' = -dphi w - phi A w;
  // u = rho L^{a-1/2+g} psi_1 + L^g psi_2 + L^{g-1/2} psi'_1.
  const double mu = blk.mu;
  const double k1 = rho_ * std::pow(mu, alpha_ - 0.5 + gamma_) * (-phi * w.x) +
                    std::pow(mu, gamma_) * (-phi * w.y);
  const double k2 = std::pow(mu, gamma_ - 0.5) * (-dphi * w.x - phi * aw.x);
  return k1 + k2;
}

double ControlSignal::norm_at(double tau) const {
  double acc = 0.0;
  for (int k = 0; k < modes(); ++k) {
    const double u = eval_mode(k, tau);
    acc += u * u;
  }
  return std::sqrt(acc);
}

ControlSignal build_control(const ControlProblem& problem) {
  for (const auto& blk : problem.blocks) {
    const double gap = std::abs(blk.lambda_plus - blk.lambda_minus);
    if (gap <= 1e-9 * std::max(1.0, std::sqrt(blk.mu))) {
      std::ostringstream os;
      os << "build_control: eigenvalue gap degenerate at mu=" << blk.mu;
      throw IllConditionedK(os.str());
    }
  }
  ControlSignal sig(problem);

  // Energy by geometric panels toward tau = 0 (the integrand behaves like
  // tau^{2m - 2 gamma/alpha} there), Gauss-Legendre per panel, with an
  // order-halving error estimate.
  const double t = problem.horizon;
  static const GaussLegendre fine(24);
  static const GaussLegendre coarse(12);
  auto f = [&](double tau) {
    const double v = sig.norm_at(tau);
    return v * v;
  };
  double sum_fine = 0.0, sum_coarse = 0.0;
  double hi = t;
  const int levels = 52;
  for (int j = 0; j < levels; ++j) {
    const double lo = 0.5 * hi;
    sum_fine += fine.integrate(f, lo, hi);
    sum_coarse += coarse.integrate(f, lo, hi);
    hi = lo;
  }
  if (std::abs(sum_fine - sum_coarse) > 1e-8 * std::max(sum_fine, 1e-300))
    throw QuadratureFailure("build_control: energy quadrature did not converge");
  sig.energy_ = std::sqrt(sum_fine);

  const int nsamp = 65;
  sig.sample_times_.resize(nsamp);
  sig.sample_norms_.resize(nsamp);
  for (int i = 0; i < nsamp; ++i) {
    const double tau = t * i / (nsamp - 1);
    sig.sample_times_[i] = tau;
    sig.sample_norms_[i] = sig.norm_at(tau);
  }
  return sig;
}

std::vector<double> integrate_controlled(const ControlProblem& problem,
                                         const ControlSignal& signal, int steps) {
  if (steps < 1) throw std::invalid_argument("integrate_controlled: steps must be >= 1");
  const double t = problem.horizon;
  const double h = t / steps;
  static const GaussLegendre rule(8);
  const int n = static_cast<int>(problem.blocks.size());
  std::vector<double> y = problem.h0;
  for (int mode = 0; mode < n; ++mode) {
    const EigenBlock& blk = problem.blocks[mode];
    const mat2 s_h = blk.semigroup_uv(h);
    // Precompute e^{(h - r_q) A} G at the quadrature nodes of one step.
    std::vector<vec2> prop(rule.order());
    std::vector<double> node_off(rule.order());
    const double gmult = blk.g_coeff;
    for (int q = 0; q < rule.order(); ++q) {
      const double r = 0.5 * h * (1.0 + rule.nodes[q]);
      node_off[q] = r;
      prop[q] = blk.semigroup_uv(h - r).apply(vec2{0.0, gmult});
    }
    vec2 yk{y[2 * mode], y[2 * mode + 1]};
    for (int k = 0; k < steps; ++k) {
      vec2 forced{0.0, 0.0};
      for (int q = 0; q < rule.order(); ++q) {
        const double u = signal.eval_mode(mode, k * h + node_off[q]);
        const double w = 0.5 * h * rule.weights[q] * u;
        forced = forced + w * prop[q];
      }
      yk = s_h.apply(yk) + forced;
      if (!std::isfinite(yk.x) || !std::isfinite(yk.y))
        throw NonFiniteState("integrate_controlled: non-finite state");
    }
    y[2 * mode] = yk.x;
    y[2 * mode + 1] = yk.y;
  }
  return y;
}

std::vector<double> controlled_trajectory_closed_form(const ControlProblem& problem,
                                                      double tau) {
  const PhiProfile phi = phi_profile(problem.horizon, problem.profile_order);
  // g(tau) = 1 - ∫_0^tau Phi = 1 - C_m (t tau^{m+1}/(m+1) - tau^{m+2}/(m+2)).
  const int m = problem.profile_order;
  const double g = 1.0 - phi.c_m * (problem.horizon * std::pow(tau, m + 1) / (m + 1) -
                                    std::pow(tau, m + 2) / (m + 2));
  const int n = static_cast<int>(problem.blocks.size());
  std::vector<double> y(2 * n, 0.0);
  for (int mode = 0; mode < n; ++mode) {
    const EigenBlock& blk = problem.blocks[mode];
    const vec2 h{problem.h0[2 * mode], problem.h0[2 * mode + 1]};
    const vec2 w = blk.semigroup_uv(tau).apply(h);
    // G_n K_2 psi_t = (0, mu^{-1/2} (psi_t)_1): the gamma powers cancel.
    const double psi1 = -phi.value(tau) * w.x;
    y[2 * mode] = g * w.x;
    y[2 * mode + 1] = g * w.y + std::pow(blk.mu, -0.5) * psi1;
  }
  return y;
}

ExponentFit energy_scaling(const SpectralModel& model, int n,
                           std::span<const double> t_grid, EnergyVariant variant,
                           std::span<const double> datum, int profile_order) {
  std::vector<std::pair<double, double>> samples;
  for (double t : t_grid) {
    std::vector<double> h0;
    if (variant == EnergyVariant::state) {
      h0.assign(datum.begin(), datum.end());
    } else {
      // h = G_n a: uv coordinates (0, mu^{-gamma} a_k).
      h0.assign(2 * n, 0.0);
      for (int k = 0; k < n && k < static_cast<int>(datum.size()); ++k)
        h0[2 * k + 1] = model.blocks[k].g_coeff * datum[k];
    }
    const ControlProblem p = make_control_problem(model, n, t, h0, profile_order);
    const ControlSignal sig = build_control(p);
    samples.emplace_back(t, sig.energy());
  }
  return fit_exponent(samples);
}

GammaComparison minimum_energy_lower_bound(const SpectralModel& model, int n, double t,
                                           std::span<const double> h0, double cond_cap) {
  GammaComparison out;
  double acc = 0.0;
  const int nn = std::min<int>(n, static_cast<int>(model.blocks.size()));
  for (int k = 0; k < nn; ++k) {
    const auto& blk = model.blocks[k];
    const mat2 q = block_qt(blk, t);
    if (blk.dim == 2 && condition_number(q) > cond_cap) {
      ++out.skipped_blocks;
      continue;
    }
    const vec2 h{h0.size() > static_cast<std::size_t>(2 * k) ? h0[2 * k] : 0.0,
                 h0.size() > static_cast<std::size_t>(2 * k + 1) ? h0[2 * k + 1] : 0.0};
    const vec2 img = block_gamma(blk, t, cond_cap).apply(h);
    acc += img.norm2();
  }
  out.gamma_h_norm = std::sqrt(acc);
  return out;
}

}  // namespace spde
