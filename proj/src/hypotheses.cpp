#include "spde/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/exponent_fit.hpp"
#include "spde/quadrature.hpp"

namespace spde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConditionCheck range_check(const std::string& name, double value, double lo, double hi,
                           const std::string& citation) {
  ConditionCheck c;
  c.name = name;
  c.citation = citation;
  c.margin = std::min(value - lo, hi - value);
  c.satisfied = value > lo && value < hi;
  return c;
}

ConditionCheck lower_check(const std::string& name, double value, double lo,
                           const std::string& citation) {
  ConditionCheck c;
  c.name = name;
  c.citation = citation;
  c.margin = value - lo;
  c.satisfied = value > lo;
  return c;
}

void heat_conditions(const SpectralModel& model, AdmissibilityReport& rep) {
  const double beta = model.params.alpha;
  const double gamma = model.params.gamma;
  const double sigma = model.params.sigma;
  const double theta = model.params.theta;
  const double m = model.params.m;
  rep.conditions.push_back(range_check(
      "gamma_range", gamma, 0.5 * (m - 2.0 * beta), beta * theta / (2.0 - theta),
      "requires (m - 2 beta)/2 < gamma < beta theta/(2 - theta)"));
  rep.conditions.push_back(lower_check("sigma_lower", sigma,
                                       std::max(0.0, 0.25 * (m - 2.0 * beta)),
                                       "requires sigma > max{0, (m - 2 beta)/4}"));
  rep.conditions.push_back(range_check("theta_range", theta, 0.0, 1.0,
                                       "requires theta in (0, 1)"));
}

void damped_conditions(const SpectralModel& model, AdmissibilityReport& rep,
                       double gamma_lo_base) {
  // gamma_lo_base: 1/4 for the wave (delta = 2), m/8 for the beam (delta = 4/m).
  const double alpha = model.params.alpha;
  const double gamma = model.params.gamma;
  const double sigma = model.params.sigma;
  const double theta = model.params.theta;
  const double delta = model.mu_delta;

  if (alpha <= 0.5) {
    ConditionCheck a;
    a.name = "alpha_range";
    a.citation = "requires alpha in (b, 1/2], b = 1/4 (wave) or m/8 (beam)";
    a.margin = std::min(alpha - gamma_lo_base, 0.5 - alpha);
    a.satisfied = alpha > gamma_lo_base && alpha <= 0.5;
    rep.conditions.push_back(a);
    rep.conditions.push_back(range_check(
        "gamma_range", gamma, gamma_lo_base - 0.5 * alpha, 0.5 * alpha,
        "requires gamma in (b - alpha/2, alpha/2), b = 1/4 (wave) or m/8 (beam)"));
    rep.conditions.push_back(range_check(
        "theta_range", theta, (2.0 / 3.0) * (gamma + alpha) / alpha, 1.0,
        "requires theta in ((2/3)(gamma + alpha)/alpha, 1)"));
    rep.conditions.push_back(
        lower_check("sigma_lower", sigma, 0.5 - alpha, "requires sigma > 1/2 - alpha"));
  } else {
    ConditionCheck a;
    a.name = "alpha_range";
    a.citation = "requires alpha in [1/2, 1)";
    a.margin = std::min(alpha - 0.5, 1.0 - alpha);
    a.satisfied = alpha >= 0.5 && alpha < 1.0;
    rep.conditions.push_back(a);
    const double glo = std::max(gamma_lo_base - 0.5 * alpha, 0.0);
    ConditionCheck g;
    g.name = "gamma_range";
    g.citation =
        "requires gamma in (b - alpha/2, 1/2 - alpha/2) intersected with [0, inf)";
    g.margin = std::min(gamma - (gamma_lo_base - 0.5 * alpha), (0.5 - 0.5 * alpha) - gamma);
    g.satisfied = gamma >= glo && gamma > gamma_lo_base - 0.5 * alpha &&
                  gamma < 0.5 - 0.5 * alpha;
    rep.conditions.push_back(g);
    if (gamma + 2.0 * alpha < 1.5) {
      rep.conditions.push_back(range_check(
          "theta_range", theta, (2.0 / 3.0) * (gamma + 1.0 - alpha) / (1.0 - alpha), 1.0,
          "requires theta in ((2/3)(gamma + 1 - alpha)/(1 - alpha), 1) when "
          "gamma + 2 alpha < 3/2"));
    } else {
      rep.conditions.push_back(range_check(
          "theta_range", theta, (4.0 * gamma + 2.0 * alpha - 1.0) / (2.0 * gamma + alpha),
          1.0,
          "requires theta in ((4 gamma + 2 alpha - 1)/(2 gamma + alpha), 1) when "
          "gamma + 2 alpha >= 3/2"));
    }
    rep.conditions.push_back(lower_check("sigma_lower", sigma, 0.0,
                                         "requires sigma > 0"));
  }
  rep.conditions.push_back(lower_check(
      "delta_condition", delta, 1.0 / (2.0 * gamma + alpha),
      "requires delta > 1/(2 gamma + alpha) for the eigenvalue law mu_n ~ c n^delta"));
}

void xi_conditions(const SpectralModel& model, AdmissibilityReport& rep) {
  const double alpha = model.params.alpha;
  const double theta = model.params.theta;
  const double xi = model.params.xi;
  if (alpha <= 0.5) {
    ConditionCheck a;
    a.name = "alpha_range";
    a.citation = "requires alpha in (1/3, 1/2]";
    a.margin = std::min(alpha - 1.0 / 3.0, 0.5 - alpha);
    a.satisfied = alpha > 1.0 / 3.0 && alpha <= 0.5;
    rep.conditions.push_back(a);
    rep.conditions.push_back(range_check("theta_range", theta, 1.0 / (3.0 * alpha), 1.0,
                                         "requires theta in (1/(3 alpha), 1)"));
    rep.conditions.push_back(range_check(
        "xi_range", xi, 0.5 - alpha, 1.5 * theta * alpha - alpha,
        "requires xi in (1/2 - alpha, (3/2) theta alpha - alpha)"));
  } else {
    ConditionCheck a;
    a.name = "alpha_range";
    a.citation = "requires alpha in [1/2, 1)";
    a.margin = std::min(alpha - 0.5, 1.0 - alpha);
    a.satisfied = alpha >= 0.5 && alpha < 1.0;
    rep.conditions.push_back(a);
    if (alpha < 0.75) {
      rep.conditions.push_back(range_check("theta_range", theta, 2.0 / 3.0, 1.0,
                                           "requires theta in (2/3, 1) when alpha < 3/4"));
      const double hi =
          std::min((1.5 * theta - 1.0) * (1.0 - alpha), 1.5 - 2.0 * alpha);
      rep.conditions.push_back(range_check(
          "xi_range", xi, 0.0, hi,
          "requires xi in (0, min(((3/2)theta - 1)(1 - alpha), 3/2 - 2 alpha))"));
    } else {
      rep.conditions.push_back(
          range_check("theta_range", theta, (2.0 * alpha - 1.0) / alpha, 1.0,
                      "requires theta in ((2 alpha - 1)/alpha, 1) when alpha >= 3/4"));
      rep.conditions.push_back(range_check(
          "xi_range", xi, 0.0, 1.0 / (2.0 * (2.0 - theta)) - 0.5 * alpha,
          "requires xi in (0, 1/(2(2 - theta)) - alpha/2)"));
    }
  }
  ConditionCheck s;
  s.name = "structure";
  s.citation = "requires sigma = gamma = xi in the changed space";
  s.margin = -std::max(std::abs(model.params.sigma - xi), std::abs(model.params.gamma - xi));
  s.satisfied = model.params.sigma == xi && model.params.gamma == xi;
  rep.conditions.push_back(s);
}

}  // namespace

AdmissibilityReport check_theorem_conditions(const SpectralModel& model) {
  AdmissibilityReport rep;
  switch (model.family()) {
    case Family::heat:
      heat_conditions(model, rep);
      break;
    case Family::damped_wave:
      damped_conditions(model, rep, 0.25);
      break;
    case Family::beam:
      damped_conditions(model, rep, model.params.m / 8.0);
      if (model.params.m == 3) {
        const double expo = (4.0 * model.params.alpha + 8.0 * model.params.sigma) / 3.0;
        rep.conditions.push_back(lower_check(
            "series_exponent", expo, 1.0,
            "m = 3 needs the weighted series finite; sufficient: (4 alpha + 8 sigma)/3 > 1"));
      }
      break;
    case Family::damped_wave_xi:
      xi_conditions(model, rep);
      break;
    default:
      throw UnsupportedFamily("check_theorem_conditions: family not covered");
  }
  return rep;
}

SeriesConditionResult series_condition(const SpectralModel& model, const DriftSpec& drift,
                                       int n_max) {
  SeriesConditionResult res;
  const int n = std::min<int>(n_max, static_cast<int>(model.blocks.size()));
  double sum = 0.0;
  double last_term = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& blk = model.blocks[i];
    const double mnorm = drift.mode_norm(i);
    double term = 0.0;
    if (blk.dim == 1) {
      term = blk.zeta * blk.zeta * mnorm * mnorm / (-blk.lambda_plus.real());
    } else {
      // Coefficients against the normalized eigenvectors of A*:
      // |<B, Psi^pm>| = |lambda_pm| / sqrt(mu + |lambda_pm|^2) * mode norm.
      const double lp2 = std::norm(blk.lambda_plus);
      const double lm2 = std::norm(blk.lambda_minus);
      const double wp = lp2 / (blk.mu + lp2);
      const double wm = lm2 / (blk.mu + lm2);
      term = blk.zeta * blk.zeta * mnorm * mnorm *
             (wp / (-blk.lambda_plus.real()) + wm / (-blk.lambda_minus.real()));
    }
    sum += term;
    last_term = term;
  }
  res.partial_sum = sum;

  // Exponent test: the heat family stores its generator exponent beta in the
  // alpha slot, so the sufficient condition is delta (2 sigma + alpha) > 1 for
  // every family, plus any declared mode-norm decay.
  const double kappa = model.mu_delta * (2.0 * model.params.sigma + model.params.alpha) +
                       2.0 * drift.mode_norm_decay();
  if (drift.is_zero()) {
    res.tail_bound = 0.0;
    res.converges = true;
    return res;
  }
  res.converges = kappa > 1.0;
  res.tail_bound =
      res.converges ? last_term * static_cast<double>(n) / (kappa - 1.0) : kInf;
  return res;
}

namespace {

// ∫_0^t s^{-eta} tr(e^{sA} g g^T e^{sA^T}) ds for one block: geometric panels
// toward 0 plus an analytic bottom slice where the trace is flat.
double block_trace_integral(const EigenBlock& blk, double t, double eta) {
  static const GaussLegendre rule(8);
  auto trace_at = [&](double s) {
    const vec2 col = blk.dim == 1 ? vec2{blk.semigroup_uv(s).m00 * blk.g_coeff, 0.0}
                                  : blk.semigroup_uv(s).apply(blk.g_column());
    return col.norm2();
  };
  double sum = 0.0;
  double hi = t;
  const int levels = 44;
  for (int j = 0; j < levels; ++j) {
    const double lo = 0.5 * hi;
    sum += rule.integrate([&](double s) { return std::pow(s, -eta) * trace_at(s); }, lo, hi);
    hi = lo;
  }
  sum += trace_at(0.0) * std::pow(hi, 1.0 - eta) / (1.0 - eta);
  return sum;
}

}  // namespace

TraceIntegrabilityResult trace_integrability(const SpectralModel& model,
                                             const std::vector<double>& eta_grid, double t) {
  TraceIntegrabilityResult out;
  const int n = static_cast<int>(model.blocks.size());
  const int half = std::max(1, n / 2);

  // mu-law ghost blocks continue the spectrum for the tail estimate.
  const int ghost_n = 4 * n;
  std::vector<EigenBlock> ghosts;
  if (model.params.noise_scale != 0.0) {
    ghosts.reserve(ghost_n - n);
    for (int k = n + 1; k <= ghost_n; ++k) {
      const double mu = model.mu_c * std::pow(static_cast<double>(k), model.mu_delta);
      if (model.family() == Family::heat) {
        ghosts.push_back(build_heat_block(k, mu, model.params.alpha, model.params.sigma,
                                          model.params.gamma));
      } else {
        try {
          ghosts.push_back(build_damped_block(mu, model.params.rho, model.params.alpha,
                                              model.params.eps_res, model.params.sigma,
                                              model.params.gamma));
        } catch (const ResonantEigenvalue&) {
          continue;  // a ghost mode exactly on the excluded set contributes nothing new
        }
      }
      ghosts.back().g_coeff *= model.params.noise_scale;
    }
  }

  for (double eta : eta_grid) {
    TraceIntegrabilityResult::Row row;
    row.eta = eta;
    double integral_half = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = block_trace_integral(model.blocks[i], t, eta);
      row.integral += c;
      if (i < half) integral_half += c;
    }
    double ghost_sum = 0.0;
    double last = 0.0;
    for (const auto& g : ghosts) {
      last = block_trace_integral(g, t, eta);
      ghost_sum += last;
    }
    // Beyond the ghosts: per-mode integrals decay like
    // n^{-delta(2 gamma_eff + rate(1 - eta))}; integral comparison when > 1.
    const double gamma_eff =
        model.family() == Family::heat ? 0.5 * model.params.gamma : model.params.gamma;
    const double rate = std::min(model.params.alpha, 1.0 - model.params.alpha);
    const double kappa =
        model.mu_delta * (2.0 * gamma_eff + (model.family() == Family::heat
                                                 ? model.params.alpha
                                                 : rate) *
                                                (1.0 - eta));
    double remainder = 0.0;
    if (!ghosts.empty()) {
      remainder = kappa > 1.0
                      ? last * static_cast<double>(ghost_n) / (kappa - 1.0)
                      : kInf;
    }
    row.tail = ghost_sum + remainder;
    const double full = row.integral + (std::isfinite(row.tail) ? row.tail : 0.0);
    // Stability probed by halving/doubling the truncation: compare the
    // integral with n/2 modes against the one with all n (same change law as
    // doubling n at the half level).
    row.doubling_change =
        full > 0.0 ? std::abs(row.integral - integral_half) / full : 0.0;
    row.passed = std::isfinite(row.tail) && row.doubling_change < 0.01;
    if (model.params.noise_scale == 0.0) row.passed = true;  // integral is exactly 0
    out.rows.push_back(row);
    if (row.passed && !out.best_eta) out.best_eta = eta;
    if (row.passed && out.best_eta && eta < *out.best_eta) out.best_eta = eta;
  }
  return out;
}

GammaIntegrabilityReport gamma_integrability(const SpectralModel& model, double t,
                                             double theta, double theta_prime) {
  if (!(t > 0.0)) throw std::invalid_argument("gamma_integrability: t must be positive");
  if (!(theta_prime < theta && theta_prime > 0.0 && theta < 1.0))
    throw std::invalid_argument("gamma_integrability: need 0 < theta' < theta < 1");
  GammaIntegrabilityReport rep;
  const int levels = 22;
  for (int j = 0; j <= levels; ++j) {
    const double s = t * std::pow(2.0, -j);
    rep.s_grid.push_back(s);
    rep.gamma_norms.push_back(gamma_norm(model, s));
    rep.gamma_gtilde_norms.push_back(gamma_gtilde_norm(model, s));
  }
  // Blow-up exponents fitted on the small-s half of the grid.
  std::vector<std::pair<double, double>> gn, gg;
  for (int j = levels / 2; j <= levels; ++j) {
    gn.emplace_back(rep.s_grid[j], rep.gamma_norms[j]);
    gg.emplace_back(rep.s_grid[j], rep.gamma_gtilde_norms[j]);
  }
  rep.gamma_norm_exponent = fit_exponent(gn).slope;
  rep.gamma_gtilde_exponent = fit_exponent(gg).slope;

  // Trapezoid on the geometric grid plus power-law continuation below s_min.
  auto integrate = [&](auto&& f, double extrap_exp) {
    double sum = 0.0;
    for (int j = 0; j < levels; ++j) {
      const double a = rep.s_grid[j + 1], b = rep.s_grid[j];
      sum += 0.5 * (f(j + 1) + f(j)) * (b - a);
    }
    const double s_min = rep.s_grid.back();
    if (extrap_exp > -1.0)
      sum += f(levels) * s_min / (1.0 + extrap_exp);
    return sum;
  };
  const double mixed_exp =
      (1.0 - theta) * rep.gamma_norm_exponent + rep.gamma_gtilde_exponent;
  const double tp_exp = (1.0 - theta_prime) * rep.gamma_norm_exponent;
  rep.mixed_finite = mixed_exp > -1.0;
  rep.theta_prime_finite = tp_exp > -1.0;
  rep.mixed_integral = integrate(
      [&](int j) {
        return std::pow(rep.gamma_norms[j], 1.0 - theta) * rep.gamma_gtilde_norms[j];
      },
      mixed_exp);
  rep.theta_prime_integral = integrate(
      [&](int j) { return std::pow(rep.gamma_norms[j], 1.0 - theta_prime); }, tp_exp);
  if (!rep.mixed_finite) rep.mixed_integral = kInf;
  if (!rep.theta_prime_finite) rep.theta_prime_integral = kInf;
  return rep;
}

}  // namespace spde
