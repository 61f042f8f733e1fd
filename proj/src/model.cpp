#include "spde/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spde/errors.hpp"

namespace spde {

const char* family_name(Family family) {
  switch (family) {
    case Family::heat: return "heat";
    case Family::damped_wave: return "damped_wave";
    case Family::beam: return "beam";
    case Family::damped_wave_xi: return "damped_wave_xi";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "heat") return Family::heat;
  if (name == "damped_wave") return Family::damped_wave;
  if (name == "beam") return Family::beam;
  if (name == "damped_wave_xi") return Family::damped_wave_xi;
  throw UnsupportedFamily("unknown model family: " + name);
}

namespace {

// First `count` values of { k_1^2 + ... + k_m^2 : k_i >= 1 }, sorted with
// multiplicity (Dirichlet Laplacian on (0,pi)^m).
std::vector<double> dirichlet_spectrum(int m, int count) {
  std::vector<double> vals;
  double limit = std::max(16.0, std::pow(static_cast<double>(count), 2.0 / m) * 4.0 * m);
  for (;;) {
    vals.clear();
    const int kmax = static_cast<int>(std::sqrt(limit)) + 1;
    if (m == 1) {
      for (int k = 1; k <= kmax; ++k)
        if (k * k <= limit) vals.push_back(static_cast<double>(k) * k);
    } else if (m == 2) {
      for (int k1 = 1; k1 <= kmax; ++k1)
        for (int k2 = 1; k2 <= kmax; ++k2) {
          const double s = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
          if (s <= limit) vals.push_back(s);
        }
    } else {
      for (int k1 = 1; k1 <= kmax; ++k1)
        for (int k2 = 1; k2 <= kmax; ++k2)
          for (int k3 = 1; k3 <= kmax; ++k3) {
            const double s = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                             static_cast<double>(k3) * k3;
            if (s <= limit) vals.push_back(s);
          }
    }
    if (static_cast<int>(vals.size()) >= count) break;
    limit *= 2.0;
  }
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

}  // namespace

double SpectralModel::drift_arg_weight() const {
  switch (params.family) {
    case Family::heat: return 0.0;
    case Family::damped_wave:
    case Family::beam: return -0.5;
    case Family::damped_wave_xi: return params.xi - 0.5;
  }
  return 0.0;
}

double SpectralModel::mode_eval(int n, double point) const {
  return std::sqrt(2.0 / std::numbers::pi) * std::sin(n * point);
}

SpectralModel build_model(const ModelParams& params_in) {
  ModelParams params = params_in;
  if (params.m < 1 || params.m > 3)
    throw UnsupportedFamily("spatial dimension m must be 1, 2 or 3");
  if (params.n_max < 1) throw UnsupportedFamily("n_max must be >= 1");

  SpectralModel model;
  if (params.family == Family::damped_wave_xi) {
    if (params.xi <= 0.0 || params.xi > 0.5)
      throw UnsupportedFamily("damped_wave_xi requires xi in (0, 1/2]");
    params.sigma = params.xi;
    params.gamma = params.xi;
    if (params.m != 1) throw UnsupportedFamily("damped_wave_xi is a 1-d construction");
  }
  model.params = params;

  switch (params.family) {
    case Family::heat: {
      model.mu = dirichlet_spectrum(params.m, params.n_max);
      model.mu_delta = 2.0 / params.m;
      break;
    }
    case Family::damped_wave:
    case Family::damped_wave_xi: {
      if (params.family == Family::damped_wave && params.m != 1)
        throw UnsupportedFamily("damped_wave lives on (0, pi)");
      model.mu.resize(params.n_max);
      for (int n = 1; n <= params.n_max; ++n)
        model.mu[n - 1] = static_cast<double>(n) * n;
      model.mu_delta = 2.0;
      break;
    }
    case Family::beam: {
      model.mu = dirichlet_spectrum(params.m, params.n_max);
      for (auto& v : model.mu) v = v * v;
      model.mu_delta = 4.0 / params.m;
      break;
    }
  }
  model.mu_c = model.mu.back() / std::pow(static_cast<double>(params.n_max), model.mu_delta);

  model.blocks.reserve(model.mu.size());
  for (int i = 0; i < static_cast<int>(model.mu.size()); ++i) {
    EigenBlock blk;
    if (params.family == Family::heat) {
      blk = build_heat_block(i + 1, model.mu[i], params.alpha, params.sigma, params.gamma);
    } else {
      blk = build_damped_block(model.mu[i], params.rho, params.alpha, params.eps_res,
                               params.sigma, params.gamma);
      blk.index = i + 1;
    }
    blk.g_coeff *= params.noise_scale;
    model.blocks.push_back(blk);
  }
  return model;
}

SpectralModel truncate_model(const SpectralModel& model, int n) {
  SpectralModel out = model;
  out.params.n_max = n;
  out.mu.resize(n);
  out.blocks.resize(n);
  return out;
}

OperatorFactorization factorization(const SpectralModel& model) {
  OperatorFactorization f;
  const int n = static_cast<int>(model.blocks.size());
  f.v_mult.resize(n);
  f.k_mult.resize(n);
  f.ltilde_mult.resize(n);
  f.gtilde_is_identity = model.family() == Family::heat;
  const double gamma_exp =
      model.family() == Family::heat ? 0.5 * model.params.gamma : model.params.gamma;
  for (int i = 0; i < n; ++i) {
    f.v_mult[i] = std::pow(model.mu[i], -gamma_exp) * model.params.noise_scale;
    f.k_mult[i] = std::pow(model.mu[i], -model.params.sigma);
    f.ltilde_mult[i] = model.blocks[i].ltilde_mult;
  }
  return f;
}

double commutation_residual(const SpectralModel& model) {
  // L~ G~ u versus G~ K u on every mode, with u the normalized mode vector.
  const auto f = factorization(model);
  double worst = 0.0;
  for (std::size_t i = 0; i < model.blocks.size(); ++i) {
    const auto& blk = model.blocks[i];
    const vec2 gtilde = blk.dim == 1 ? vec2{1.0, 0.0} : vec2{0.0, 1.0};
    const vec2 lhs = blk.ltilde_uv().apply(gtilde);
    const vec2 rhs = f.k_mult[i] * gtilde;
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

BlockOperator q_t(const SpectralModel& model, double t, int n_max) {
  if (t <= 0.0) throw std::invalid_argument("q_t: t must be positive");
  BlockOperator op;
  op.kind = BlockOperatorKind::Qt;
  op.t = t;
  const int n = std::min<int>(n_max, static_cast<int>(model.blocks.size()));
  op.blocks.reserve(n);
  op.dims.reserve(n);
  for (int i = 0; i < n; ++i) {
    op.blocks.push_back(block_qt(model.blocks[i], t));
    op.dims.push_back(model.blocks[i].dim);
  }
  return op;
}

mat2 block_gamma(const EigenBlock& block, double t, double cond_cap) {
  const mat2 q = block_qt(block, t);
  if (block.dim == 1) {
    if (q.m00 <= 0.0) throw SingularQt("block_gamma: Q_t vanishes on a scalar block");
    return mat2::diag(std::exp(block.lambda_plus.real() * t) / std::sqrt(q.m00), 0.0);
  }
  if (condition_number(q) > cond_cap) {
    std::ostringstream os;
    os << "block_gamma: Q_t condition number beyond " << cond_cap << " at mu=" << block.mu
       << " t=" << t;
    throw SingularQt(os.str());
  }
  return sym_inv_sqrt(q) * block.semigroup_uv(t);
}

double gamma_norm(const SpectralModel& model, double t, double cond_cap) {
  double best = 0.0;
  for (const auto& blk : model.blocks)
    best = std::max(best, spectral_norm(block_gamma(blk, t, cond_cap)));
  return best;
}

double gamma_gtilde_norm(const SpectralModel& model, double t, double cond_cap) {
  double best = 0.0;
  for (const auto& blk : model.blocks) {
    const vec2 gtilde = blk.dim == 1 ? vec2{1.0, 0.0} : vec2{0.0, 1.0};
    const vec2 img = block_gamma(blk, t, cond_cap).apply(gtilde);
    best = std::max(best, blk.dim == 1 ? std::abs(img.x) : img.norm());
  }
  return best;
}

}  // namespace spde
