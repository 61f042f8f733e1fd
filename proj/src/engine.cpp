#include "spde/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/stats.hpp"

namespace spde {

struct Engine::Workspace {
  std::vector<double> z, v, b_out;
  explicit Workspace(int nblocks) : z(nblocks, 0.0), v(nblocks, 0.0), b_out(nblocks, 0.0) {}
};

Engine::Engine(const SpectralModel& model, DriftSpec drift, SimOptions opt)
    : model_(&model), drift_(std::move(drift)), opt_(opt) {
  if (opt_.steps < 1) throw std::invalid_argument("Engine: steps must be >= 1");
  if (opt_.micro_factor < 1) throw std::invalid_argument("Engine: micro_factor must be >= 1");
  bdim_ = model.block_dim();
  dim_ = model.state_dim();
  h_ = opt_.T / opt_.steps;
  h_micro_ = h_ / opt_.micro_factor;
  grid_.resize(opt_.steps + 1);
  for (int k = 0; k <= opt_.steps; ++k) grid_[k] = k * h_;

  blocks_.reserve(model.blocks.size());
  for (const auto& blk : model.blocks) {
    BlockData d;
    d.s_macro = blk.semigroup_uv(h_);
    d.s_micro = blk.semigroup_uv(h_micro_);
    d.g_col = blk.g_column();
    if (opt_.scheme == NoiseScheme::exact_ou && blk.g_coeff != 0.0) {
      d.cov_factor = psd_factor(block_qt(blk, h_micro_));
    } else {
      d.cov_factor = mat2::zero();
    }
    // Drift enters as L~ B = (G~ direction scaled by mu^{-sigma} B~_n),
    // integrated against the semigroup over one step.
    const vec2 lg = blk.dim == 1 ? vec2{blk.ltilde_mult, 0.0} : vec2{0.0, blk.ltilde_mult};
    d.drift_col = blk.drift_integral_uv(h_).apply(lg);
    blocks_.push_back(d);
  }

  if (!drift_.is_zero() && drift_.is_pointwise()) {
    const int nblocks = static_cast<int>(blocks_.size());
    grid_pts_ = drift_.grid_points;
    basis_table_.resize(static_cast<std::size_t>(grid_pts_) * nblocks);
    for (int i = 0; i < grid_pts_; ++i) {
      const double xi = std::numbers::pi * (i + 0.5) / grid_pts_;
      for (int n = 0; n < nblocks; ++n)
        basis_table_[static_cast<std::size_t>(i) * nblocks + n] = model_->mode_eval(n + 1, xi);
    }
  }
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;

double Engine::brownian_increment(std::uint64_t trajectory, int mode, int step) const {
  const NoiseStream ns(opt_.seed, trajectory);
  return ns.brownian_increment(static_cast<std::uint32_t>(mode), step, h_micro_,
                               opt_.micro_factor, 0);
}

void Engine::eval_drift(const std::vector<double>& state, Workspace& ws) const {
  const int nblocks = static_cast<int>(blocks_.size());
  const double arg_w = model_->drift_arg_weight();
  if (bdim_ == 1) {
    for (int n = 0; n < nblocks; ++n) {
      ws.z[n] = state[n];
      ws.v[n] = 0.0;
    }
  } else {
    for (int n = 0; n < nblocks; ++n) {
      ws.z[n] = std::pow(model_->mu[n], arg_w) * state[2 * n];
      ws.v[n] = state[2 * n + 1];
    }
  }
  if (drift_.kind == DriftSpec::Kind::mode_coefficients) {
    drift_.eval_modes(ws.z, ws.v, ws.b_out);
    return;
  }
  // Pointwise drift: synthesize y, y' on the midpoint grid, apply c, project
  // back onto the sine modes.
  const double hgrid = std::numbers::pi / grid_pts_;
  std::fill(ws.b_out.begin(), ws.b_out.end(), 0.0);
  for (int i = 0; i < grid_pts_; ++i) {
    const double* row = &basis_table_[static_cast<std::size_t>(i) * nblocks];
    double y = 0.0, yp = 0.0;
    for (int n = 0; n < nblocks; ++n) {
      y += ws.z[n] * row[n];
      yp += ws.v[n] * row[n];
    }
    const double c = drift_.pointwise(std::numbers::pi * (i + 0.5) / grid_pts_, y, yp);
    const double w = hgrid * c;
    for (int n = 0; n < nblocks; ++n) ws.b_out[n] += w * row[n];
  }
}

void Engine::advance(std::vector<double>& x, int k, const NoiseStream& ns,
                     Workspace& ws) const {
  const int nblocks = static_cast<int>(blocks_.size());
  const bool has_drift = !drift_.is_zero();
  if (has_drift) eval_drift(x, ws);
  double check = 0.0;
  for (int n = 0; n < nblocks; ++n) {
    const BlockData& d = blocks_[n];
    if (bdim_ == 1) {
      double xn = d.s_macro.m00 * x[n];
      if (has_drift) xn += d.drift_col.x * ws.b_out[n];
      if (opt_.scheme == NoiseScheme::exact_ou) {
        double inc = 0.0;
        for (int j = 0; j < opt_.micro_factor; ++j) {
          const std::uint64_t micro = static_cast<std::uint64_t>(k) * opt_.micro_factor + j;
          inc = d.s_micro.m00 * inc + d.cov_factor.m00 * ns.normal(n, micro, 0);
        }
        xn += inc;
      } else {
        xn += d.s_macro.m00 * d.g_col.x *
              ns.brownian_increment(n, k, h_micro_, opt_.micro_factor, 0);
      }
      x[n] = xn;
      check += xn;
    } else {
      vec2 xv{x[2 * n], x[2 * n + 1]};
      xv = d.s_macro.apply(xv);
      if (has_drift) {
        xv.x += d.drift_col.x * ws.b_out[n];
        xv.y += d.drift_col.y * ws.b_out[n];
      }
      if (opt_.scheme == NoiseScheme::exact_ou) {
        vec2 inc{0.0, 0.0};
        for (int j = 0; j < opt_.micro_factor; ++j) {
          const std::uint64_t micro = static_cast<std::uint64_t>(k) * opt_.micro_factor + j;
          const vec2 xi{ns.normal(n, micro, 0), ns.normal(n, micro, 1)};
          inc = d.s_micro.apply(inc) + d.cov_factor.apply(xi);
        }
        xv = xv + inc;
      } else {
        const double dw = ns.brownian_increment(n, k, h_micro_, opt_.micro_factor, 0);
        xv = xv + dw * d.s_macro.apply(d.g_col);
      }
      x[2 * n] = xv.x;
      x[2 * n + 1] = xv.y;
      check += xv.x + xv.y;
    }
  }
  if (!std::isfinite(check)) {
    std::ostringstream os;
    os << "Engine: non-finite state after step " << k + 1;
    throw NonFiniteState(os.str());
  }
}

void Engine::run(std::uint64_t trajectory, std::span<const double> x0,
                 const std::function<void(int, std::span<const double>)>& observe) const {
  std::vector<double> x(dim_, 0.0);
  std::copy_n(x0.begin(), std::min<std::size_t>(x0.size(), x.size()), x.begin());
  const NoiseStream ns(opt_.seed, trajectory);
  Workspace ws(static_cast<int>(blocks_.size()));
  observe(0, x);
  for (int k = 0; k < opt_.steps; ++k) {
    advance(x, k, ns, ws);
    observe(k + 1, x);
  }
}

void Engine::step_once(std::uint64_t trajectory, int step_index, std::span<const double> in,
                       std::vector<double>& out) const {
  out.assign(dim_, 0.0);
  std::copy_n(in.begin(), std::min<std::size_t>(in.size(), out.size()), out.begin());
  const NoiseStream ns(opt_.seed, trajectory);
  Workspace ws(static_cast<int>(blocks_.size()));
  advance(out, step_index, ns, ws);
}

std::vector<GalerkinState> sample_convolution(const SpectralModel& model, std::uint64_t seed,
                                              std::uint64_t trajectory, double T, int steps) {
  SimOptions opt;
  opt.T = T;
  opt.steps = steps;
  opt.seed = seed;
  Engine engine(model, DriftSpec::zero(), opt);
  std::vector<GalerkinState> out(steps + 1);
  engine.run(trajectory, {}, [&](int k, std::span<const double> x) {
    out[k].truncation = model.n_max();
    out[k].time = engine.grid()[k];
    out[k].coeffs.assign(x.begin(), x.end());
  });
  return out;
}

GalerkinState exponential_euler_step(const SpectralModel& model, const GalerkinState& state,
                                     const DriftSpec& drift, std::uint64_t seed,
                                     std::uint64_t trajectory, int step_index, double h,
                                     NoiseScheme scheme) {
  SimOptions opt;
  opt.T = h;
  opt.steps = 1;
  opt.seed = seed;
  opt.scheme = scheme;
  Engine engine(model, drift, opt);
  GalerkinState next;
  next.truncation = state.truncation;
  next.time = state.time + h;
  engine.step_once(trajectory, step_index, state.coeffs, next.coeffs);
  return next;
}

PathEnsemble simulate_ensemble(const SpectralModel& model, const DriftSpec& drift,
                               std::span<const double> x0, const SimOptions& opt) {
  Engine engine(model, drift, opt);
  PathEnsemble ens;
  ens.model_params = model.params;
  ens.grid = engine.grid();
  ens.seed = opt.seed;
  ens.scheme = opt.scheme;
  ens.micro_factor = opt.micro_factor;
  ens.trajectories.resize(opt.trajectories);
  std::vector<double> x0v(x0.begin(), x0.end());
  parallel_for(opt.trajectories, [&](std::size_t tr) {
    auto& states = ens.trajectories[tr];
    states.resize(opt.steps + 1);
    engine.run(tr, x0v, [&](int k, std::span<const double> x) {
      states[k].truncation = model.n_max();
      states[k].time = ens.grid[k];
      states[k].coeffs.assign(x.begin(), x.end());
    });
  });
  return ens;
}

namespace {

std::vector<int> observation_steps(int steps, int observe_count) {
  std::vector<int> obs;
  const int count = std::min(steps, std::max(1, observe_count));
  for (int i = 1; i <= count; ++i)
    obs.push_back(static_cast<int>(std::llround(static_cast<double>(i) * steps / count)));
  obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
  return obs;
}

}  // namespace

CouplingDiagnostics couple_and_measure(const SpectralModel& model, const DriftSpec& drift,
                                       std::span<const double> x1, std::span<const double> x2,
                                       const SimOptions& opt, int observe_count) {
  Engine engine(model, drift, opt);
  const auto obs = observation_steps(opt.steps, observe_count);
  const int nobs = static_cast<int>(obs.size());
  const int dim = engine.dim();

  CouplingDiagnostics diag;
  diag.times.resize(nobs);
  for (int i = 0; i < nobs; ++i) diag.times[i] = engine.grid()[obs[i]];
  double d2 = 0.0;
  for (std::size_t i = 0; i < std::max(x1.size(), x2.size()); ++i) {
    const double a = i < x1.size() ? x1[i] : 0.0;
    const double b = i < x2.size() ? x2[i] : 0.0;
    d2 += (a - b) * (a - b);
  }
  diag.initial_distance2 = d2;
  diag.v_hilbert_schmidt = v_is_hilbert_schmidt(model);

  // Per-trajectory squared gaps at observation times, merged in index order.
  std::vector<double> slab(static_cast<std::size_t>(opt.trajectories) * nobs);
  std::vector<double> slab_sup(opt.trajectories);
  std::vector<double> x1v(x1.begin(), x1.end()), x2v(x2.begin(), x2.end());
  parallel_for(opt.trajectories, [&](std::size_t tr) {
    std::vector<double> first(static_cast<std::size_t>(nobs) * dim);
    int oi = 0;
    engine.run(tr, x1v, [&](int k, std::span<const double> x) {
      if (oi < nobs && k == obs[oi]) {
        std::copy(x.begin(), x.end(), first.begin() + static_cast<std::size_t>(oi) * dim);
        ++oi;
      }
    });
    int oj = 0;
    double sup = 0.0;
    engine.run(tr, x2v, [&](int k, std::span<const double> x) {
      if (oj < nobs && k == obs[oj]) {
        const double* ref = &first[static_cast<std::size_t>(oj) * dim];
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double diff = x[i] - ref[i];
          acc += diff * diff;
        }
        slab[tr * nobs + oj] = acc;
        sup = std::max(sup, acc);
        ++oj;
      }
    });
    slab_sup[tr] = sup;
  });

  diag.delta_mean.resize(nobs);
  diag.delta_se.resize(nobs);
  diag.holder_moment.resize(nobs);
  const double theta = drift.is_zero() ? model.params.theta : drift.theta;
  for (int i = 0; i < nobs; ++i) {
    MomentAccumulator acc;
    KahanSum holder;
    for (int tr = 0; tr < opt.trajectories; ++tr) {
      const double val = slab[static_cast<std::size_t>(tr) * nobs + i];
      acc.add(val);
      holder.add(std::pow(val, theta));
    }
    diag.delta_mean[i] = acc.mean();
    diag.delta_se[i] = acc.standard_error();
    diag.holder_moment[i] = holder.value() / opt.trajectories;
    diag.sup_delta = std::max(diag.sup_delta, diag.delta_mean[i]);
  }
  KahanSum esup;
  for (int tr = 0; tr < opt.trajectories; ++tr) esup.add(slab_sup[tr]);
  diag.esup_delta = esup.value() / opt.trajectories;
  if (d2 > 0.0) {
    diag.lipschitz_ratio = diag.sup_delta / d2;
    diag.esup_ratio = diag.esup_delta / d2;
  }
  return diag;
}

std::vector<ConvergenceRow> galerkin_convergence(const SpectralModel& model,
                                                 const DriftSpec& drift,
                                                 std::span<const double> x0,
                                                 const SimOptions& opt,
                                                 const std::vector<int>& n_list, int n_ref,
                                                 int observe_count) {
  if (n_ref > model.n_max())
    throw std::invalid_argument("galerkin_convergence: n_ref exceeds the built model");
  for (int n : n_list)
    if (n >= n_ref)
      throw std::invalid_argument("galerkin_convergence: every n must be < n_ref");

  const SpectralModel ref_model = truncate_model(model, n_ref);
  Engine ref_engine(ref_model, drift, opt);
  const auto obs = observation_steps(opt.steps, observe_count);
  const int nobs = static_cast<int>(obs.size());
  const int ref_dim = ref_engine.dim();

  std::vector<SpectralModel> models;
  models.reserve(n_list.size());
  std::vector<Engine> engines;
  engines.reserve(n_list.size());
  for (int n : n_list) models.push_back(truncate_model(model, n));
  for (std::size_t i = 0; i < n_list.size(); ++i) engines.emplace_back(models[i], drift, opt);

  std::vector<double> x0v(x0.begin(), x0.end());
  const double theta = drift.is_zero() ? model.params.theta : drift.theta;

  const std::size_t runs = n_list.size();
  std::vector<double> slab(static_cast<std::size_t>(opt.trajectories) * runs * nobs);
  parallel_for(opt.trajectories, [&](std::size_t tr) {
    std::vector<double> ref_states(static_cast<std::size_t>(nobs) * ref_dim);
    int oi = 0;
    ref_engine.run(tr, x0v, [&](int k, std::span<const double> x) {
      if (oi < nobs && k == obs[oi]) {
        std::copy(x.begin(), x.end(),
                  ref_states.begin() + static_cast<std::size_t>(oi) * ref_dim);
        ++oi;
      }
    });
    for (std::size_t run = 0; run < runs; ++run) {
      const int ndim = engines[run].dim();
      int oj = 0;
      engines[run].run(tr, x0v, [&](int k, std::span<const double> x) {
        if (oj < nobs && k == obs[oj]) {
          const double* ref = &ref_states[static_cast<std::size_t>(oj) * ref_dim];
          double acc = 0.0;
          for (int i = 0; i < ndim; ++i) {
            const double diff = x[i] - ref[i];
            acc += diff * diff;
          }
          for (int i = ndim; i < ref_dim; ++i) acc += ref[i] * ref[i];
          slab[(tr * runs + run) * nobs + oj] = acc;
          ++oj;
        }
      });
    }
  });

  std::vector<ConvergenceRow> rows;
  for (std::size_t run = 0; run < runs; ++run) {
    ConvergenceRow row;
    row.n = n_list[run];
    for (int i = 0; i < nobs; ++i) {
      MomentAccumulator acc;
      KahanSum holder;
      for (int tr = 0; tr < opt.trajectories; ++tr) {
        const double val = slab[(static_cast<std::size_t>(tr) * runs + run) * nobs + i];
        acc.add(val);
        holder.add(std::pow(val, theta));
      }
      if (acc.mean() >= row.sup_mse) {
        row.sup_mse = acc.mean();
        row.sup_mse_se = acc.standard_error();
      }
      row.holder_sup = std::max(row.holder_sup, holder.value() / opt.trajectories);
    }
    KahanSum esup;
    for (int tr = 0; tr < opt.trajectories; ++tr) {
      double sup = 0.0;
      for (int i = 0; i < nobs; ++i)
        sup = std::max(sup, slab[(static_cast<std::size_t>(tr) * runs + run) * nobs + i]);
      esup.add(sup);
    }
    row.esup_mse = esup.value() / opt.trajectories;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvolutionCell> convolution_moment_check(const SpectralModel& model,
                                                      const std::vector<double>& times,
                                                      int trajectories, std::uint64_t seed) {
  if (times.empty()) return {};
  const double T = times.back();
  const int steps = static_cast<int>(times.size()) * 4;
  SimOptions opt;
  opt.T = T;
  opt.steps = steps;
  opt.seed = seed;
  Engine engine(model, DriftSpec::zero(), opt);

  std::vector<int> obs;
  for (double t : times)
    obs.push_back(std::clamp(static_cast<int>(std::llround(t / engine.step_size())), 1, steps));
  const int nobs = static_cast<int>(obs.size());
  const int bdim = model.block_dim();
  const int nblocks = static_cast<int>(model.blocks.size());
  const int cells_per_obs = nblocks * (bdim == 1 ? 1 : 3);

  const int chunk = 512;
  const int nchunks = (trajectories + chunk - 1) / chunk;
  std::vector<std::vector<MomentAccumulator>> partial(
      nchunks, std::vector<MomentAccumulator>(static_cast<std::size_t>(nobs) * cells_per_obs));

  parallel_for(
      nchunks,
      [&](std::size_t ci) {
        auto& accs = partial[ci];
        const int lo = static_cast<int>(ci) * chunk;
        const int hi = std::min(trajectories, lo + chunk);
        for (int tr = lo; tr < hi; ++tr) {
          int oi = 0;
          engine.run(tr, {}, [&](int k, std::span<const double> x) {
            while (oi < nobs && k == obs[oi]) {
              for (int n = 0; n < nblocks; ++n) {
                if (bdim == 1) {
                  accs[static_cast<std::size_t>(oi) * cells_per_obs + n].add(x[n] * x[n]);
                } else {
                  const double u = x[2 * n], v = x[2 * n + 1];
                  const std::size_t base =
                      static_cast<std::size_t>(oi) * cells_per_obs + 3 * n;
                  accs[base + 0].add(u * u);
                  accs[base + 1].add(u * v);
                  accs[base + 2].add(v * v);
                }
              }
              ++oi;
            }
          });
        }
      },
      1);

  std::vector<MomentAccumulator> total(static_cast<std::size_t>(nobs) * cells_per_obs);
  for (int ci = 0; ci < nchunks; ++ci)
    for (std::size_t i = 0; i < total.size(); ++i) total[i].merge(partial[ci][i]);

  std::vector<ConvolutionCell> cells;
  for (int oi = 0; oi < nobs; ++oi) {
    const double t = engine.grid()[obs[oi]];
    for (int n = 0; n < nblocks; ++n) {
      const mat2 q = block_qt(model.blocks[n], t);
      auto push = [&](int i, int j, double exact, const MomentAccumulator& acc) {
        ConvolutionCell c;
        c.block = n + 1;
        c.time = t;
        c.i = i;
        c.j = j;
        c.empirical = acc.mean();
        c.se = acc.standard_error();
        c.exact = exact;
        c.zscore = c.se > 0.0 ? (c.empirical - c.exact) / c.se : 0.0;
        cells.push_back(c);
      };
      if (bdim == 1) {
        push(0, 0, q.m00, total[static_cast<std::size_t>(oi) * cells_per_obs + n]);
      } else {
        const std::size_t base = static_cast<std::size_t>(oi) * cells_per_obs + 3 * n;
        push(0, 0, q.m00, total[base + 0]);
        push(0, 1, q.m01, total[base + 1]);
        push(1, 1, q.m11, total[base + 2]);
      }
    }
  }
  return cells;
}

bool v_is_hilbert_schmidt(const SpectralModel& model) {
  const double gamma_eff =
      model.family() == Family::heat ? 0.5 * model.params.gamma : model.params.gamma;
  return 2.0 * gamma_eff * model.mu_delta > 1.0;
}

}  // namespace spde
