#include "spde/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spde/engine.hpp"
#include "spde/errors.hpp"
#include "spde/quadrature.hpp"

namespace spde {

namespace {

// Multilinear interpolation helpers over a uniform axis [-L, L].
struct AxisLocate {
  int i0;
  double w;  // weight of node i0+1
};

AxisLocate locate(double x, double half_width, double dx, int nx) {
  double c = std::clamp(x, -half_width, half_width);
  double pos = (c + half_width) / dx;
  int i0 = static_cast<int>(pos);
  if (i0 >= nx - 1) i0 = nx - 2;
  return {i0, pos - i0};
}

}  // namespace

bool KolmogorovSolution::inside_box(std::span<const double> x) const {
  for (int c = 0; c < dim_; ++c)
    if (std::abs(x[c]) > half_width_) return false;
  return true;
}

void KolmogorovSolution::value(int t_index, std::span<const double> x,
                               std::span<double> out) const {
  if (dim_ == 1) {
    const auto loc = locate(x[0], half_width_, dx_, nx_);
    out[0] = (1.0 - loc.w) * values_[idx(t_index, loc.i0, 0)] +
             loc.w * values_[idx(t_index, loc.i0 + 1, 0)];
    return;
  }
  const auto lx = locate(x[0], half_width_, dx_, nx_);
  const auto ly = locate(x[1], half_width_, dx_, nx_);
  const int n00 = lx.i0 * nx_ + ly.i0;
  const int n01 = lx.i0 * nx_ + ly.i0 + 1;
  const int n10 = (lx.i0 + 1) * nx_ + ly.i0;
  const int n11 = (lx.i0 + 1) * nx_ + ly.i0 + 1;
  for (int c = 0; c < 2; ++c) {
    out[c] = (1.0 - lx.w) * ((1.0 - ly.w) * values_[idx(t_index, n00, c)] +
                             ly.w * values_[idx(t_index, n01, c)]) +
             lx.w * ((1.0 - ly.w) * values_[idx(t_index, n10, c)] +
                     ly.w * values_[idx(t_index, n11, c)]);
  }
}

void KolmogorovSolution::value_at(double t, std::span<const double> x,
                                  std::span<double> out) const {
  const double dt = T_ / nt_;
  double pos = std::clamp(t, 0.0, T_) / dt;
  int i0 = std::min(static_cast<int>(pos), nt_ - 1);
  const double w = pos - i0;
  double lo[2], hi[2];
  value(i0, x, std::span<double>(lo, dim_));
  value(i0 + 1, x, std::span<double>(hi, dim_));
  for (int c = 0; c < dim_; ++c) out[c] = (1.0 - w) * lo[c] + w * hi[c];
}

void KolmogorovSolution::jacobian(int t_index, std::span<const double> x,
                                  std::span<double> out) const {
  // Centered differences of the interpolant with step dx (one-sided clamping
  // is inherited from the interpolation at the box edge).
  double xp[2], xm[2], up[2], um[2];
  for (int a = 0; a < dim_; ++a) {
    for (int c = 0; c < dim_; ++c) {
      xp[c] = x[c];
      xm[c] = x[c];
    }
    xp[a] += 0.5 * dx_;
    xm[a] -= 0.5 * dx_;
    value(t_index, std::span<const double>(xp, dim_), std::span<double>(up, dim_));
    value(t_index, std::span<const double>(xm, dim_), std::span<double>(um, dim_));
    for (int c = 0; c < dim_; ++c) out[c * dim_ + a] = (up[c] - um[c]) / dx_;
  }
}

void KolmogorovSolution::jacobian_at(double t, std::span<const double> x,
                                     std::span<double> out) const {
  const double dt = T_ / nt_;
  double pos = std::clamp(t, 0.0, T_) / dt;
  int i0 = std::min(static_cast<int>(pos), nt_ - 1);
  const double w = pos - i0;
  double lo[4], hi[4];
  jacobian(i0, x, std::span<double>(lo, dim_ * dim_));
  jacobian(i0 + 1, x, std::span<double>(hi, dim_ * dim_));
  for (int c = 0; c < dim_ * dim_; ++c) out[c] = (1.0 - w) * lo[c] + w * hi[c];
}

KolmogorovSolution solve_kolmogorov_picard(const SpectralModel& model, const DriftSpec& drift,
                                           double T, const KolmogorovGrid& grid) {
  const SpectralModel m1 = truncate_model(model, 1);
  const int dim = m1.state_dim();
  if (dim > 2) throw UnsupportedFamily("solve_kolmogorov_picard: state dimension must be <= 2");
  const EigenBlock& blk = m1.blocks.front();

  KolmogorovSolution sol;
  sol.dim_ = dim;
  sol.nx_ = grid.points_per_axis;
  sol.nt_ = grid.time_steps;
  sol.T_ = T;
  sol.half_width_ = grid.half_width;
  sol.dx_ = 2.0 * grid.half_width / (grid.points_per_axis - 1);
  sol.nodes_ = dim == 1 ? sol.nx_ : sol.nx_ * sol.nx_;
  sol.axis_.resize(sol.nx_);
  for (int i = 0; i < sol.nx_; ++i) sol.axis_[i] = -grid.half_width + i * sol.dx_;
  sol.values_.assign(static_cast<std::size_t>(sol.nt_ + 1) * sol.nodes_ * dim, 0.0);

  const double dt = T / sol.nt_;
  const mat2 s_dt = blk.semigroup_uv(dt);
  const mat2 q_dt = blk.g_coeff != 0.0 ? block_qt(blk, dt) : mat2::zero();
  const mat2 cov_factor = psd_factor(q_dt);
  const bool noisy = spectral_norm(cov_factor) > 0.0;
  static const GaussHermite gh(21);
  const int ghn = static_cast<int>(gh.nodes.size());

  const double arg_w = m1.drift_arg_weight();
  auto drift_b = [&](const double* x, double* b_vec) {
    // B(x) = G~ B~(x): the mode output lands on the G~ direction.
    double z[1], v[1], out[1];
    if (dim == 1) {
      z[0] = x[0];
      v[0] = 0.0;
    } else {
      z[0] = std::pow(blk.mu, arg_w) * x[0];
      v[0] = x[1];
    }
    drift.eval_modes(std::span<const double>(z, 1), std::span<const double>(v, 1),
                     std::span<double>(out, 1));
    if (dim == 1) {
      b_vec[0] = out[0];
    } else {
      b_vec[0] = 0.0;
      b_vec[1] = out[0];
    }
  };

  auto node_coords = [&](int node, double* x) {
    if (dim == 1) {
      x[0] = sol.axis_[node];
    } else {
      x[0] = sol.axis_[node / sol.nx_];
      x[1] = sol.axis_[node % sol.nx_];
    }
  };

  // One Picard sweep: new = T(old), returns sup |new - old|.
  std::vector<double> next(sol.values_.size());
  std::vector<double> v_field(static_cast<std::size_t>(sol.nt_ + 1) * sol.nodes_ * dim);
  auto sweep = [&](const std::vector<double>& cur) {
    // V(t, x) = DU(t, x) L~ B(x) + B(x) from the current iterate.
    KolmogorovSolution view = sol;  // borrow interpolation over `cur`
    view.values_ = cur;
    for (int ti = 0; ti <= sol.nt_; ++ti) {
      for (int node = 0; node < sol.nodes_; ++node) {
        double x[2], b_vec[2], jac[4], lb[2];
        node_coords(node, x);
        drift_b(x, b_vec);
        // L~ B
        if (dim == 1) {
          lb[0] = blk.ltilde_mult * b_vec[0];
        } else {
          lb[0] = 0.0;
          lb[1] = blk.ltilde_mult * b_vec[1];
        }
        view.jacobian(ti, std::span<const double>(x, dim), std::span<double>(jac, dim * dim));
        for (int c = 0; c < dim; ++c) {
          double dot = 0.0;
          for (int a = 0; a < dim; ++a) dot += jac[c * dim + a] * lb[a];
          v_field[(static_cast<std::size_t>(ti) * sol.nodes_ + node) * dim + c] =
              dot + b_vec[c];
        }
      }
    }
    // Backward recursion: U(t_i) = dt/2 V(t_i) + R_dt[ U(t_{i+1}) + dt/2 V(t_{i+1}) ].
    std::vector<double> carry(static_cast<std::size_t>(sol.nodes_) * dim);
    for (int c = 0; c < sol.nodes_ * dim; ++c) next[sol.idx(sol.nt_, 0, 0) + c] = 0.0;
    KolmogorovSolution level = sol;  // interpolator for the carry level
    level.nt_ = 0;
    level.values_.resize(static_cast<std::size_t>(sol.nodes_) * dim);
    for (int ti = sol.nt_ - 1; ti >= 0; --ti) {
      // carry = U(t_{i+1}) + dt/2 V(t_{i+1}) (from `next` at level ti+1).
      for (int k = 0; k < sol.nodes_ * dim; ++k) {
        carry[k] = next[(static_cast<std::size_t>(ti) + 1) * sol.nodes_ * dim + k] +
                   0.5 * dt * v_field[(static_cast<std::size_t>(ti) + 1) * sol.nodes_ * dim + k];
      }
      level.values_ = carry;
      for (int node = 0; node < sol.nodes_; ++node) {
        double x[2];
        node_coords(node, x);
        const vec2 mean = dim == 1 ? vec2{s_dt.m00 * x[0], 0.0}
                                   : s_dt.apply(vec2{x[0], x[1]});
        double acc[2] = {0.0, 0.0};
        if (!noisy) {
          double y[2] = {mean.x, mean.y};
          double val[2];
          level.value(0, std::span<const double>(y, dim), std::span<double>(val, dim));
          acc[0] = val[0];
          acc[1] = dim == 2 ? val[1] : 0.0;
        } else if (dim == 1) {
          for (int q = 0; q < ghn; ++q) {
            double y[1] = {mean.x + cov_factor.m00 * gh.nodes[q]};
            double val[1];
            level.value(0, std::span<const double>(y, 1), std::span<double>(val, 1));
            acc[0] += gh.weights[q] * val[0];
          }
        } else {
          for (int q1 = 0; q1 < ghn; ++q1) {
            for (int q2 = 0; q2 < ghn; ++q2) {
              const vec2 noise = cov_factor.apply(vec2{gh.nodes[q1], gh.nodes[q2]});
              double y[2] = {mean.x + noise.x, mean.y + noise.y};
              double val[2];
              level.value(0, std::span<const double>(y, 2), std::span<double>(val, 2));
              const double w = gh.weights[q1] * gh.weights[q2];
              acc[0] += w * val[0];
              acc[1] += w * val[1];
            }
          }
        }
        for (int c = 0; c < dim; ++c) {
          next[(static_cast<std::size_t>(ti) * sol.nodes_ + node) * dim + c] =
              0.5 * dt *
                  v_field[(static_cast<std::size_t>(ti) * sol.nodes_ + node) * dim + c] +
              acc[c];
        }
      }
    }
    double delta = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k)
      delta = std::max(delta, std::abs(next[k] - cur[k]));
    return delta;
  };

  double prev_delta = 0.0;
  int rising = 0;
  for (int it = 1; it <= 100; ++it) {
    const double delta = sweep(sol.values_);
    sol.values_ = next;
    sol.iterations = it;
    sol.final_delta = delta;
    if (it > 1 && prev_delta > 0.0) {
      const double ratio = delta / prev_delta;
      sol.contraction_ratios.push_back(ratio);
      rising = ratio >= 1.0 ? rising + 1 : 0;
      if (rising >= 3) {
        std::ostringstream os;
        os << "solve_kolmogorov_picard: no contraction (ratio " << ratio
           << "); halve T (currently " << T << ") and retry";
        throw NoContraction(os.str());
      }
    }
    prev_delta = delta;
    if (delta < 1e-8) break;
  }
  // Residual of the fixed point under one more application of the operator.
  sol.residual = sweep(sol.values_);

  // Diagnostics and the measured constant of the gradient estimate.
  double sup_u = 0.0, sup_du = 0.0, sup_dug = 0.0;
  const vec2 gtilde = dim == 1 ? vec2{1.0, 0.0} : vec2{0.0, 1.0};
  for (int ti = 0; ti <= sol.nt_; ++ti) {
    for (int node = 0; node < sol.nodes_; ++node) {
      double x[2], jac[4];
      node_coords(node, x);
      double unorm = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double u = sol.values_[(static_cast<std::size_t>(ti) * sol.nodes_ + node) * dim + c];
        unorm += u * u;
      }
      sup_u = std::max(sup_u, std::sqrt(unorm));
      sol.jacobian(ti, std::span<const double>(x, dim), std::span<double>(jac, dim * dim));
      double fro = 0.0, dug = 0.0;
      for (int c = 0; c < dim; ++c) {
        double row_g = 0.0;
        for (int a = 0; a < dim; ++a) {
          fro += jac[c * dim + a] * jac[c * dim + a];
          row_g += jac[c * dim + a] * (a == 0 ? gtilde.x : gtilde.y);
        }
        dug += row_g * row_g;
      }
      sup_du = std::max(sup_du, std::sqrt(fro));
      sup_dug = std::max(sup_dug, std::sqrt(dug));
    }
  }
  sol.sup_norm = sup_u;
  sol.grad_sup_norm = sup_du;
  const double b_norm = drift.mode_norm(0);
  sol.measured_m = b_norm > 0.0 ? (sup_u + sup_du + sup_dug) / b_norm : 0.0;
  return sol;
}

TransformedRepresentationCheck check_transformed_representation(
    const SpectralModel& model, const DriftSpec& drift, const KolmogorovSolution& kolmogorov,
    double T, int steps, std::uint64_t seed, std::uint64_t trajectory) {
  const SpectralModel m1 = truncate_model(model, 1);
  const int dim = m1.state_dim();
  const EigenBlock& blk = m1.blocks.front();

  SimOptions opt;
  opt.T = T;
  opt.steps = steps;
  opt.seed = seed;
  opt.scheme = NoiseScheme::euler_maruyama;
  Engine engine(m1, drift, opt);

  std::vector<double> path(static_cast<std::size_t>(steps + 1) * dim);
  std::vector<double> x0(dim, 0.0);
  engine.run(trajectory, x0, [&](int k, std::span<const double> x) {
    std::copy(x.begin(), x.end(), path.begin() + static_cast<std::size_t>(k) * dim);
  });
  for (int k = 0; k <= steps; ++k)
    if (!kolmogorov.inside_box(
            std::span<const double>(&path[static_cast<std::size_t>(k) * dim], dim)))
      throw PathLeftBox("check_transformed_representation: trajectory exited the grid box");

  const double h = T / steps;
  const vec2 g_col = blk.g_column();
  auto ltilde = [&](vec2 w) {
    return blk.dim == 1 ? vec2{blk.ltilde_mult * w.x, 0.0}
                        : vec2{0.0, blk.ltilde_mult * w.y};
  };
  auto u_at = [&](double t, const double* x) {
    double val[2] = {0.0, 0.0};
    kolmogorov.value_at(t, std::span<const double>(x, dim), std::span<double>(val, dim));
    return vec2{val[0], dim == 2 ? val[1] : 0.0};
  };
  auto du_at = [&](double t, const double* x) {
    double jac[4] = {0.0, 0.0, 0.0, 0.0};
    kolmogorov.jacobian_at(t, std::span<const double>(x, dim), std::span<double>(jac, dim * dim));
    if (dim == 1) return mat2::diag(jac[0], 0.0);
    return mat2{jac[0], jac[1], jac[2], jac[3]};
  };

  TransformedRepresentationCheck out;
  out.deviations.resize(steps + 1, 0.0);
  const vec2 x0v{0.0, 0.0};
  for (int k = 0; k <= steps; ++k) {
    const double t = k * h;
    const double* xk = &path[static_cast<std::size_t>(k) * dim];
    const vec2 state{xk[0], dim == 2 ? xk[1] : 0.0};

    // e^{tA} x0 and the two boundary U-terms.
    vec2 rhs = blk.semigroup_uv(t).apply(x0v);
    rhs = rhs - ltilde(u_at(t, xk));
    double u0[2] = {0.0, 0.0};
    const vec2 u_init = u_at(0.0, u0);
    rhs = rhs + blk.semigroup_uv(t).apply(ltilde(u_init));

    // -A ∫_0^t e^{(t-s)A} L~ U(s, X_s) ds, trapezoid on the path grid.
    vec2 integral{0.0, 0.0};
    for (int j = 0; j <= k; ++j) {
      const double s = j * h;
      const double* xs = &path[static_cast<std::size_t>(j) * dim];
      const vec2 term =
          blk.a.apply(blk.semigroup_uv(t - s).apply(ltilde(u_at(s, xs))));
      const double w = (j == 0 || j == k) ? 0.5 * h : h;
      integral = integral + w * term;
    }
    rhs = rhs - integral;

    // Ito sums with the recorded increments (left point).
    vec2 ito{0.0, 0.0};
    for (int j = 0; j < k; ++j) {
      const double s = j * h;
      const double* xs = &path[static_cast<std::size_t>(j) * dim];
      const double dw = engine.brownian_increment(trajectory, 0, j);
      const mat2 prop = blk.semigroup_uv(t - s);
      // e^{(t-s)A} G dW
      ito = ito + dw * prop.apply(g_col);
      // e^{(t-s)A} L~ DU(s, X_s) G dW
      ito = ito + dw * prop.apply(ltilde(du_at(s, xs).apply(g_col)));
    }
    rhs = rhs + ito;

    const vec2 diff = state - rhs;
    out.deviations[k] = diff.norm();
    out.max_deviation = std::max(out.max_deviation, out.deviations[k]);
  }
  return out;
}

}  // namespace spde
