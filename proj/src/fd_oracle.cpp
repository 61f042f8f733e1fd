#include "spde/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spde/engine.hpp"
#include "spde/errors.hpp"

namespace spde {

namespace {

// Solve (I - h L_h) y = rhs with L_h the Dirichlet (1,-2,1)/dx^2 operator on
// the interior nodes (Thomas algorithm, constant coefficients).
void solve_semi_implicit(std::vector<double>& rhs, double h, double dx,
                         std::vector<double>& scratch) {
  const int n = static_cast<int>(rhs.size());
  const double r = h / (dx * dx);
  const double diag = 1.0 + 2.0 * r;
  const double off = -r;
  scratch.resize(n);
  double beta = diag;
  rhs[0] /= beta;
  for (int i = 1; i < n; ++i) {
    scratch[i] = off / beta;
    beta = diag - off * scratch[i];
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / beta;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

}  // namespace

std::vector<FdComparisonRow> heat_fd_oracle(const SpectralModel& model,
                                            const DriftSpec& drift,
                                            std::span<const double> x0_modes, double T,
                                            std::span<const FdRefinementLevel> levels,
                                            std::uint64_t seed, std::uint64_t trajectory,
                                            std::int64_t fd_seed) {
  if (model.family() != Family::heat || model.params.m != 1)
    throw UnsupportedFamily("heat_fd_oracle: needs the heat family with m = 1");
  if (model.params.alpha != 1.0)
    throw UnsupportedFamily("heat_fd_oracle: the physical-space stencil realizes beta = 1");
  if (model.params.sigma != 0.0)
    throw UnsupportedFamily("heat_fd_oracle: sigma must be 0 for the pointwise drift");
  if (!drift.is_zero() && !drift.is_pointwise())
    throw std::invalid_argument("heat_fd_oracle: drift must be pointwise or zero");

  std::vector<FdComparisonRow> rows;
  for (const auto& level : levels) {
    const int g = level.grid_points;       // interior nodes: 1..g-1
    const int interior = g - 1;
    const double dx = std::numbers::pi / g;
    const int steps = level.steps;
    const double h = T / steps;
    const int n = std::min(level.n_modes, model.n_max());

    const SpectralModel m_n = truncate_model(model, n);
    SimOptions opt;
    opt.T = T;
    opt.steps = steps;
    opt.seed = seed;
    opt.scheme = NoiseScheme::euler_maruyama;
    Engine engine(m_n, drift, opt);

    // Basis table on the FD nodes.
    std::vector<double> basis(static_cast<std::size_t>(interior) * n);
    for (int i = 0; i < interior; ++i) {
      const double xi = (i + 1) * dx;
      for (int k = 0; k < n; ++k)
        basis[static_cast<std::size_t>(i) * n + k] = m_n.mode_eval(k + 1, xi);
    }

    // FD state on the interior nodes, started from the same modes.
    std::vector<double> y(interior, 0.0);
    for (int i = 0; i < interior; ++i)
      for (int k = 0; k < n && k < static_cast<int>(x0_modes.size()); ++k)
        y[i] += x0_modes[k] * basis[static_cast<std::size_t>(i) * n + k];

    const NoiseStream fd_noise(fd_seed >= 0 ? static_cast<std::uint64_t>(fd_seed) : seed,
                               trajectory);
    std::vector<double> rhs(interior), scratch;
    std::vector<double> spec_state;
    double discrepancy = 0.0;
    int next_obs = 0;
    const int obs_stride = std::max(1, steps / 16);

    // Lockstep: advance the spectral trajectory, and at each step advance the
    // FD solution with the same projected mode increments.
    std::vector<double> x0v(x0_modes.begin(), x0_modes.end());
    std::vector<std::vector<double>> spec_at_obs;
    std::vector<int> obs_steps;
    engine.run(trajectory, x0v, [&](int k, std::span<const double> x) {
      if (k == next_obs || k == steps) {
        spec_at_obs.emplace_back(x.begin(), x.end());
        obs_steps.push_back(k);
        next_obs += obs_stride;
      }
    });

    std::size_t obs_i = 0;
    for (int k = 0; k <= steps; ++k) {
      if (obs_i < obs_steps.size() && k == obs_steps[obs_i]) {
        // L2 gap on the grid.
        double acc = 0.0;
        const auto& u = spec_at_obs[obs_i];
        for (int i = 0; i < interior; ++i) {
          double ys = 0.0;
          for (int kk = 0; kk < n; ++kk)
            ys += u[kk] * basis[static_cast<std::size_t>(i) * n + kk];
          const double diff = ys - y[i];
          acc += diff * diff;
        }
        discrepancy = std::max(discrepancy, std::sqrt(dx * acc));
        ++obs_i;
      }
      if (k == steps) break;
      std::vector<double> dws(n);
      for (int kk = 0; kk < n; ++kk)
        dws[kk] = m_n.blocks[kk].g_coeff * fd_noise.brownian_increment(kk, k, h, 1, 0);
      for (int i = 0; i < interior; ++i) {
        const double xi = (i + 1) * dx;
        double noise = 0.0;
        for (int kk = 0; kk < n; ++kk)
          noise += dws[kk] * basis[static_cast<std::size_t>(i) * n + kk];
        const double c = drift.is_zero() ? 0.0 : drift.pointwise(xi, y[i], 0.0);
        rhs[i] = y[i] + h * c + noise;
      }
      solve_semi_implicit(rhs, h, dx, scratch);
      y = rhs;
    }
    rows.push_back({level, discrepancy});
  }
  return rows;
}

}  // namespace spde
