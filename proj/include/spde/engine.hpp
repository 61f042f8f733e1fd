#pragma once

// Exponential (semigroup-splitting) Euler for the truncated equations
//
//   dX_n = A_n X_n dt + L~_n B_n(X_n) dt + G_n dW,
//
// with the linear part integrated exactly per block and the stochastic
// convolution increment drawn from its exact per-block law (mean e^{hA} x,
// covariance Q_h). Noise is counter-based and keyed by (seed, trajectory,
// mode, micro step), so ensembles are reproducible independently of thread
// count and two truncations driven by the same stream share their low-mode
// increments exactly.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spde/drift.hpp"
#include "spde/model.hpp"
#include "spde/noise.hpp"

namespace spde {

struct GalerkinState {
  int truncation = 0;
  double time = 0.0;
  std::vector<double> coeffs;  // uv coordinates, block-major
};

enum class NoiseScheme {
  exact_ou,         // exact OU transition per block (production)
  euler_maruyama,   // left-point increments e^{hA} G dW; keeps raw dW usable
};

struct SimOptions {
  double T = 1.0;
  int steps = 100;
  int trajectories = 1;
  std::uint64_t seed = 0;
  int micro_factor = 1;  // noise resolution = steps * micro_factor
  NoiseScheme scheme = NoiseScheme::exact_ou;
};

class Engine {
 public:
  Engine(const SpectralModel& model, DriftSpec drift, SimOptions opt);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const SpectralModel& model() const { return *model_; }
  const SimOptions& options() const { return opt_; }
  int dim() const { return dim_; }
  double step_size() const { return h_; }
  const std::vector<double>& grid() const { return grid_; }

  // Runs one trajectory from x0 (uv coordinates, padded/truncated to dim()),
  // invoking observe(step, state) at every grid time including step 0.
  // Throws NonFiniteState if a coordinate stops being finite.
  void run(std::uint64_t trajectory, std::span<const double> x0,
           const std::function<void(int, std::span<const double>)>& observe) const;

  // One macro step with the noise keyed at `step_index`.
  void step_once(std::uint64_t trajectory, int step_index, std::span<const double> in,
                 std::vector<double>& out) const;

  // Raw Brownian increment of mode `mode` over macro step k (for the
  // euler_maruyama scheme's Ito sums).
  double brownian_increment(std::uint64_t trajectory, int mode, int step) const;

 private:
  struct BlockData {
    mat2 s_macro;       // e^{hA}
    mat2 s_micro;       // e^{(h/mf) A}
    mat2 cov_factor;    // L with L L^T = Q_{h/mf}
    vec2 drift_col;     // D_h * Ltilde * G~ column (drift insertion direction)
    vec2 g_col;         // G column
  };
  struct Workspace;

  void eval_drift(const std::vector<double>& state, Workspace& ws) const;
  void advance(std::vector<double>& x, int k, const NoiseStream& ns, Workspace& ws) const;

  const SpectralModel* model_;
  DriftSpec drift_;
  SimOptions opt_;
  int dim_ = 0;
  int bdim_ = 1;
  double h_ = 0.0;
  double h_micro_ = 0.0;
  int grid_pts_ = 0;
  std::vector<double> grid_;
  std::vector<BlockData> blocks_;
  std::vector<double> basis_table_;  // pointwise drifts: mode_eval per grid point
};

struct PathEnsemble {
  ModelParams model_params;
  std::vector<double> grid;
  std::vector<std::vector<GalerkinState>> trajectories;
  std::uint64_t seed = 0;
  NoiseScheme scheme = NoiseScheme::exact_ou;
  int micro_factor = 1;
};

// Exact-law sampling of the stochastic convolution W_{A,n} on the grid
// (zero drift, zero initial state).
std::vector<GalerkinState> sample_convolution(const SpectralModel& model,
                                              std::uint64_t seed, std::uint64_t trajectory,
                                              double T, int steps);

// One exponential-Euler step from `state` with step h; noise drawn from
// (seed, trajectory) at macro step `step_index`.
GalerkinState exponential_euler_step(const SpectralModel& model, const GalerkinState& state,
                                     const DriftSpec& drift, std::uint64_t seed,
                                     std::uint64_t trajectory, int step_index, double h,
                                     NoiseScheme scheme = NoiseScheme::exact_ou);

// Full ensemble, materialized. Bitwise reproducible from (inputs, seed).
PathEnsemble simulate_ensemble(const SpectralModel& model, const DriftSpec& drift,
                               std::span<const double> x0, const SimOptions& opt);

struct CouplingDiagnostics {
  std::vector<double> times;
  std::vector<double> delta_mean;      // E ||X1 - X2||^2 per grid time
  std::vector<double> delta_se;
  std::vector<double> holder_moment;   // E ||X1 - X2||^{2 theta}
  double initial_distance2 = 0.0;
  double sup_delta = 0.0;
  double lipschitz_ratio = 0.0;        // sup_t E||dX||^2 / ||x1-x2||^2
  double esup_delta = 0.0;             // E sup_t ||dX||^2 (strong variant)
  double esup_ratio = 0.0;
  bool v_hilbert_schmidt = false;      // whether the strong variant applies
};

// Two solutions driven by the identical noise stream.
CouplingDiagnostics couple_and_measure(const SpectralModel& model, const DriftSpec& drift,
                                       std::span<const double> x1, std::span<const double> x2,
                                       const SimOptions& opt, int observe_count = 16);

struct ConvergenceRow {
  int n = 0;
  double sup_mse = 0.0;       // sup_t E ||X_n - X_ref||^2
  double sup_mse_se = 0.0;    // standard error at the sup time
  double esup_mse = 0.0;      // E sup_t ||X_n - X_ref||^2
  double holder_sup = 0.0;    // sup_t E ||X_n - X_ref||^{2 theta}
};

// Common-noise Galerkin self-convergence against the reference truncation.
std::vector<ConvergenceRow> galerkin_convergence(const SpectralModel& model,
                                                 const DriftSpec& drift,
                                                 std::span<const double> x0,
                                                 const SimOptions& opt,
                                                 const std::vector<int>& n_list, int n_ref,
                                                 int observe_count = 16);

struct ConvolutionCell {
  int block = 0;
  double time = 0.0;
  int i = 0, j = 0;       // covariance entry
  double empirical = 0.0;
  double se = 0.0;
  double exact = 0.0;     // Q_t entry
  double zscore = 0.0;
};

// Empirical second moments of the convolution against Q_t, per (block, time,
// entry) cell with Monte Carlo standard errors.
std::vector<ConvolutionCell> convolution_moment_check(const SpectralModel& model,
                                                      const std::vector<double>& times,
                                                      int trajectories, std::uint64_t seed);

// Whether V = Lambda^{-gamma} is Hilbert-Schmidt under the model's mu-law.
bool v_is_hilbert_schmidt(const SpectralModel& model);

}  // namespace spde
