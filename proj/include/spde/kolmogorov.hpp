#pragma once

// Tiny-dimension backward Kolmogorov fixed point
//
//   U(t,x) = ∫_t^T R(r-t) [ DU(r,.) L~ B(.) + B(.) ](x) dr,   U(T,.) = 0,
//
// solved by Picard iteration on a tensor grid, with the vector OU semigroup
// R(s)f(x) = E f(e^{sA}x + W_A(s)) evaluated by Gauss-Hermite quadrature with
// the exact block covariance. Supported state dimension: 1 (one heat mode) or
// 2 (one damped block).

#include <cstdint>
#include <span>
#include <vector>

#include "spde/drift.hpp"
#include "spde/model.hpp"

namespace spde {

struct KolmogorovGrid {
  double half_width = 4.0;  // box [-L, L]^d
  int points_per_axis = 41;
  int time_steps = 32;
};

class KolmogorovSolution {
 public:
  int dim() const { return dim_; }
  int time_steps() const { return nt_; }
  double horizon() const { return T_; }
  double half_width() const { return half_width_; }

  // U(t_i, x); x clamped to the box. out has dim() entries.
  void value(int t_index, std::span<const double> x, std::span<double> out) const;
  // Interpolated in time.
  void value_at(double t, std::span<const double> x, std::span<double> out) const;
  // Jacobian DU(t_i, x): row-major dim x dim.
  void jacobian(int t_index, std::span<const double> x, std::span<double> out) const;
  void jacobian_at(double t, std::span<const double> x, std::span<double> out) const;

  bool inside_box(std::span<const double> x) const;

  int iterations = 0;
  double final_delta = 0.0;       // sup distance of the last Picard update
  double residual = 0.0;          // sup |U - T U| after convergence
  double sup_norm = 0.0;          // sup |U|
  double grad_sup_norm = 0.0;     // sup ||DU||
  double measured_m = 0.0;        // (sup|U| + sup|DU| + DU G~ terms)/||B||_{C^theta}
  std::vector<double> contraction_ratios;

 private:
  friend KolmogorovSolution solve_kolmogorov_picard(const SpectralModel&, const DriftSpec&,
                                                    double, const KolmogorovGrid&);
  int dim_ = 1;
  int nx_ = 0;
  int nt_ = 0;
  double T_ = 0.0;
  double half_width_ = 0.0;
  double dx_ = 0.0;
  std::vector<double> axis_;
  std::vector<double> values_;  // (nt+1) * nodes * dim
  int nodes_ = 0;

  std::size_t idx(int t, int node, int comp) const {
    return (static_cast<std::size_t>(t) * nodes_ + node) * dim_ + comp;
  }
};

// Picard solve on the first block of the model. Throws NoContraction when the
// iteration's Lipschitz estimate reaches 1 (halve T and retry), and
// UnsupportedFamily when the state dimension exceeds 2.
KolmogorovSolution solve_kolmogorov_picard(const SpectralModel& model, const DriftSpec& drift,
                                           double T, const KolmogorovGrid& grid);

// Evaluates both sides of the transformed mild representation (the
// integration-by-parts form with the Kolmogorov gradient replacing the rough
// drift) along one simulated path driven by recorded increments; returns the
// maximum deviation over grid times. Throws PathLeftBox when the trajectory
// exits the Kolmogorov box.
struct TransformedRepresentationCheck {
  double max_deviation = 0.0;
  std::vector<double> deviations;  // per grid time
};
TransformedRepresentationCheck check_transformed_representation(
    const SpectralModel& model, const DriftSpec& drift, const KolmogorovSolution& kolmogorov,
    double T, int steps, std::uint64_t seed, std::uint64_t trajectory);

}  // namespace spde
