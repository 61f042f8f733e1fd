#pragma once

// Physical-space finite-difference oracle for the heat family with beta = 1
// and sigma = 0: second-order central differences on (0, pi) with homogeneous
// Dirichlet endpoints and a semi-implicit Euler stepper, driven by the same
// mode increments as the spectral engine (projected onto the grid). The two
// solvers discretize the same equation along entirely different routes, so
// their gap is pure discretization error.

#include <cstdint>
#include <span>
#include <vector>

#include "spde/drift.hpp"
#include "spde/model.hpp"

namespace spde {

struct FdRefinementLevel {
  int grid_points = 128;
  int steps = 256;
  int n_modes = 16;
};

struct FdComparisonRow {
  FdRefinementLevel level;
  double discrepancy = 0.0;  // sup over grid times of the L^2 gap
};

// x0_modes: initial sine-mode coefficients. The drift must be pointwise
// (nemytskii) or zero; requires family == heat, m == 1, beta == 1, sigma == 0.
// fd_seed lets the negative control drive the FD solver with independent
// noise (defaults to the shared seed).
std::vector<FdComparisonRow> heat_fd_oracle(const SpectralModel& model,
                                            const DriftSpec& drift,
                                            std::span<const double> x0_modes, double T,
                                            std::span<const FdRefinementLevel> levels,
                                            std::uint64_t seed, std::uint64_t trajectory,
                                            std::int64_t fd_seed = -1);

}  // namespace spde
