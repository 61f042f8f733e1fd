#pragma once

// Counter-based Gaussian noise. Every increment is a pure function of
// (seed, trajectory, mode, step, component), so trajectories can be evaluated
// in any order and on any number of threads with identical output, and two
// truncation levels driven by the same stream share their low-mode increments
// exactly.
//
// Time refinement is handled by drawing at a fixed micro resolution: a grid
// with `steps` macro steps and micro factor f draws micro increments indexed
// 0 .. steps*f-1, and a coarse Brownian increment is the literal sum of its
// micro parts. Runs that must be pathwise-nested simply share the product
// steps*f.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spde {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t trajectory)
      : seed_(seed), trajectory_(trajectory) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t trajectory() const { return trajectory_; }

  // Standard normal for key (mode, step, component); component distinguishes
  // the two Gaussians a 2x2 block consumes per step.
  double normal(std::uint32_t mode, std::uint64_t step, std::uint32_t component) const {
    std::uint64_t s = detail::mix64(seed_ ^ 0x5851f42d4c957f2dULL);
    s = detail::mix64(s ^ (trajectory_ * 0xda942042e4dd58b5ULL));
    s = detail::mix64(s ^ (static_cast<std::uint64_t>(mode) << 32 | component));
    s = detail::mix64(s ^ step);
    // Two 53-bit uniforms -> one Box-Muller normal.
    const double u1 = to_unit(detail::mix64(s));
    const double u2 = to_unit(detail::mix64(s ^ 0x9e3779b97f4a7c15ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Brownian increment over macro step `step` of a grid with micro step
  // h_micro and `micro_per_step` micro draws per macro step.
  double brownian_increment(std::uint32_t mode, std::uint64_t step, double h_micro,
                            std::uint32_t micro_per_step, std::uint32_t component = 0) const {
    const double root_h = std::sqrt(h_micro);
    double sum = 0.0;
    for (std::uint32_t j = 0; j < micro_per_step; ++j)
      sum += root_h * normal(mode, step * micro_per_step + j, component);
    return sum;
  }

 private:
  static double to_unit(std::uint64_t bits) {
    // (0, 1]: avoids log(0).
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  std::uint64_t trajectory_;
};

}  // namespace spde
