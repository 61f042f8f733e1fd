#pragma once

// Flat key-value experiment configuration with dotted section prefixes.
// Unknown keys are rejected; the canonical echo re-parses to an identical
// configuration and is written next to every output table.

#include <cstdint>
#include <string>
#include <vector>

#include "spde/drift.hpp"
#include "spde/model.hpp"

namespace spde {

struct ExperimentConfig {
  ModelParams model;

  // run
  double T = 0.5;
  int steps = 128;
  int trajectories = 256;
  std::uint64_t seed = 1;
  int micro_factor = 1;

  // drift
  std::string drift_kind = "zero";  // zero | mode_coefficients | counterexample
  double drift_amplitude = 0.0;
  double drift_theta = 0.9;
  double drift_decay = 0.0;
  double drift_velocity_mix = 0.7;
  int drift_grid_points = 512;

  // task
  std::vector<double> t_grid;        // control horizons, decreasing
  std::vector<int> n_list;           // convergence truncations
  int n_ref = 0;
  std::vector<double> eta_grid;      // trace integrability probes
  double theta_prime = 0.0;          // Gamma integrability second exponent
  double box_half_width = 4.0;       // Kolmogorov box
  int box_points = 41;
  int time_steps = 32;               // Kolmogorov time grid
  int time_points = 512;             // counterexample grid
  int space_points = 512;
  int observe_count = 16;
  int profile_order = 0;             // 0: smallest admissible m
  std::vector<double> x0;            // initial datum, uv coordinates
  std::vector<double> x1;            // coupling data
  std::vector<double> x2;
  std::vector<double> distances;     // lipschitz sweep

  // output
  std::string out_dir = "out";
  bool plots = false;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical echo: every key, one per line, stable order.
std::string echo_config(const ExperimentConfig& cfg);

DriftSpec drift_from_config(const ExperimentConfig& cfg);

}  // namespace spde
