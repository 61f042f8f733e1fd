#pragma once

// Executable admissibility predicates: the parameter inequalities of the
// Lipschitz-stability theorems, the weighted Hoelder series, trace
// integrability of the convolution covariance and the Gamma_t integrability
// conditions, all with numeric margins instead of yes/no only.

#include <optional>
#include <string>
#include <vector>

#include "spde/drift.hpp"
#include "spde/model.hpp"

namespace spde {

struct ConditionCheck {
  std::string name;
  bool satisfied = false;
  double margin = 0.0;  // distance to the nearest violated boundary (< 0: violated)
  std::string citation;
};

struct AdmissibilityReport {
  std::vector<ConditionCheck> conditions;
  bool all_satisfied() const {
    for (const auto& c : conditions)
      if (!c.satisfied) return false;
    return true;
  }
  const ConditionCheck* first_violated() const {
    for (const auto& c : conditions)
      if (!c.satisfied) return &c;
    return nullptr;
  }
};

// Evaluates the inequality set of the theorem/corollary covering the model's
// family. Throws UnsupportedFamily when none applies.
AdmissibilityReport check_theorem_conditions(const SpectralModel& model);

struct SeriesConditionResult {
  double partial_sum = 0.0;  // -sum_{n<=n_max} zeta_n^2 sum_j ||B^n_j||^2 / Re(rho^n_j)
  double tail_bound = 0.0;   // integral comparison from the mu-law (inf if divergent)
  bool converges = false;    // exponent test with bounded mode norms
};
SeriesConditionResult series_condition(const SpectralModel& model, const DriftSpec& drift,
                                       int n_max);

struct TraceIntegrabilityResult {
  struct Row {
    double eta = 0.0;
    double integral = 0.0;    // truncated integral at n_max
    double tail = 0.0;        // mu-law tail estimate (inf if divergent)
    double doubling_change = 0.0;  // relative change when n_max doubles
    bool passed = false;
  };
  std::vector<Row> rows;
  std::optional<double> best_eta;  // smallest passing eta
};
TraceIntegrabilityResult trace_integrability(const SpectralModel& model,
                                             const std::vector<double>& eta_grid, double t);

struct GammaIntegrabilityReport {
  std::vector<double> s_grid;             // decreasing
  std::vector<double> gamma_norms;        // ||Gamma_s||
  std::vector<double> gamma_gtilde_norms; // ||Gamma_s G~||
  double gamma_norm_exponent = 0.0;       // fitted blow-up exponent of ||Gamma_s||
  double gamma_gtilde_exponent = 0.0;     // fitted blow-up exponent of ||Gamma_s G~||
  double mixed_integral = 0.0;            // ∫_0^t ||Gamma_s||^{1-theta} ||Gamma_s G~|| ds
  double theta_prime_integral = 0.0;      // ∫_0^t ||Gamma_s||^{1-theta'} ds
  bool mixed_finite = false;
  bool theta_prime_finite = false;
};
// Requires t > 0 and 0 < theta' < theta < 1; throws SingularQt if Q_s is
// numerically singular on the probe grid.
GammaIntegrabilityReport gamma_integrability(const SpectralModel& model, double t,
                                             double theta, double theta_prime);

}  // namespace spde
