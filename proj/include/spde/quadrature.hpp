#pragma once

#include <functional>
#include <vector>

namespace spde {

// Gauss-Legendre rule on [-1, 1]. Nodes from Newton iteration on P_n; good to
// machine precision for the orders used here (<= 48).
struct GaussLegendre {
  explicit GaussLegendre(int order);
  int order() const { return static_cast<int>(nodes.size()); }
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;

  // Integrate f over [a, b] with a single panel.
  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

// Adaptive bisection with a fixed-order panel rule; a panel is accepted when
// the two-half refinement agrees within rel_tol (plus a tiny absolute floor).
// Throws QuadratureFailure when the panel budget is exhausted.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, int max_panels = 4000);

// Gauss-Hermite rule rewritten for expectations against N(0,1): returns nodes
// z_i and weights w_i with sum w_i = 1 and sum w_i f(z_i) ~ E[f(Z)].
struct GaussHermite {
  explicit GaussHermite(int order);
  std::vector<double> nodes;
  std::vector<double> weights;
};

}  // namespace spde
