#include "spde/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spde/errors.hpp"

namespace spde {

GaussLegendre::GaussLegendre(int order) {
  if (order < 2) throw std::invalid_argument("GaussLegendre: order must be >= 2");
  nodes.resize(order);
  weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a,
                                double b) const {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(c + h * nodes[i]);
  return h * sum;
}

namespace {

struct AdaptiveCtx {
  const std::function<double(double)>& f;
  const GaussLegendre& rule;
  double rel_tol;
  int panels_left;
  double scale;  // magnitude reference for the relative test
};

double adapt(AdaptiveCtx& ctx, double a, double b, double whole) {
  if (--ctx.panels_left <= 0)
    throw QuadratureFailure("adaptive_gauss_legendre: panel budget exhausted");
  const double mid = 0.5 * (a + b);
  const double left = ctx.rule.integrate(ctx.f, a, mid);
  const double right = ctx.rule.integrate(ctx.f, mid, b);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  const double ref = std::max({std::abs(refined), ctx.scale, 1e-300});
  if (err <= ctx.rel_tol * ref) return refined;
  return adapt(ctx, a, mid, left) + adapt(ctx, mid, b, right);
}

}  // namespace

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, int max_panels) {
  static const GaussLegendre rule(16);
  const double whole = rule.integrate(f, a, b);
  AdaptiveCtx ctx{f, rule, rel_tol, max_panels, std::abs(whole)};
  return adapt(ctx, a, b, whole);
}

GaussHermite::GaussHermite(int order) {
  if (order < 1) throw std::invalid_argument("GaussHermite: order must be >= 1");
  // Physicists' Hermite nodes by Newton, then rescaled to N(0,1) expectations:
  // E f(Z) = sum_i (w_i / sqrt(pi)) f(sqrt(2) y_i).
  nodes.resize(order);
  weights.resize(order);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  std::vector<double> y(order), w(order);
  const int m = (order + 1) / 2;
  double x = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      x = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      x -= 1.14 * std::pow(static_cast<double>(order), 0.426) / x;
    } else if (i == 2) {
      x = 1.86 * x - 0.86 * y[0];
    } else if (i == 3) {
      x = 1.91 * x - 0.91 * y[1];
    } else {
      x = 2.0 * x - y[i - 2];
    }
    double dp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p0 = std::pow(std::numbers::pi, -0.25);
      double p1 = x * std::sqrt(2.0) * p0;
      for (int k = 2; k <= order; ++k) {
        const double p2 =
            x * std::sqrt(2.0 / k) * p1 - std::sqrt((k - 1.0) / k) * p0;
        p0 = p1;
        p1 = p2;
      }
      dp = std::sqrt(2.0 * order) * p0;
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    y[i] = x;
    y[order - 1 - i] = -x;
    w[i] = 2.0 / (dp * dp);
    w[order - 1 - i] = w[i];
  }
  for (int i = 0; i < order; ++i) {
    nodes[i] = std::sqrt(2.0) * y[order - 1 - i];  // ascending
    weights[i] = w[order - 1 - i] / sqrt_pi;
  }
}

}  // namespace spde
