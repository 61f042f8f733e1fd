#pragma once

// Closed-form 1x1 / 2x2 real linear algebra. Every operator in this project is
// block-diagonal with blocks of size at most 2, so symmetric eigenproblems,
// spectral norms, matrix square roots and PSD factorizations are all done in
// closed form; no iterative solver appears anywhere on the block level.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace spde {

struct vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline vec2 operator*(double s, vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(vec2 a, vec2 b) { return a.x * b.x + a.y * b.y; }

// Row-major 2x2 matrix. 1x1 blocks use the (0,0) entry with dim bookkeeping
// kept by the caller.
struct mat2 {
  double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

  static mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static mat2 zero() { return {}; }
  static mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }
  // a*I + b*J with J = [[0,1],[-1,0]]; J^2 = -I, so this block acts like the
  // complex scalar a + ib on the plane.
  static mat2 rotation_scaling(double a, double b) { return {a, b, -b, a}; }

  mat2 transpose() const { return {m00, m10, m01, m11}; }
  double trace() const { return m00 + m11; }
  double det() const { return m00 * m11 - m01 * m10; }
  double frob2() const { return m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11; }
  double max_abs() const {
    return std::max(std::max(std::abs(m00), std::abs(m01)),
                    std::max(std::abs(m10), std::abs(m11)));
  }

  vec2 apply(vec2 v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }

  mat2 inverse() const {
    const double d = det();
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
  }
};

inline mat2 operator+(const mat2& a, const mat2& b) {
  return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}
inline mat2 operator-(const mat2& a, const mat2& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}
inline mat2 operator*(double s, const mat2& a) {
  return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
}
inline mat2 operator*(const mat2& a, const mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

// Outer product v w^T.
inline mat2 outer(vec2 v, vec2 w) {
  return {v.x * w.x, v.x * w.y, v.y * w.x, v.y * w.y};
}

// Eigenvalues of a symmetric 2x2, ascending.
inline std::array<double, 2> sym_eigenvalues(const mat2& s) {
  const double half_tr = 0.5 * (s.m00 + s.m11);
  const double d = 0.5 * (s.m00 - s.m11);
  const double r = std::sqrt(d * d + s.m01 * s.m10);
  return {half_tr - r, half_tr + r};
}

// Largest singular value (operator 2-norm).
inline double spectral_norm(const mat2& m) {
  const double f = m.frob2();
  const double d = m.det();
  const double disc = std::max(0.0, f * f - 4.0 * d * d);
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

inline double condition_number(const mat2& m) {
  const double f = m.frob2();
  const double d = m.det();
  const double disc = std::max(0.0, f * f - 4.0 * d * d);
  const double smax2 = 0.5 * (f + std::sqrt(disc));
  const double smin2 = 0.5 * (f - std::sqrt(disc));
  if (smin2 <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(smax2 / smin2);
}

// Orthonormal eigenvectors of a symmetric matrix; columns of the returned
// matrix match the ascending eigenvalue order of sym_eigenvalues.
inline mat2 sym_eigenvectors(const mat2& s) {
  const auto ev = sym_eigenvalues(s);
  const double b = 0.5 * (s.m01 + s.m10);
  if (std::abs(b) < 1e-300 * std::max(1.0, std::abs(s.m00) + std::abs(s.m11))) {
    if (s.m00 <= s.m11) return mat2::identity();
    return {0.0, 1.0, 1.0, 0.0};
  }
  vec2 v0{b, ev[0] - s.m00};
  vec2 v1{b, ev[1] - s.m00};
  const double n0 = v0.norm(), n1 = v1.norm();
  v0 = (1.0 / n0) * v0;
  v1 = (1.0 / n1) * v1;
  return {v0.x, v1.x, v0.y, v1.y};
}

// Symmetric square root of a symmetric PSD matrix; negative eigenvalues below
// clip*trace are treated as exact zeros (numerical symmetry noise).
inline mat2 sym_sqrt_psd(const mat2& q, double clip = 1e-14) {
  const mat2 s{q.m00, 0.5 * (q.m01 + q.m10), 0.5 * (q.m01 + q.m10), q.m11};
  const auto ev = sym_eigenvalues(s);
  const mat2 v = sym_eigenvectors(s);
  const double floor = clip * std::max(std::abs(s.trace()), 1e-300);
  const double l0 = ev[0] > floor ? std::sqrt(ev[0]) : 0.0;
  const double l1 = ev[1] > floor ? std::sqrt(ev[1]) : 0.0;
  return v * mat2::diag(l0, l1) * v.transpose();
}

// Factor B with B B^T = Q for a symmetric PSD Q (eigenvalue clipping as in
// sym_sqrt_psd). Used to draw correlated Gaussian increments.
inline mat2 psd_factor(const mat2& q, double clip = 1e-14) { return sym_sqrt_psd(q, clip); }

// Inverse symmetric square root; throws nothing, caller must check
// condition_number first when Q may be numerically singular.
inline mat2 sym_inv_sqrt(const mat2& q) {
  const mat2 s{q.m00, 0.5 * (q.m01 + q.m10), 0.5 * (q.m01 + q.m10), q.m11};
  const auto ev = sym_eigenvalues(s);
  const mat2 v = sym_eigenvectors(s);
  return v * mat2::diag(1.0 / std::sqrt(ev[0]), 1.0 / std::sqrt(ev[1])) * v.transpose();
}

// Largest generalized eigenvalue of M^T M v = lambda G v for SPD G: the
// squared operator norm of M measured in the G inner product. Closed form via
// G^{-1/2}.
inline double gram_weighted_norm(const mat2& m, const mat2& gram) {
  const mat2 g_inv_sqrt = sym_inv_sqrt(gram);
  const mat2 g_sqrt = sym_sqrt_psd(gram);
  return spectral_norm(g_sqrt * m * g_inv_sqrt);
}

}  // namespace spde
