#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace gtd {

struct Vec3 {
  double x[3]{};

  double& operator[](std::size_t i) { return x[i]; }
  double operator[](std::size_t i) const { return x[i]; }

  Vec3 operator+(const Vec3& o) const { return {x[0] + o.x[0], x[1] + o.x[1], x[2] + o.x[2]}; }
  Vec3 operator-(const Vec3& o) const { return {x[0] - o.x[0], x[1] - o.x[1], x[2] - o.x[2]}; }
  Vec3 operator*(double s) const { return {x[0] * s, x[1] * s, x[2] * s}; }

  double dot(const Vec3& o) const { return x[0] * o.x[0] + x[1] * o.x[1] + x[2] * o.x[2]; }
  double norm() const { return std::sqrt(dot(*this)); }

  Vec3 normalized() const {
    double n = norm();
    return n > 0 ? (*this) * (1.0 / n) : *this;
  }

  Vec3 cross(const Vec3& o) const {
    return {x[1] * o.x[2] - x[2] * o.x[1],
            x[2] * o.x[0] - x[0] * o.x[2],
            x[0] * o.x[1] - x[1] * o.x[0]};
  }
};

/// Symmetric 3x3 matrix stored as the upper triangle.
struct Sym3 {
  double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a12 = 0, a22 = 0;

  static Sym3 zero() { return {}; }
  static Sym3 identity() { return {1, 0, 0, 1, 0, 1}; }

  /// s * v v^T
  static Sym3 outer(const Vec3& v, double s = 1.0) {
    return {s * v[0] * v[0], s * v[0] * v[1], s * v[0] * v[2],
            s * v[1] * v[1], s * v[1] * v[2], s * v[2] * v[2]};
  }

  Sym3 operator+(const Sym3& o) const {
    return {a00 + o.a00, a01 + o.a01, a02 + o.a02, a11 + o.a11, a12 + o.a12, a22 + o.a22};
  }
  Sym3 operator-(const Sym3& o) const {
    return {a00 - o.a00, a01 - o.a01, a02 - o.a02, a11 - o.a11, a12 - o.a12, a22 - o.a22};
  }
  Sym3 operator*(double s) const { return {a00 * s, a01 * s, a02 * s, a11 * s, a12 * s, a22 * s}; }
  Sym3& operator+=(const Sym3& o) {
    a00 += o.a00; a01 += o.a01; a02 += o.a02; a11 += o.a11; a12 += o.a12; a22 += o.a22;
    return *this;
  }

  double trace() const { return a00 + a11 + a22; }

  double det() const {
    return a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
           a02 * (a01 * a12 - a11 * a02);
  }

  Vec3 mul(const Vec3& v) const {
    return {a00 * v[0] + a01 * v[1] + a02 * v[2],
            a01 * v[0] + a11 * v[1] + a12 * v[2],
            a02 * v[0] + a12 * v[1] + a22 * v[2]};
  }

  double quad(const Vec3& v) const { return v.dot(mul(v)); }

  /// Adjugate-based inverse; caller checks det() first.
  Sym3 inverse() const {
    double d = det();
    double id = 1.0 / d;
    Sym3 r;
    r.a00 = (a11 * a22 - a12 * a12) * id;
    r.a01 = (a02 * a12 - a01 * a22) * id;
    r.a02 = (a01 * a12 - a02 * a11) * id;
    r.a11 = (a00 * a22 - a02 * a02) * id;
    r.a12 = (a01 * a02 - a00 * a12) * id;
    r.a22 = (a00 * a11 - a01 * a01) * id;
    return r;
  }

  double max_abs() const {
    double m = 0;
    for (double v : {a00, a01, a02, a11, a12, a22}) m = std::max(m, std::abs(v));
    return m;
  }
};

struct EigenSym3 {
  std::array<double, 3> values;  // ascending
  std::array<Vec3, 3> vectors;   // orthonormal, vectors[i] pairs with values[i]
};

namespace detail {

/// Cyclic Jacobi rotations; robust path for near-degenerate spectra.
inline EigenSym3 jacobi_eigen(const Sym3& s) {
  double a[3][3] = {{s.a00, s.a01, s.a02}, {s.a01, s.a11, s.a12}, {s.a02, s.a12, s.a22}};
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off < 1e-300) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (int k = 0; k < 3; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - sn * akq;
          a[k][q] = sn * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - sn * aqk;
          a[q][k] = sn * apk + c * aqk;
        }
        a[p][q] = a[q][p] = 0.0;
        for (int k = 0; k < 3; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - sn * vkq;
          v[k][q] = sn * vkp + c * vkq;
        }
      }
    }
  }
  EigenSym3 e;
  int idx[3] = {0, 1, 2};
  double lam[3] = {a[0][0], a[1][1], a[2][2]};
  // insertion sort ascending
  for (int i = 1; i < 3; ++i)
    for (int j = i; j > 0 && lam[idx[j]] < lam[idx[j - 1]]; --j) std::swap(idx[j], idx[j - 1]);
  for (int i = 0; i < 3; ++i) {
    e.values[i] = lam[idx[i]];
    e.vectors[i] = {v[0][idx[i]], v[1][idx[i]], v[2][idx[i]]};
  }
  return e;
}

}  // namespace detail

/// Analytic eigenvalues (trigonometric form) with a Jacobi fallback when the
/// characteristic discriminant is ill-conditioned.
inline std::array<double, 3> eigenvalues_sym3(const Sym3& m) {
  double p1 = m.a01 * m.a01 + m.a02 * m.a02 + m.a12 * m.a12;
  if (p1 == 0.0) {
    std::array<double, 3> d{m.a00, m.a11, m.a22};
    if (d[0] > d[1]) std::swap(d[0], d[1]);
    if (d[1] > d[2]) std::swap(d[1], d[2]);
    if (d[0] > d[1]) std::swap(d[0], d[1]);
    return d;
  }
  double q = m.trace() / 3.0;
  double p2 = (m.a00 - q) * (m.a00 - q) + (m.a11 - q) * (m.a11 - q) +
              (m.a22 - q) * (m.a22 - q) + 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  Sym3 b = (m - Sym3::identity() * q) * (1.0 / p);
  double r = b.det() / 2.0;
  if (r < -0.9999999 || r > 0.9999999) {
    // near-degenerate: acos argument at the edge, hand off to Jacobi
    auto e = detail::jacobi_eigen(m);
    return e.values;
  }
  double phi = std::acos(r) / 3.0;
  double e2 = q + 2.0 * p * std::cos(phi);
  double e0 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  double e1 = 3.0 * q - e0 - e2;
  return {e0, e1, e2};
}

inline EigenSym3 eigen_sym3(const Sym3& m) { return detail::jacobi_eigen(m); }

inline double lambda_min(const Sym3& m) { return eigenvalues_sym3(m)[0]; }

}  // namespace gtd
