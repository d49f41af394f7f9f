#pragma once

#include <vector>

#include "spin7/jet.hpp"

namespace spin7 {

/// Small dense matrix of Jet2 entries. Used pointwise by the Hodge star,
/// frame-defined complex structures and the metric machinery, where the
/// linear algebra itself must be differentiated.
struct JetMat {
  int rows = 0, cols = 0;
  std::vector<Jet2> a;  // row-major

  JetMat() = default;
  JetMat(int r, int c, int dim) : rows(r), cols(c), a(r * c, Jet2(dim)) {}

  Jet2& operator()(int i, int j) { return a[i * cols + j]; }
  const Jet2& operator()(int i, int j) const { return a[i * cols + j]; }

  static JetMat identity(int n, int dim) {
    JetMat m(n, n, dim);
    for (int i = 0; i < n; ++i) m(i, i) = Jet2::constant(dim, 1.0);
    return m;
  }
};

inline JetMat operator*(const JetMat& x, const JetMat& y) {
  JetMat r(x.rows, y.cols, x.a.empty() ? 0 : x.a[0].dim());
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < y.cols; ++j) {
      Jet2 s = Jet2::constant(x.a[0].dim(), 0.0);
      for (int k = 0; k < x.cols; ++k) s = s + x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

/// Determinant by Gaussian elimination with partial pivoting, carried out in
/// Jet2 arithmetic so the result has exact value and derivatives.
inline Jet2 jetDet(JetMat m) {
  int n = m.rows;
  int dim = n ? m.a[0].dim() : 0;
  Jet2 det = Jet2::constant(dim, 1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m(r, c).value) > std::abs(m(piv, c).value)) piv = r;
    if (std::abs(m(piv, c).value) < 1e-300) return Jet2::constant(dim, 0.0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det = det * m(c, c);
    Jet2 inv_p = inverse(m(c, c));
    for (int r = c + 1; r < n; ++r) {
      Jet2 f = m(r, c) * inv_p;
      for (int j = c; j < n; ++j) m(r, j) = m(r, j) - f * m(c, j);
    }
  }
  return det;
}

/// Solve m·X = b by Gauss-Jordan with partial pivoting in Jet2 arithmetic.
inline JetMat jetSolve(JetMat m, JetMat b) {
  int n = m.rows;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m(r, c).value) > std::abs(m(piv, c).value)) piv = r;
    if (std::abs(m(piv, c).value) < 1e-300)
      throw EvaluationError("singular matrix in jet linear solve");
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      for (int j = 0; j < b.cols; ++j) std::swap(b(piv, j), b(c, j));
    }
    Jet2 inv_p = inverse(m(c, c));
    for (int j = 0; j < n; ++j) m(c, j) = m(c, j) * inv_p;
    for (int j = 0; j < b.cols; ++j) b(c, j) = b(c, j) * inv_p;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      Jet2 f = m(r, c);
      if (f.value == 0.0 && f.grad.isZero() && f.hess.isZero()) continue;
      for (int j = 0; j < n; ++j) m(r, j) = m(r, j) - f * m(c, j);
      for (int j = 0; j < b.cols; ++j) b(r, j) = b(r, j) - f * b(c, j);
    }
  }
  return b;
}

inline JetMat jetInverse(const JetMat& m) {
  int dim = m.a.empty() ? 0 : m.a[0].dim();
  return jetSolve(m, JetMat::identity(m.rows, dim));
}

}  // namespace spin7
