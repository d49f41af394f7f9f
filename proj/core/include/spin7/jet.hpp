#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "spin7/chart.hpp"

namespace spin7 {

/// Order-2 Taylor data of a scalar quantity at a point: value, gradient and
/// symmetric Hessian. Arithmetic obeys the Leibniz and chain rules exactly
/// through order 2.
///
/// `order` tracks how many derivative levels are still valid: fields obtained
/// by exterior differentiation lose one level per application (the underlying
/// jets are order 2 and nothing in scope needs order 3).
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  int order = 2;

  Jet2() = default;
  explicit Jet2(int dim, double v = 0.0)
      : value(v),
        grad(Eigen::VectorXd::Zero(dim)),
        hess(Eigen::MatrixXd::Zero(dim, dim)) {}

  int dim() const { return static_cast<int>(grad.size()); }

  static Jet2 constant(int dim, double v) { return Jet2(dim, v); }

  static Jet2 coordinate(int dim, int i, double v) {
    Jet2 j(dim, v);
    j.grad[i] = 1.0;
    return j;
  }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim(), a.value + b.value);
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  r.order = std::min(a.order, b.order);
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim(), a.value - b.value);
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  r.order = std::min(a.order, b.order);
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r(a.dim(), -a.value);
  r.grad = -a.grad;
  r.hess = -a.hess;
  r.order = a.order;
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim(), a.value * b.value);
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  r.order = std::min(a.order, b.order);
  return r;
}

inline Jet2 operator*(double c, const Jet2& a) {
  Jet2 r = a;
  r.value *= c;
  r.grad *= c;
  r.hess *= c;
  return r;
}
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }
inline Jet2 operator+(const Jet2& a, double c) {
  Jet2 r = a;
  r.value += c;
  return r;
}
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
inline Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

/// Composition with a univariate function given by (f, f', f'') at a.value.
inline Jet2 compose(const Jet2& a, double f, double df, double ddf) {
  Jet2 r(a.dim(), f);
  r.grad = df * a.grad;
  r.hess = df * a.hess + ddf * (a.grad * a.grad.transpose());
  r.order = a.order;
  return r;
}

inline Jet2 inverse(const Jet2& a) {
  if (std::abs(a.value) < 1e-300)
    throw EvaluationError("division by a vanishing denominator");
  double iv = 1.0 / a.value;
  return compose(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& a) { return c * inverse(a); }

inline Jet2 pow(const Jet2& a, double p) {
  if (p == 0.0) return Jet2::constant(a.dim(), 1.0);
  if (p == 1.0) return a;
  if (a.value == 0.0 && p > 1.0) return compose(a, 0.0, 0.0, 0.0);
  if (a.value <= 0.0 && p != std::floor(p))
    throw EvaluationError("pow: non-positive base with fractional exponent");
  double f = std::pow(a.value, p);
  double df = p * std::pow(a.value, p - 1.0);
  double ddf = p * (p - 1.0) * std::pow(a.value, p - 2.0);
  return compose(a, f, df, ddf);
}

inline Jet2 sqrt(const Jet2& a) { return pow(a, 0.5); }

inline Jet2 sin(const Jet2& a) {
  return compose(a, std::sin(a.value), std::cos(a.value), -std::sin(a.value));
}
inline Jet2 cos(const Jet2& a) {
  return compose(a, std::cos(a.value), -std::sin(a.value), -std::cos(a.value));
}
inline Jet2 exp(const Jet2& a) {
  double e = std::exp(a.value);
  return compose(a, e, e, e);
}
inline Jet2 log(const Jet2& a) {
  if (a.value <= 0.0) throw EvaluationError("log of non-positive value");
  double iv = 1.0 / a.value;
  return compose(a, std::log(a.value), iv, -iv * iv);
}
inline Jet2 atan(const Jet2& a) {
  double d = 1.0 / (1.0 + a.value * a.value);
  return compose(a, std::atan(a.value), d, -2.0 * a.value * d * d);
}

}  // namespace spin7
