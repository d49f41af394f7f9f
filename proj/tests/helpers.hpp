#pragma once

#include <spin7/forms.hpp>
#include <spin7/rng.hpp>

namespace testutil {

using namespace spin7;

/// Max absolute coefficient difference between two forms at a point.
inline double formDiffAt(const DifferentialForm& a, const DifferentialForm& b,
                         const Point& p) {
  double m = 0.0;
  auto scan = [&](const DifferentialForm& x, const DifferentialForm& y) {
    for (const auto& [idx, f] : x.coeffs())
      m = std::max(m, std::abs(f(p).value - y.coeff(idx)(p).value));
  };
  scan(a, b);
  scan(b, a);
  return m;
}

/// Random point with coordinates uniform in [lo, hi].
inline Point randomPoint(const Chart& c, Pcg32& rng, double lo = -1.0,
                         double hi = 1.0) {
  Eigen::VectorXd x(c.dim());
  for (int i = 0; i < c.dim(); ++i) x[i] = rng.uniform(lo, hi);
  return Point(c, std::move(x));
}

/// A random composite scalar field: nested arithmetic over coordinates and
/// constants with smooth univariate wrappers, safe to evaluate on [-1, 1]^n.
inline ScalarField randomField(const Chart& c, Pcg32& rng, int depth = 4) {
  if (depth == 0) {
    if (rng.below(3) == 0)
      return ScalarField::constant(c, rng.uniform(-2.0, 2.0));
    return ScalarField::coordinate(c, static_cast<int>(rng.below(c.dim())));
  }
  ScalarField a = randomField(c, rng, depth - 1);
  ScalarField b = randomField(c, rng, depth - 1);
  switch (rng.below(6)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return sin(a);
    case 4: return cos(a) * b;
    default: return exp(0.3 * a);
  }
}

/// Richardson-extrapolated central finite difference of f along coordinate i.
inline double fdGradient(const ScalarField& f, const Point& p, int i,
                         double h = 1e-3) {
  auto shift = [&](double d) {
    Eigen::VectorXd x = p.coords();
    x[i] += d;
    return f(Point(p.chart(), x)).value;
  };
  double d1 = (shift(h) - shift(-h)) / (2 * h);
  double d2 = (shift(h / 2) - shift(-h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

inline double fdHessian(const ScalarField& f, const Point& p, int i, int j,
                        double h = 1e-3) {
  auto shift = [&](double di, double dj) {
    Eigen::VectorXd x = p.coords();
    x[i] += di;
    x[j] += dj;
    return f(Point(p.chart(), x)).value;
  };
  if (i == j) {
    auto second = [&](double hh) {
      return (shift(hh, 0) - 2 * shift(0, 0) + shift(-hh, 0)) / (hh * hh);
    };
    return (4 * second(h / 2) - second(h)) / 3;
  }
  auto mixed = [&](double hh) {
    return (shift(hh, hh) - shift(hh, -hh) - shift(-hh, hh) + shift(-hh, -hh)) /
           (4 * hh * hh);
  };
  return (4 * mixed(h / 2) - mixed(h)) / 3;
}

}  // namespace testutil
