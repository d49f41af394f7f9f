#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "spin7/jet.hpp"

namespace spin7 {

/// A univariate smooth function supplied as (value, first, second derivative).
/// This is the registration hook through which special functions (Airy,
/// parabolic cylinder) enter the field vocabulary.
struct Univariate {
  std::string name;
  std::function<void(double, double&, double&, double&)> eval;
};

/// A pure map Point -> Jet2 built compositionally from coordinate
/// projections, constants, arithmetic, elementary functions and registered
/// univariate functions. Fields are immutable closed composition trees;
/// evaluation is deterministic and side-effect free.
class ScalarField {
  struct Node {
    virtual ~Node() = default;
    virtual Jet2 eval(const Point& p) const = 0;
  };
  using NodePtr = std::shared_ptr<const Node>;

 public:
  ScalarField() = default;

  const Chart& chart() const { return chart_; }
  bool valid() const { return static_cast<bool>(node_); }

  Jet2 operator()(const Point& p) const {
    if (!p.chart().same(chart_))
      throw ChartMismatch("field evaluated at a point of a different chart");
    return node_->eval(p);
  }
  double value(const Point& p) const { return (*this)(p).value; }

  static ScalarField constant(const Chart& c, double v) {
    struct N : Node {
      double v;
      Jet2 eval(const Point& p) const override {
        return Jet2::constant(p.dim(), v);
      }
    };
    auto n = std::make_shared<N>();
    n->v = v;
    return ScalarField(c, n);
  }

  static ScalarField coordinate(const Chart& c, int i) {
    if (i < 0 || i >= c.dim())
      throw std::invalid_argument("coordinate index out of range");
    struct N : Node {
      int i;
      Jet2 eval(const Point& p) const override {
        return Jet2::coordinate(p.dim(), i, p[i]);
      }
    };
    auto n = std::make_shared<N>();
    n->i = i;
    return ScalarField(c, n);
  }

  /// Field computing an arbitrary pointwise Jet2 expression; used by the
  /// form/metric machinery (Hodge star coefficients, frame-defined complex
  /// structures) whose coefficients are not simple composition trees.
  static ScalarField fromFunction(const Chart& c,
                                  std::function<Jet2(const Point&)> f) {
    struct N : Node {
      std::function<Jet2(const Point&)> f;
      Jet2 eval(const Point& p) const override { return f(p); }
    };
    auto n = std::make_shared<N>();
    n->f = std::move(f);
    return ScalarField(c, n);
  }

  friend ScalarField binary(const ScalarField& a, const ScalarField& b,
                            Jet2 (*op)(const Jet2&, const Jet2&)) {
    a.requireSameChart(b);
    struct N : Node {
      NodePtr a, b;
      Jet2 (*op)(const Jet2&, const Jet2&);
      Jet2 eval(const Point& p) const override {
        return op(a->eval(p), b->eval(p));
      }
    };
    auto n = std::make_shared<N>();
    n->a = a.node_;
    n->b = b.node_;
    n->op = op;
    return ScalarField(a.chart_, n);
  }

  friend ScalarField unary(const ScalarField& a, Jet2 (*op)(const Jet2&)) {
    struct N : Node {
      NodePtr a;
      Jet2 (*op)(const Jet2&);
      Jet2 eval(const Point& p) const override { return op(a->eval(p)); }
    };
    auto n = std::make_shared<N>();
    n->a = a.node_;
    n->op = op;
    return ScalarField(a.chart_, n);
  }

  /// Composition with a registered univariate function (order-2 chain rule).
  friend ScalarField compose(const Univariate& fn, const ScalarField& a) {
    struct N : Node {
      NodePtr a;
      Univariate fn;
      Jet2 eval(const Point& p) const override {
        Jet2 inner = a->eval(p);
        double f, df, ddf;
        fn.eval(inner.value, f, df, ddf);
        return compose2(inner, f, df, ddf);
      }
      static Jet2 compose2(const Jet2& j, double f, double df, double ddf) {
        return spin7::compose(j, f, df, ddf);
      }
    };
    auto n = std::make_shared<N>();
    n->a = a.node_;
    n->fn = fn;
    return ScalarField(a.chart_, n);
  }

  /// The partial-derivative field d_i f. Its jet has one less valid order
  /// than f's (the Hessian of the result is truncated to zero).
  ScalarField partial(int i) const {
    struct N : Node {
      NodePtr a;
      int i;
      Jet2 eval(const Point& p) const override {
        Jet2 base = a->eval(p);
        Jet2 r(base.dim(), base.grad[i]);
        if (base.order >= 2) r.grad = base.hess.row(i).transpose();
        r.order = base.order - 1;
        return r;
      }
    };
    auto n = std::make_shared<N>();
    n->a = node_;
    n->i = i;
    return ScalarField(chart_, n);
  }

  void requireSameChart(const ScalarField& other) const {
    if (!chart_.same(other.chart_))
      throw ChartMismatch("fields live on different charts");
  }

 private:
  ScalarField(Chart c, NodePtr n) : chart_(std::move(c)), node_(std::move(n)) {}
  Chart chart_;
  NodePtr node_;
};

namespace fieldops {
inline Jet2 addJ(const Jet2& a, const Jet2& b) { return a + b; }
inline Jet2 subJ(const Jet2& a, const Jet2& b) { return a - b; }
inline Jet2 mulJ(const Jet2& a, const Jet2& b) { return a * b; }
inline Jet2 divJ(const Jet2& a, const Jet2& b) { return a / b; }
inline Jet2 negJ(const Jet2& a) { return -a; }
inline Jet2 sinJ(const Jet2& a) { return sin(a); }
inline Jet2 cosJ(const Jet2& a) { return cos(a); }
inline Jet2 expJ(const Jet2& a) { return exp(a); }
inline Jet2 logJ(const Jet2& a) { return log(a); }
inline Jet2 sqrtJ(const Jet2& a) { return sqrt(a); }
inline Jet2 atanJ(const Jet2& a) { return atan(a); }
}  // namespace fieldops

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return binary(a, b, &fieldops::addJ);
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return binary(a, b, &fieldops::subJ);
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return binary(a, b, &fieldops::mulJ);
}
inline ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return binary(a, b, &fieldops::divJ);
}
inline ScalarField operator-(const ScalarField& a) {
  return unary(a, &fieldops::negJ);
}
inline ScalarField operator+(const ScalarField& a, double c) {
  return a + ScalarField::constant(a.chart(), c);
}
inline ScalarField operator+(double c, const ScalarField& a) { return a + c; }
inline ScalarField operator-(const ScalarField& a, double c) { return a + (-c); }
inline ScalarField operator-(double c, const ScalarField& a) {
  return (-a) + c;
}
inline ScalarField operator*(const ScalarField& a, double c) {
  return a * ScalarField::constant(a.chart(), c);
}
inline ScalarField operator*(double c, const ScalarField& a) { return a * c; }
inline ScalarField operator/(const ScalarField& a, double c) {
  return a * (1.0 / c);
}
inline ScalarField operator/(double c, const ScalarField& a) {
  return ScalarField::constant(a.chart(), c) / a;
}

inline ScalarField sin(const ScalarField& a) { return unary(a, &fieldops::sinJ); }
inline ScalarField cos(const ScalarField& a) { return unary(a, &fieldops::cosJ); }
inline ScalarField exp(const ScalarField& a) { return unary(a, &fieldops::expJ); }
inline ScalarField log(const ScalarField& a) { return unary(a, &fieldops::logJ); }
inline ScalarField sqrt(const ScalarField& a) {
  return unary(a, &fieldops::sqrtJ);
}
inline ScalarField atan(const ScalarField& a) {
  return unary(a, &fieldops::atanJ);
}

inline ScalarField pow(const ScalarField& a, double p) {
  Univariate u{"pow", [p](double x, double& f, double& df, double& ddf) {
                 if (x <= 0.0 && p != std::floor(p))
                   throw EvaluationError(
                       "pow: non-positive base with fractional exponent");
                 f = std::pow(x, p);
                 df = p * std::pow(x, p - 1.0);
                 ddf = p * (p - 1.0) * std::pow(x, p - 2.0);
               }};
  return compose(u, a);
}

}  // namespace spin7
