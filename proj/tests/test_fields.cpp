#include <doctest.h>

#include <spin7/scalar_field.hpp>

#include "helpers.hpp"

using namespace spin7;
using namespace testutil;

TEST_SUITE_BEGIN("fields");

TEST_CASE("x^2 at x=3: gradient 6, hessian 2") {
  Chart c = Chart::make({"x"});
  ScalarField x = ScalarField::coordinate(c, 0);
  Jet2 j = (x * x)(c.point({3.0}));
  CHECK(j.value == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(j.grad[0] == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(j.hess(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("product rule: x*y at (2,5)") {
  Chart c = Chart::make({"x", "y"});
  ScalarField f =
      ScalarField::coordinate(c, 0) * ScalarField::coordinate(c, 1);
  Jet2 j = f(c.point({2.0, 5.0}));
  CHECK(j.value == doctest::Approx(10.0));
  CHECK(j.grad[0] == doctest::Approx(5.0));
  CHECK(j.grad[1] == doctest::Approx(2.0));
  CHECK(j.hess(0, 1) == doctest::Approx(1.0));
  CHECK(j.hess(1, 0) == doctest::Approx(1.0));
  CHECK(j.hess(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("constant field evaluates to (7, 0, 0)") {
  Chart c = Chart::make({"x", "y", "z"});
  Jet2 j = ScalarField::constant(c, 7.0)(c.point({0.1, 0.2, 0.3}));
  CHECK(j.value == 7.0);
  CHECK(j.grad.isZero());
  CHECK(j.hess.isZero());
}

TEST_CASE("coordinate projection jet is the unit vector / zero matrix") {
  Chart c = Chart::make({"x0", "x1", "x2", "x3"});
  Jet2 j = ScalarField::coordinate(c, 2)(c.point({1.0, 2.0, 3.5, 4.0}));
  CHECK(j.value == 3.5);
  CHECK(j.grad[2] == 1.0);
  CHECK(j.grad.lpNorm<1>() == 1.0);
  CHECK(j.hess.isZero());
}

TEST_CASE("sin(x) at 0.3 matches Maclaurin series oracle") {
  Chart c = Chart::make({"x"});
  Jet2 j = sin(ScalarField::coordinate(c, 0))(c.point({0.3}));
  // series oracle with 15 terms
  double v = 0, d1 = 0, d2 = 0, x = 0.3;
  double term = x;
  for (int n = 0; n < 15; ++n) {
    // sin = sum (-1)^n x^{2n+1}/(2n+1)!
    double s = (n % 2 == 0) ? 1.0 : -1.0;
    double fact = 1.0;
    for (int k = 2; k <= 2 * n + 1; ++k) fact *= k;
    v += s * std::pow(x, 2 * n + 1) / fact;
    d1 += s * (2 * n + 1) * std::pow(x, 2 * n) / fact;
    if (2 * n + 1 >= 2)
      d2 += s * (2 * n + 1) * (2 * n) * std::pow(x, 2 * n - 1) / fact;
  }
  (void)term;
  CHECK(std::abs(j.value - v) < 1e-12);
  CHECK(std::abs(j.grad[0] - d1) < 1e-12);
  CHECK(std::abs(j.hess(0, 0) - d2) < 1e-12);
}

TEST_CASE("ln(H^{-1/2} s^{-1/3}) gradient matches finite differences") {
  Chart c = Chart::make({"t", "s"}, {}, {Interval{0.1, 10.0}, Interval{0.1, 10.0}});
  ScalarField t = ScalarField::coordinate(c, 0);
  ScalarField s = ScalarField::coordinate(c, 1);
  ScalarField f = log(pow(t, -0.5) * pow(s, -1.0 / 3.0));
  Point p = c.point({1.7, 2.3});
  Jet2 j = f(p);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(j.grad[i] - fdGradient(f, p, i, 1e-5)) <
          1e-8 * std::max(1.0, std::abs(j.grad[i])));
}

TEST_CASE("random composite fields match Richardson finite differences") {
  Chart c = Chart::make({"x", "y", "z"});
  Pcg32 rng(20260823);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ScalarField f = randomField(c, rng);
    Point p = randomPoint(c, rng);
    Jet2 j = f(p);
    for (int i = 0; i < 3; ++i) {
      double fd = fdGradient(f, p, i);
      double scale = std::max(1.0, std::abs(j.grad[i]));
      REQUIRE(std::abs(j.grad[i] - fd) < 1e-7 * scale);
      for (int k = i; k < 3; ++k) {
        double fh = fdHessian(f, p, i, k);
        double hscale = std::max(1.0, std::abs(j.hess(i, k)));
        REQUIRE(std::abs(j.hess(i, k) - fh) < 1e-5 * hscale);
      }
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("polynomial jets are exact vs symbolic expansion") {
  Chart c = Chart::make({"x", "y"});
  ScalarField x = ScalarField::coordinate(c, 0);
  ScalarField y = ScalarField::coordinate(c, 1);
  // f = (x + 2y)^2 * (x - y) degree 3; expand symbolically:
  // f = x^3 + 3x^2 y - 6 y^3 ... verify via direct evaluation instead:
  ScalarField f = (x + 2.0 * y) * (x + 2.0 * y) * (x - y);
  auto exact = [](double X, double Y) {
    double a = X + 2 * Y, b = X - Y;
    return a * a * b;
  };
  Pcg32 rng(7);
  for (int t = 0; t < 50; ++t) {
    Point p = randomPoint(c, rng, -2.0, 2.0);
    double X = p[0], Y = p[1];
    Jet2 j = f(p);
    CHECK(std::abs(j.value - exact(X, Y)) <= 1e-13 * std::max(1.0, std::abs(j.value)));
    // symbolic gradient: d/dx = 2a*b + a^2 ; d/dy = 4a*b - a^2
    double a = X + 2 * Y, b = X - Y;
    CHECK(std::abs(j.grad[0] - (2 * a * b + a * a)) < 1e-12);
    CHECK(std::abs(j.grad[1] - (4 * a * b - a * a)) < 1e-12);
    // symbolic hessian: f_xx = 2b + 4a ; f_xy = 4b + 4a*? ...
    // f_x = 2a b + a^2, f_xx = 2b + 2a*? careful: da/dx=1, db/dx=1:
    // f_xx = 2b + 2a + 2a = 2b + 4a? d/dx(2ab) = 2b + 2a ; d/dx(a^2) = 2a
    CHECK(std::abs(j.hess(0, 0) - (2 * b + 4 * a)) < 1e-12);
    // f_xy = d/dy(2ab + a^2) = 4b - 2a + 4a = 4b + 2a
    CHECK(std::abs(j.hess(0, 1) - (4 * b + 2 * a)) < 1e-12);
    // f_yy = d/dy(4ab - a^2) = 8b - 4a - 8a = 8b - 4a? d/dy(4ab)=8b-4a, d/dy(a^2)=4a
    CHECK(std::abs(j.hess(1, 1) - (8 * b - 4 * a - 4 * a)) < 1e-12);
  }
}

TEST_CASE("division by vanishing denominator raises an evaluation error") {
  Chart c = Chart::make({"x"});
  ScalarField f = 1.0 / ScalarField::coordinate(c, 0);
  CHECK_THROWS_AS(f(c.point({0.0})), EvaluationError);
}

TEST_CASE("chart mismatch raises on combination") {
  Chart a = Chart::make({"x"});
  Chart b = Chart::make({"x"});
  CHECK_THROWS_AS(ScalarField::coordinate(a, 0) + ScalarField::coordinate(b, 0),
                  ChartMismatch);
}

TEST_CASE("out-of-domain point names the violated interval") {
  Chart c = Chart::make({"t"}, {}, {Interval{0.0, 1e300}});
  CHECK_THROWS_AS(c.point({-1.0}), DomainError);
}

TEST_CASE("periodic coordinates wrap mod period") {
  Chart c = Chart::make({"x", "theta"}, {false, true});
  Point p = c.point({0.5, 2.0 * M_PI + 0.25});
  CHECK(p[1] == doctest::Approx(0.25));
}

TEST_CASE("partial-derivative field lowers jet order") {
  Chart c = Chart::make({"x"});
  ScalarField f = ScalarField::coordinate(c, 0);
  ScalarField g = sin(f);
  ScalarField dg = g.partial(0);
  Jet2 j = dg(c.point({0.4}));
  CHECK(j.order == 1);
  CHECK(j.value == doctest::Approx(std::cos(0.4)));
  CHECK(j.grad[0] == doctest::Approx(-std::sin(0.4)));
  Jet2 j2 = dg.partial(0)(c.point({0.4}));
  CHECK(j2.order == 0);
  CHECK(j2.value == doctest::Approx(-std::sin(0.4)));
}

TEST_SUITE_END();
