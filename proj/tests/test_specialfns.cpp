#include <doctest.h>

#include <spin7/specialfns.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "helpers.hpp"

using namespace spin7;
using namespace spin7::specialfns;
using namespace testutil;

TEST_SUITE_BEGIN("specialfns");

static std::map<std::string, double> readFixture() {
  std::ifstream in(SPIN7_FIXTURE_PATH);
  REQUIRE(in.good());
  std::map<std::string, double> v;
  std::string key;
  double val;
  while (in >> key >> val) v[key] = val;
  return v;
}

TEST_CASE("normalization constants agree with the committed fixture") {
  auto fx = readFixture();
  CHECK(std::abs(fx.at("ai0") - kAi0) < 1e-15);
  CHECK(std::abs(fx.at("aiprime0") - kAiPrime0) < 1e-15);
  CHECK(std::abs(fx.at("u00") - kU00) < 1e-15);
  CHECK(std::abs(fx.at("uprime00") - kUPrime00) < 1e-15);
}

// Independent RK4 integration of the defining ODE from the fixture initial
// conditions, compared against the table-backed evaluator.
static void rk4Compare(const std::function<double(double)>& q,
                       std::array<double, 2> y, double t0, double t1, int n,
                       const std::function<double(double)>& ref, double tol) {
  double h = (t1 - t0) / n;
  auto f = [&](double t, std::array<double, 2> s) {
    return std::array<double, 2>{s[1], q(t) * s[0]};
  };
  for (int k = 0; k < n; ++k) {
    double t = t0 + k * h;
    auto add = [](std::array<double, 2> a, std::array<double, 2> b, double c) {
      return std::array<double, 2>{a[0] + c * b[0], a[1] + c * b[1]};
    };
    auto k1 = f(t, y);
    auto k2 = f(t + h / 2, add(y, k1, h / 2));
    auto k3 = f(t + h / 2, add(y, k2, h / 2));
    auto k4 = f(t + h, add(y, k3, h));
    y[0] += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    y[1] += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    CHECK(std::abs(y[0] - ref(t + h)) < tol);
  }
}

TEST_CASE("airy: matches an independent integration of Ai'' = y Ai") {
  auto ref = [](double y) {
    double f, df, ddf;
    airy_ai(y, f, df, ddf);
    return f;
  };
  rk4Compare([](double y) { return y; }, {kAi0, kAiPrime0}, 0.0, 3.0, 6000,
             ref, 1e-10);
  rk4Compare([](double y) { return y; }, {kAi0, kAiPrime0}, 0.0, -3.0, 6000,
             ref, 1e-10);
}

TEST_CASE("pcf: matches an independent integration of v'' = s^2 v") {
  double f0, df0, ddf0;
  pcf_u0(0.0, f0, df0, ddf0);
  CHECK(std::abs(f0 - kU00) < 1e-11);
  // v(s) = U(0, sqrt(2) s) gives v'(0) = sqrt(2) U'(0, 0)
  CHECK(std::abs(df0 - std::sqrt(2.0) * kUPrime00) < 1e-10);
  auto ref = [](double s) {
    double f, df, ddf;
    pcf_u0(s, f, df, ddf);
    return f;
  };
  rk4Compare([](double s) { return s * s; }, {f0, df0}, 0.0, 3.0, 6000, ref,
             1e-10);
}

TEST_CASE("derivatives are consistent with finite differences") {
  for (double y : {-2.0, -0.5, 0.7, 1.9}) {
    double f, df, ddf;
    airy_ai(y, f, df, ddf);
    double h = 1e-5;
    double fp, dp, xp, fm, dm, xm;
    airy_ai(y + h, fp, dp, xp);
    airy_ai(y - h, fm, dm, xm);
    CHECK(std::abs((fp - fm) / (2 * h) - df) < 1e-8);
    CHECK(std::abs((dp - dm) / (2 * h) - ddf) < 1e-8);
    CHECK(std::abs(ddf - y * f) < 1e-13);  // reconstructed from the ODE
  }
  for (double s : {0.2, 0.9, 2.5}) {
    double f, df, ddf;
    pcf_u0(s, f, df, ddf);
    double h = 1e-5;
    double fp, dp, xp, fm, dm, xm;
    pcf_u0(s + h, fp, dp, xp);
    pcf_u0(s - h, fm, dm, xm);
    CHECK(std::abs((fp - fm) / (2 * h) - df) < 1e-8);
    CHECK(std::abs(ddf - s * s * f) < 1e-13);
  }
}

TEST_CASE("threshold: v crosses 1 exactly once, decreasing") {
  double sstar = domain_threshold_u_less_one();
  double f, df, ddf;
  pcf_u0(sstar, f, df, ddf);
  CHECK(std::abs(f - 1.0) < 1e-9);
  CHECK(df < 0.0);
  pcf_u0(sstar + 0.5, f, df, ddf);
  CHECK(f < 1.0);
  pcf_u0(std::max(0.0, sstar - 0.1), f, df, ddf);
  CHECK(f >= 1.0 - 1e-12);
}

TEST_CASE("univariate hooks carry exact order-2 jets") {
  Chart c = Chart::make({"s"}, {}, {Interval{0.05, 3.0}});
  ScalarField s = ScalarField::coordinate(c, 0);
  ScalarField v = compose(pcfUnivariate(), s);
  ScalarField vdot = compose(pcfPrimeUnivariate(), s);
  ScalarField ai = compose(airyUnivariate(), s);
  ScalarField aidot = compose(airyPrimeUnivariate(), s);
  Point p = c.point({1.3});
  // first derivative of the base hook equals the prime hook's value
  CHECK(v(p).grad[0] == doctest::Approx(vdot(p).value).epsilon(1e-14));
  CHECK(ai(p).grad[0] == doctest::Approx(aidot(p).value).epsilon(1e-14));
  // second derivative of the prime hook satisfies the differentiated ODE
  double sv = 1.3;
  CHECK(vdot(p).hess(0, 0) ==
        doctest::Approx(sv * sv * vdot(p).value + 2 * sv * v(p).value)
            .epsilon(1e-12));
  CHECK(aidot(p).hess(0, 0) ==
        doctest::Approx(sv * aidot(p).value + ai(p).value).epsilon(1e-12));
}

TEST_CASE("out-of-domain arguments are rejected") {
  double f, df, ddf;
  CHECK_THROWS_AS(airy_ai(11.0, f, df, ddf), DomainError);
  CHECK_THROWS_AS(pcf_u0(-0.5, f, df, ddf), DomainError);
}

TEST_SUITE_END();
