#include <doctest.h>

#include <spin7/structures.hpp>

#include "helpers.hpp"

using namespace spin7;
using namespace testutil;

TEST_SUITE_BEGIN("structures");

TEST_CASE("model 4-form: coefficient signs as displayed") {
  Spin7Structure m = modelSpin7();
  Point p = m.chart.point({0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(m.Phi.coeff({0, 1, 2, 3})(p).value == doctest::Approx(1.0));
  CHECK(m.Phi.coeff({0, 2, 5, 7})(p).value == doctest::Approx(-1.0));
  CHECK(m.Phi.coeff({1, 3, 5, 7})(p).value == doctest::Approx(1.0));
  CHECK(m.Phi.coeffs().size() == 14);
}

TEST_CASE("model 4-form: self-dual and Phi^Phi = 14 vol") {
  Spin7Structure m = modelSpin7();
  Point p = m.chart.point({0.3, -0.2, 0.1, 0.5, 0.4, -0.7, 0.2, 0.9});
  CHECK(formDiffAt(hodgeStar(m.Phi, m.metric), m.Phi, p) < 1e-12);
  CHECK(wedge(m.Phi, m.Phi).coeff({0, 1, 2, 3, 4, 5, 6, 7})(p).value ==
        doctest::Approx(14.0).epsilon(1e-12));
}

TEST_CASE("model 3-form: 7 terms, phi ^ *phi = 7 vol, d phi = 0") {
  G2Structure m = modelG2();
  Point p = m.chart.point({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  CHECK(m.phi.coeff({0, 1, 2})(p).value == doctest::Approx(1.0));  // dx123
  DifferentialForm pairing = wedge(m.phi, m.star_phi);
  CHECK(pairing.coeff({0, 1, 2, 3, 4, 5, 6})(p).value ==
        doctest::Approx(7.0).epsilon(1e-12));
  CHECK(exteriorDerivative(m.phi).maxAbsCoeff(p) < 1e-14);
}

// standard SU(3) data on the first six coordinates of `c`:
// omega = dx01 + dx23 + dx45, Omega = (dx0+idx1)^(dx2+idx3)^(dx4+idx5)
static SU3Structure flatSU3(const Chart& c) {
  auto dx = [&](int i) { return DifferentialForm::dx(c, i); };
  DifferentialForm omega =
      wedge(dx(0), dx(1)) + wedge(dx(2), dx(3)) + wedge(dx(4), dx(5));
  DifferentialForm op = wedge(dx(0), wedge(dx(2), dx(4))) -
                        wedge(dx(0), wedge(dx(3), dx(5))) -
                        wedge(dx(1), wedge(dx(2), dx(5))) -
                        wedge(dx(1), wedge(dx(3), dx(4)));
  DifferentialForm om = wedge(dx(0), wedge(dx(2), dx(5))) +
                        wedge(dx(0), wedge(dx(3), dx(4))) +
                        wedge(dx(1), wedge(dx(2), dx(4))) -
                        wedge(dx(1), wedge(dx(3), dx(5)));
  int n = c.dim();
  FieldMatrix J(c, n, n);
  for (int k = 0; k < 3; ++k) {
    J.at(2 * k + 1, 2 * k) = ScalarField::constant(c, 1.0);
    J.at(2 * k, 2 * k + 1) = ScalarField::constant(c, -1.0);
  }
  FieldMatrix gm(c, n, n);
  for (int i = 0; i < 6; ++i) gm.at(i, i) = ScalarField::constant(c, 1.0);
  return SU3Structure{c, omega, op, om, J, MetricField(gm)};
}

TEST_CASE("flat product assembly: s=H=1, constant SU(3) data on T6 fibers") {
  // Chart: base x0..x5, fibers x6 (xi direction), x7 (eta direction).
  Chart c = Chart::make({"x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"});
  auto dx = [&](int i) { return DifferentialForm::dx(c, i); };
  SU3Structure su3 = flatSU3(c);

  Pcg32 rng(31);
  Point p = randomPoint(c, rng);
  CHECK(su3CompatibilityResidual(su3).maxAbsCoeff(p) < 1e-12);
  CHECK(formDiffAt(applyJ(su3.J, su3.omega), su3.omega, p) < 1e-12);

  ReductionData data{c, ScalarField::constant(c, 1.0),
                     ScalarField::constant(c, 1.0), dx(7), dx(6), su3};
  Spin7Structure s7 = assembleSpin7(data, p);
  CHECK(exteriorDerivative(s7.Phi).maxAbsCoeff(p) < 1e-14);
  CHECK(formDiffAt(hodgeStar(s7.Phi, s7.metric), s7.Phi, p) < 1e-11);
  // With this fiber ordering the oriented volume is -dx0..7, so the top
  // coefficient of Phi^Phi in coordinates is -14.
  CHECK(wedge(s7.Phi, s7.Phi).coeff({0, 1, 2, 3, 4, 5, 6, 7})(p).value ==
        doctest::Approx(-14.0).epsilon(1e-11));

  // torsion report: everything closed and s, H constant => zero residuals
  TorsionReport tr = su3Torsion(data);
  CHECK(tr.maxResidualAt(p) < 1e-12);
  CHECK(tr.pi1.maxAbsCoeff(p) < 1e-14);

  // G2 layer lives on a genuine 7-chart (base x0..x5 plus the xi circle),
  // otherwise the product metric is degenerate.
  Chart c7 = Chart::make({"x0", "x1", "x2", "x3", "x4", "x5", "x6"});
  SU3Structure su37 = flatSU3(c7);
  G2Structure g2 = assembleG2(DifferentialForm::dx(c7, 6), su37,
                              ScalarField::constant(c7, 1.0));
  Point p7 = randomPoint(c7, rng);
  CHECK(exteriorDerivative(g2.phi).maxAbsCoeff(p7) < 1e-13);
  CHECK(exteriorDerivative(g2.star_phi).maxAbsCoeff(p7) < 1e-11);
}

TEST_CASE("nijenhuis: constant J integrable, x-dependent J not") {
  Chart c = Chart::make({"x0", "x1", "x2", "x3"});
  FieldMatrix J(c, 4, 4);
  for (int k = 0; k < 2; ++k) {
    J.at(2 * k + 1, 2 * k) = ScalarField::constant(c, 1.0);
    J.at(2 * k, 2 * k + 1) = ScalarField::constant(c, -1.0);
  }
  Pcg32 rng(37);
  Point p = randomPoint(c, rng);
  CHECK(nijenhuisNorm(J)(p).value < 1e-14);
  CHECK(jSquaredResidual(J)(p).value < 1e-14);

  // deliberately non-integrable: rotate the (x2,x3) complex direction by an
  // x1-dependent angle
  ScalarField th = ScalarField::coordinate(c, 1);
  FieldMatrix K(c, 4, 4);
  K.at(1, 0) = ScalarField::constant(c, 1.0);
  K.at(0, 1) = ScalarField::constant(c, -1.0);
  K.at(2, 2) = sin(th) * 0.0;
  K.at(3, 2) = cos(2.0 * th);
  K.at(2, 3) = -1.0 / cos(2.0 * th);
  // J^2 = -1 holds: [[0, -1/c],[c, 0]]^2 = -I
  CHECK(jSquaredResidual(K)(c.point({0.0, 0.3, 0.0, 0.0})).value < 1e-12);
  CHECK(nijenhuisNorm(K)(c.point({0.0, 0.3, 0.0, 0.0})).value > 1e-2);
}

TEST_CASE("J from (1,0)-coframe reproduces the standard J") {
  Chart c = Chart::make({"x0", "x1", "x2", "x3"});
  auto dx = [&](int i) { return DifferentialForm::dx(c, i); };
  // zeta1 = dx0 + i dx1, zeta2 = dx2 + i dx3
  FieldMatrix J = complexStructureFromCoframe({{dx(0), dx(1)}, {dx(2), dx(3)}});
  Point p = c.point({0.1, 0.2, 0.3, 0.4});
  JetMat Jm = J.eval(p);
  CHECK(Jm(1, 0).value == doctest::Approx(1.0));
  CHECK(Jm(0, 1).value == doctest::Approx(-1.0));
  CHECK(Jm(3, 2).value == doctest::Approx(1.0));
  CHECK(Jm(2, 3).value == doctest::Approx(-1.0));
  CHECK(Jm(0, 0).value == doctest::Approx(0.0));
  CHECK(jSquaredResidual(J)(p).value < 1e-13);
}

TEST_CASE("metric from (omega, J) is the flat metric for the standard pair") {
  Chart c = Chart::make({"x0", "x1", "x2", "x3"});
  auto dx = [&](int i) { return DifferentialForm::dx(c, i); };
  DifferentialForm omega = wedge(dx(0), dx(1)) + wedge(dx(2), dx(3));
  FieldMatrix J = complexStructureFromCoframe({{dx(0), dx(1)}, {dx(2), dx(3)}});
  MetricField g = metricFromOmegaJ(omega, J);
  Point p = c.point({0.5, -0.5, 0.25, 0.75});
  Eigen::MatrixXd G = g.valueMatrix(p);
  CHECK((G - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_SUITE_END();
