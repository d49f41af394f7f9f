// Independent oracle for the special-function branch constants.
//
// Produces the committed fixture core/data/specialfns_fixture.txt. The four
// constants are evaluated from closed forms in 50-digit arithmetic:
//   Ai(0)   =  3^{-2/3} / Γ(2/3)
//   Ai'(0)  = -3^{-1/3} / Γ(1/3)
//   U(0,0)  =  √π / (2^{1/4} Γ(3/4))
//   U'(0,0) = -√π · 2^{1/4} / Γ(1/4)
// Each Γ value is cross-checked against tanh-sinh quadrature of the Euler
// integral; the program aborts on disagreement beyond 1e-20 relative.

#include <iomanip>
#include <iostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

using Real = boost::multiprecision::cpp_bin_float_50;

static Real gammaByQuadrature(const Real& x) {
  // Γ(x) = ∫₀^∞ t^{x-1} e^{-t} dt. On [0,1] substitute t = u¹²: for the
  // arguments used here (x ∈ {1/4, 1/3, 2/3, 3/4}) the exponent 12x−1 is a
  // non-negative integer, so the integrand is smooth at 0.
  using GK = boost::math::quadrature::gauss_kronrod<Real, 61>;
  auto f1 = [&](const Real& u) {
    return 12 * pow(u, 12 * x - 1) * exp(-pow(u, 12));
  };
  auto f2 = [&](const Real& t) { return pow(t, x - 1) * exp(-t); };
  Real a = GK::integrate(f1, Real(0), Real(1), 15, Real("1e-40"));
  Real b = GK::integrate(f2, Real(1), Real(120), 15, Real("1e-40"));
  return a + b;
}

static Real checkedGamma(const Real& x) {
  Real g1 = boost::math::tgamma(x);
  Real g2 = gammaByQuadrature(x);
  if (abs(g1 - g2) / g1 > Real("1e-20")) {
    std::cerr << "gamma cross-check failed at x=" << x << "\n";
    std::exit(1);
  }
  return g1;
}

int main() {
  Real pi = boost::math::constants::pi<Real>();
  Real ai0 = pow(Real(3), Real(-2) / 3) / checkedGamma(Real(2) / 3);
  Real aip0 = -pow(Real(3), Real(-1) / 3) / checkedGamma(Real(1) / 3);
  Real u00 = sqrt(pi) / (pow(Real(2), Real(1) / 4) * checkedGamma(Real(3) / 4));
  Real up00 = -sqrt(pi) * pow(Real(2), Real(1) / 4) / checkedGamma(Real(1) / 4);

  std::cout << std::setprecision(20);
  std::cout << "ai0 " << ai0 << "\n";
  std::cout << "aiprime0 " << aip0 << "\n";
  std::cout << "u00 " << u00 << "\n";
  std::cout << "uprime00 " << up00 << "\n";
  return 0;
}
