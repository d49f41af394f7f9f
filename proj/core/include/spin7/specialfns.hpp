#pragma once

#include "spin7/scalar_field.hpp"

namespace spin7::specialfns {

/// Branch-normalization constants. The authoritative values live in the
/// committed fixture file (core/data/specialfns_fixture.txt), produced by an
/// independent multiprecision oracle (tools/specialfns_oracle.cpp); a test
/// asserts these copies agree with the fixture to 1e-15.
inline constexpr double kAi0 = 0.35502805388781723926;
inline constexpr double kAiPrime0 = -0.25881940379280679841;
inline constexpr double kU00 = 1.2162802142575202831;        // U(0, 0)
inline constexpr double kUPrime00 = -0.58136831701911858184;  // U'(0, 0)

/// Airy function Ai with two derivatives; d2 is reconstructed from the
/// defining ODE Ai'' = y·Ai. Domain: y in [-10, 10].
void airy_ai(double y, double& f, double& df, double& ddf);

/// v(s) = U(0, √2 s), the decaying parabolic-cylinder solution of
/// v̈ = s² v, normalized so v(0) = U(0,0). Domain: s in [0, 10].
void pcf_u0(double s, double& f, double& df, double& ddf);

/// Smallest s* ≥ 0 with v(s) < 1 for all s > s* (bisection to 1e-10).
double domain_threshold_u_less_one();

/// Registered univariate hooks for use inside ScalarFields.
Univariate airyUnivariate();
Univariate pcfUnivariate();

/// Hooks for the first derivatives Ai' and v̇. Their own derivatives are
/// reconstructed from the defining ODEs (Ai''' = y·Ai' + Ai, v''' = s²v̇ + 2sv),
/// so fields built from them still carry exact order-2 jets.
Univariate airyPrimeUnivariate();
Univariate pcfPrimeUnivariate();

}  // namespace spin7::specialfns
