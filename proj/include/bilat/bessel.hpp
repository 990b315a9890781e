#pragma once

// Modified Bessel functions of the first kind, orders 0 and 1, on z >= 0.
// Truncated power series below the crossover argument, scaled asymptotic
// expansion above it. Every boundary-gain formula in this library reaches
// these through the ratio form I1(z)/z, which stays finite at z = 0.

namespace bilat {

/// Largest argument accepted by bessel_i0 / bessel_i1 (keeps e^z well inside
/// double range).
inline constexpr double kBesselArgMax = 500.0;

/// I0(z) for z in [0, kBesselArgMax]. Throws std::domain_error outside.
double bessel_i0(double z);

/// I1(z) for z in [0, kBesselArgMax]. Throws std::domain_error outside.
double bessel_i1(double z);

/// I1(z)/z, continued to 1/2 at z = 0. Same domain as bessel_i1.
double bessel_i1_over_z(double z);

}  // namespace bilat
