#pragma once

// Independent reference computations used to freeze expected values. These
// stay deliberately separate from the library implementations they check:
// plain long-double series, no crossover to asymptotics, no shared helpers.

#include <cmath>

namespace oracle {

/// I0 by its defining power series, summed in long double.
inline double bessel_i0_series(double z) {
    const long double q = 0.25L * static_cast<long double>(z) * static_cast<long double>(z);
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k <= 400; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (term < 1e-25L * sum) break;
    }
    return static_cast<double>(sum);
}

/// I1 by its defining power series, summed in long double.
inline double bessel_i1_series(double z) {
    const long double zl = static_cast<long double>(z);
    const long double q = 0.25L * zl * zl;
    long double term = 0.5L * zl;
    long double sum = term;
    for (int k = 1; k <= 400; ++k) {
        term *= q / (static_cast<long double>(k) * (k + 1));
        sum += term;
        if (term < 1e-25L * sum) break;
    }
    return static_cast<double>(sum);
}

}  // namespace oracle
