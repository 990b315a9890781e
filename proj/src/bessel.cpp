#include "bilat/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace bilat {

namespace {

constexpr double kSeriesAsymptoticCrossover = 15.0;

void check_arg(double z, const char* name) {
    if (!(z >= 0.0)) {
        throw std::domain_error(std::string(name) + ": argument must be nonnegative");
    }
    if (z > kBesselArgMax) {
        throw std::domain_error(std::string(name) + ": argument exceeds overflow guard");
    }
}

// Ascending series I0 = sum (z/2)^{2k} / (k!)^2. All terms positive, no
// cancellation; terminates when a term drops below 1e-16 of the partial sum.
double i0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

// I1(z)/z = (1/2) sum (z^2/4)^k / (k! (k+1)!), entire in z^2.
double i1_over_z_series(double z) {
    const double q = 0.25 * z * z;
    double term = 0.5;
    double sum = 0.5;
    for (int k = 1; k <= 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

// Large-argument expansion I_nu(z) ~ e^z/sqrt(2 pi z) * sum_k t_k with
// t_0 = 1, t_k = -t_{k-1} (4 nu^2 - (2k-1)^2) / (8 k z). The sum is summed
// to its smallest term.
double i_asymptotic(double z, int nu) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev_abs = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double m = 2.0 * k - 1.0;
        term *= -(mu - m * m) / (8.0 * k * z);
        if (std::abs(term) >= prev_abs) break;  // divergent tail reached
        sum += term;
        prev_abs = std::abs(term);
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(z) / std::sqrt(2.0 * M_PI * z) * sum;
}

}  // namespace

double bessel_i0(double z) {
    check_arg(z, "bessel_i0");
    if (z <= kSeriesAsymptoticCrossover) return i0_series(z);
    return i_asymptotic(z, 0);
}

double bessel_i1(double z) {
    check_arg(z, "bessel_i1");
    if (z <= kSeriesAsymptoticCrossover) return z * i1_over_z_series(z);
    return i_asymptotic(z, 1);
}

double bessel_i1_over_z(double z) {
    check_arg(z, "bessel_i1_over_z");
    if (z <= kSeriesAsymptoticCrossover) return i1_over_z_series(z);
    return i_asymptotic(z, 1) / z;
}

}  // namespace bilat
