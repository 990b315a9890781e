#include "bilat/effort.hpp"

#include <cmath>
#include <stdexcept>

#include "bilat/bessel.hpp"
#include "bilat/quadrature.hpp"

namespace bilat {

namespace {

double require_constant_nonneg_lambda(const RdPlant& plant) {
    const double lam = plant.lambda.constant_value();
    if (lam < 0.0) throw std::domain_error("unilateral_rd_gain requires constant lambda >= 0");
    return lam;
}

void check_delta(double delta) {
    if (!(delta > 0.0) || delta > 10.0) {
        throw std::domain_error("j_norms: delta must lie in (0, 10]");
    }
}

// delta-normalized |integrands| on [-1, 1]; i1e = I1(z)/z keeps the
// endpoints finite.
double j1_literal_integrand(double delta, double xi) {
    const double arg = delta * std::sqrt(std::max((1.0 - xi) * (3.0 + xi), 0.0));
    return delta * delta * std::abs(xi) * bessel_i1_over_z(arg);
}

double j1_shifted_integrand(double delta, double xi) {
    const double arg = delta * std::sqrt(std::max((1.0 - xi) * (3.0 + xi), 0.0));
    return delta * delta * (1.0 + xi) * bessel_i1_over_z(arg);
}

double j2_integrand(double delta, double xi) {
    const double arg = delta * std::sqrt(std::max(1.0 - xi * xi, 0.0));
    return delta * delta * (1.0 + xi) * bessel_i1_over_z(arg);
}

}  // namespace

double unilateral_rd_gain_value(const RdPlant& plant, double xi, UnilateralVariant variant) {
    const double lam = require_constant_nonneg_lambda(plant);
    const double eps = plant.epsilon;
    const double L = plant.half_length;
    const double arg2 = lam / eps * std::max(4.0 * L * L - (xi + L) * (xi + L), 0.0);
    const double ratio = bessel_i1_over_z(std::sqrt(arg2));
    const double weight = variant == UnilateralVariant::literal_weight ? xi : (xi + L);
    return -lam / eps * weight * ratio;
}

GainFunction unilateral_rd_gain(const RdPlant& plant, const IntervalGrid& grid,
                                UnilateralVariant variant) {
    Eigen::VectorXd samples(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        samples[i] = unilateral_rd_gain_value(plant, grid.node(i), variant);
    }
    return GainFunction(BoundaryEnd::left, grid, std::move(samples));
}

JNorms j_norms(double delta, double rel_tol) {
    check_delta(delta);
    JNorms out;
    out.j1_literal =
        richardson_trapezoid([delta](double xi) { return j1_literal_integrand(delta, xi); },
                             -1.0, 1.0, rel_tol)
            .value;
    out.j1_shifted =
        richardson_trapezoid([delta](double xi) { return j1_shifted_integrand(delta, xi); },
                             -1.0, 1.0, rel_tol)
            .value;
    out.j2 = richardson_trapezoid([delta](double xi) { return j2_integrand(delta, xi); }, -1.0,
                                  1.0, rel_tol)
                 .value;
    return out;
}

double find_crossover(const std::function<double(double)>& difference, double lo, double hi,
                      double tol) {
    if (!(lo < hi)) throw ConfigError("find_crossover: empty range");
    double flo = difference(lo);
    double fhi = difference(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw BracketError("find_crossover: no sign change in range");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = difference(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double find_crossover(double lo, double hi, UnilateralVariant variant, double tol) {
    auto diff = [variant](double delta) {
        const JNorms n = j_norms(delta);
        const double j1 =
            variant == UnilateralVariant::literal_weight ? n.j1_literal : n.j1_shifted;
        return j1 - n.j2;
    };
    return find_crossover(diff, lo, hi, tol);
}

EffortCurve effort_curve(const Eigen::VectorXd& deltas, double rel_tol) {
    if (deltas.size() < 1) throw ConfigError("effort_curve: need at least one sample");
    for (Eigen::Index i = 0; i < deltas.size(); ++i) {
        check_delta(deltas[i]);
        if (i > 0 && !(deltas[i] > deltas[i - 1])) {
            throw ConfigError("effort_curve: samples must be sorted ascending");
        }
    }
    EffortCurve curve;
    curve.deltas = deltas;
    curve.j1_literal.resize(deltas.size());
    curve.j1_shifted.resize(deltas.size());
    curve.j2.resize(deltas.size());
    for (Eigen::Index i = 0; i < deltas.size(); ++i) {
        const JNorms n = j_norms(deltas[i], rel_tol);
        curve.j1_literal[i] = n.j1_literal;
        curve.j1_shifted[i] = n.j1_shifted;
        curve.j2[i] = n.j2;
    }
    if (deltas.size() >= 2) {
        const double lo = deltas[0];
        const double hi = deltas[deltas.size() - 1];
        try {
            curve.crossover_literal = find_crossover(lo, hi, UnilateralVariant::literal_weight);
        } catch (const BracketError&) {
        }
        try {
            curve.crossover_shifted = find_crossover(lo, hi, UnilateralVariant::shifted_weight);
        } catch (const BracketError&) {
        }
    }
    return curve;
}

}  // namespace bilat
