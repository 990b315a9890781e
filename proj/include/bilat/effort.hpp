#pragma once

// Unilateral-versus-bilateral control-effort comparison for the constant
// coefficient reaction-diffusion design, as a function of the dimensionless
// group delta = L sqrt(lambda/eps).
//
// J2 is the total bilateral effort: twice the L1 norm of one bilateral gain
// (the two ends have equal norms). J1 is the L1 norm of the unilateral gain
// on the length-2L domain, in two variants: (a) the literal printed weight
// xi, which makes the integrand sign-changing, and (b) the textbook weight
// (xi + L) obtained by shifting the standard single-ended kernel from
// [0, 2L]. Both are computed and exported; variant (b) dominates J2 for all
// delta, so only variant (a) exhibits the crossover.

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "bilat/gain.hpp"
#include "bilat/reaction_diffusion.hpp"

namespace bilat {

enum class UnilateralVariant { literal_weight, shifted_weight };

/// Single-ended gain on [-L, L] (pinned at one end, actuated at the other),
/// endpoint limits taken analytically. Requires constant lambda >= 0.
GainFunction unilateral_rd_gain(const RdPlant& plant, const IntervalGrid& grid,
                                UnilateralVariant variant = UnilateralVariant::shifted_weight);
double unilateral_rd_gain_value(const RdPlant& plant, double xi,
                                UnilateralVariant variant = UnilateralVariant::shifted_weight);

struct JNorms {
    double j1_literal;
    double j1_shifted;
    double j2;
};

/// L1 effort norms in delta-normalized form, by endpoint-regularized
/// quadrature with Richardson refinement. Requires delta in (0, 10].
JNorms j_norms(double delta, double rel_tol = 1e-8);

/// Bisection for J1(delta) = J2(delta) given the difference function.
/// Throws BracketError when [lo, hi] does not bracket a sign change.
double find_crossover(const std::function<double(double)>& difference, double lo, double hi,
                      double tol = 1e-6);

/// find_crossover on the real norms for the chosen unilateral variant.
double find_crossover(double lo, double hi, UnilateralVariant variant, double tol = 1e-6);

struct EffortCurve {
    Eigen::VectorXd deltas;
    Eigen::VectorXd j1_literal;
    Eigen::VectorXd j1_shifted;
    Eigen::VectorXd j2;
    std::optional<double> crossover_literal;
    std::optional<double> crossover_shifted;
};

/// Tabulates both J1 variants and J2 over sorted positive samples and
/// attaches the crossover estimates (absent when bracketing fails or fewer
/// than two samples are given).
EffortCurve effort_curve(const Eigen::VectorXd& deltas, double rel_tol = 1e-8);

}  // namespace bilat
