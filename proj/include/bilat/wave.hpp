#pragma once

// Reduction of the anti-damped wave equation
//   u_tt - u_xx = 2 lambda(x) u_t + alpha(x) u_x      (beta = 0)
// to the 2x2 same-speed hyperbolic system via the Riemann pair
// w = u_x + u_t (leftward), v = u_x - u_t (rightward), and recovery of the
// physical Dirichlet actuators from the hyperbolic inflow controls.
//
// In the hyperbolic normal form the rightward slot is v and the leftward
// slot is w; each family is actuated at its inflow end, so
//   v(t,-L) = V1  =>  dU1/dt = u_x(t,-L) - V1,
//   w(t,+L) = V2  =>  dU2/dt = V2 - u_x(t,+L),
// with U1(0), U2(0) equal to the initial boundary displacements.

#include <Eigen/Dense>

#include "bilat/grid.hpp"
#include "bilat/hyperbolic.hpp"

namespace bilat {

struct WavePlant {
    CoefficientProfile lambda;  // anti-damping
    CoefficientProfile alpha;   // convection
    double half_length;
};

struct WaveReduction {
    HypPlant hyp;  // epsilon = 1; u-slot carries v = u_x - u_t, v-slot carries w = u_x + u_t

    /// (u_x, u_t) -> (w, v)
    static std::pair<Eigen::VectorXd, Eigen::VectorXd> to_riemann(
        Eigen::Ref<const Eigen::VectorXd> ux, Eigen::Ref<const Eigen::VectorXd> ut) {
        return {ux + ut, ux - ut};
    }
    /// (w, v) -> (u_x, u_t)
    static std::pair<Eigen::VectorXd, Eigen::VectorXd> from_riemann(
        Eigen::Ref<const Eigen::VectorXd> w, Eigen::Ref<const Eigen::VectorXd> v) {
        return {0.5 * (w + v), 0.5 * (w - v)};
    }
};

/// Coefficients of the reduced system: the rightward state v has
/// self-coefficient lambda - alpha/2 and cross-coefficient -(lambda + alpha/2);
/// the leftward state w has self-coefficient lambda + alpha/2 and
/// cross-coefficient alpha/2 - lambda.
WaveReduction wave_to_hyp(const WavePlant& plant);

struct ActuatorState {
    double u1 = 0.0;
    double u2 = 0.0;
};

/// One trapezoid step of the actuator ODEs (same order as the field scheme).
/// Passing identical old/new right-hand-side data degenerates to a forward
/// Euler step.
ActuatorState actuator_ode_step(const ActuatorState& state, double dt, double v1_old,
                                double v1_new, double v2_old, double v2_new,
                                double ux_left_old, double ux_left_new, double ux_right_old,
                                double ux_right_new);

/// Spatial derivative by centered differences, second-order one-sided at the
/// interval ends.
Eigen::VectorXd spatial_derivative(const IntervalGrid& grid,
                                   Eigen::Ref<const Eigen::VectorXd> values);

}  // namespace bilat
