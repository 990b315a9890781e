#pragma once

// Closed-loop and open-loop time integration for the three plant classes,
// plus verification that the backstepping transformation maps simulated
// states onto the target dynamics.
//
// Schemes: Crank-Nicolson for reaction-diffusion (boundary values iterated
// to self-consistency with the gain quadratures); unit-CFL characteristic
// marching with Strang-split implicit-midpoint sources for the hyperbolic
// system (exact shift when all coefficients vanish); the wave plant marches
// its Riemann pair through the hyperbolic core and recovers displacement and
// actuators by trapezoid integration in time.

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bilat/gain.hpp"
#include "bilat/grid.hpp"
#include "bilat/hyperbolic.hpp"
#include "bilat/reaction_diffusion.hpp"
#include "bilat/wave.hpp"

namespace bilat {

enum class PlantClass { reaction_diffusion, hyperbolic, wave };

struct Trajectory {
    PlantClass plant_class;
    IntervalGrid grid;
    double dt;
    Eigen::VectorXd times;

    std::vector<std::string> field_names;   // rd: {u}; hyp: {u, v}; wave: {u, w, v}
    std::vector<Eigen::MatrixXd> fields;    // one row per step

    Eigen::VectorXd u1_history, u2_history;
    Eigen::MatrixXd l2_history, sup_history;  // (steps+1) x nfields

    Eigen::Index steps() const { return times.size() - 1; }
    /// Max over all fields of the sup norm at one step.
    double state_sup(Eigen::Index step) const { return sup_history.row(step).maxCoeff(); }
};

struct RdSimOptions {
    double dt = 1e-3;
    double T = 1.0;
    int max_boundary_passes = 60;
    double boundary_tol = 1e-11;  // relative to the state sup
};

/// Crank-Nicolson run; gains absent means open loop with homogeneous
/// Dirichlet ends. U1 actuates x = +L, U2 actuates x = -L.
Trajectory simulate_rd(const RdPlant& plant, const IntervalGrid& grid,
                       const std::optional<RdGains>& gains,
                       Eigen::Ref<const Eigen::VectorXd> initial, const RdSimOptions& opts);

struct HypSimOptions {
    double T = 1.0;
    /// Optional explicit step; must equal h/epsilon (unit CFL) when given.
    std::optional<double> dt;
};

/// Characteristic-marching run; gains absent means zero inflow.
/// U1 actuates u at x = -L, U2 actuates v at x = +L.
Trajectory simulate_hyp(const HypPlant& plant, const IntervalGrid& grid,
                        const std::optional<HypGains>& gains,
                        Eigen::Ref<const Eigen::VectorXd> u0,
                        Eigen::Ref<const Eigen::VectorXd> v0, const HypSimOptions& opts);

struct WaveSimOptions {
    double T = 1.0;
    std::optional<double> dt;
};

/// Wave run on the reduced Riemann pair. Gains are for the reduced
/// hyperbolic plant (wave_to_hyp); absent means frozen Dirichlet actuators
/// (reflective Riemann boundaries). U1 = u(t,-L), U2 = u(t,+L).
Trajectory simulate_wave(const WavePlant& plant, const IntervalGrid& grid,
                         const std::optional<HypGains>& gains,
                         Eigen::Ref<const Eigen::VectorXd> u0,
                         Eigen::Ref<const Eigen::VectorXd> ut0, const WaveSimOptions& opts);

/// Discrete wave energy 0.5 S (u_t^2 + u_x^2) dx per step.
Eigen::VectorXd wave_energy_history(const Trajectory& traj);

/// Adds smooth boundary collars to (u0, v0) so the endpoint values match the
/// closed-loop controls at t = 0. Unprepared data starts with a Dirichlet
/// jump that the exact-shift transport carries undamped, and the gain
/// quadrature across that jump costs O(h); compatible data keeps the whole
/// run at the O(h^2) quadrature floor.
std::pair<Eigen::VectorXd, Eigen::VectorXd> hyp_compatible_initial(
    const HypGains& gains, const IntervalGrid& grid, Eigen::Ref<const Eigen::VectorXd> u_raw,
    Eigen::Ref<const Eigen::VectorXd> v_raw, double collar_width = 0.1);

/// Same preparation for the wave plant: adjusts the initial velocity (the
/// displacement is kept) so the Riemann inflow traces match the controls at
/// t = 0. `gains` belong to the reduced hyperbolic plant.
Eigen::VectorXd wave_compatible_velocity(const HypGains& gains, const IntervalGrid& grid,
                                         Eigen::Ref<const Eigen::VectorXd> u0,
                                         Eigen::Ref<const Eigen::VectorXd> ut_raw,
                                         double collar_width = 0.1);

struct TargetCheck {
    Eigen::VectorXd times;
    std::vector<std::string> field_names;      // {w} or {alpha, beta}
    std::vector<Eigen::MatrixXd> transformed;  // one row per step
    Eigen::MatrixXd l2, sup;                   // per transformed field
    Eigen::MatrixXd boundary_trace;            // (steps+1) x 2, the traces the gains annul
    Eigen::VectorXd state_sup;                 // sup of the original state per step

    /// max over steps of boundary trace / state sup.
    double max_trace_ratio() const;
    /// Least-squares decay rate of log l2(field) over [t0, t1].
    double fitted_decay_rate(double t0, double t1, Eigen::Index field = 0) const;
    /// Max over transformed fields and times >= t_from.
    double sup_after(double t_from) const;

    /// Max abs FD residual of the transformed states against the target
    /// dynamics (w_t = eps w_xx, or the decoupled transport pair), over
    /// interior nodes and steps past a 5% startup window (initial Dirichlet
    /// jumps make finite differences meaningless at the very first steps).
    double target_residual = std::numeric_limits<double>::quiet_NaN();
};

TargetCheck target_check(const Trajectory& traj, const RdKernel& kernel, double epsilon);
/// With the plant supplied, also evaluates the transport-pair residuals
/// alpha_t + eps alpha_x - c1 alpha and beta_t - eps beta_x - c4 beta.
TargetCheck target_check(const Trajectory& traj, const HypKernel& kernel,
                         const std::optional<HypPlant>& plant = std::nullopt);

/// Oriented transformation quadrature: state minus the signed hourglass-row
/// integral, at one node row.
double oriented_transform_value(const HourglassField& kernel, const IntervalGrid& grid,
                                Eigen::Ref<const Eigen::VectorXd> state, Eigen::Index k);

/// Least-squares exponential rate of `values` over the window: values(t)
/// behaving like e^{-rate t} gives a positive result.
double fit_decay_rate(const Eigen::VectorXd& times, const Eigen::VectorXd& values, double t0,
                      double t1);

}  // namespace bilat
