#include "bilat/simulate.hpp"

#include <cmath>

#include "bilat/tridiag.hpp"

namespace bilat {

namespace {

void check_finite(const Eigen::VectorXd& v, long step, const char* what) {
    if (!v.allFinite() || v.cwiseAbs().maxCoeff() > 1e100) {
        throw DivergenceError(std::string(what) + ": state diverged", step);
    }
}

double l2_norm(const IntervalGrid& grid, const Eigen::VectorXd& v) {
    return std::sqrt(grid.trapezoid_weights().dot(v.cwiseProduct(v)));
}

struct Pair2x2 {
    double a11, a12, a21, a22, b1, b2;
    std::pair<double, double> solve() const {
        const double det = a11 * a22 - a12 * a21;
        return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det};
    }
};

// Boundary values solved against the state they will be part of: the gain
// quadratures include the unknown endpoint values with their trapezoid
// weights, which gives a 2x2 linear system.
std::pair<double, double> rd_boundary_values(const RdGains& gains, const IntervalGrid& grid,
                                             const Eigen::VectorXd& state) {
    Eigen::VectorXd interior = state;
    interior[0] = 0.0;
    interior[interior.size() - 1] = 0.0;
    const double base_r = gains.right.apply(interior);
    const double base_l = gains.left.apply(interior);
    const double w0 = grid.trapezoid_weights()[0];
    const double wn = grid.trapezoid_weights()[grid.size() - 1];
    // u(+L) = U1, u(-L) = U2
    Pair2x2 sys{1.0 - wn * gains.right.sample(grid.size() - 1), -w0 * gains.right.sample(0),
                -wn * gains.left.sample(grid.size() - 1), 1.0 - w0 * gains.left.sample(0),
                base_r, base_l};
    return sys.solve();
}

// Endpoint affine data: after the shift, the outflow components at the
// boundary nodes obey v(x0) = a0 + b0 U1 and u(xn) = a1 + b1 U2 (scalar
// implicit-midpoint source against the final inflow values).
struct EndpointAffine {
    double a0, b0, a1, b1;
};

std::pair<double, double> hyp_boundary_values(const HypGains& gains, const IntervalGrid& grid,
                                              const Eigen::VectorXd& u,
                                              const Eigen::VectorXd& v,
                                              const EndpointAffine& end) {
    const Eigen::Index n = grid.size();
    Eigen::VectorXd ubar = u;
    ubar[0] = 0.0;      // u(-L) = U1 unknown
    ubar[n - 1] = 0.0;  // u(+L) = a1 + b1 U2
    Eigen::VectorXd vbar = v;
    vbar[0] = 0.0;      // v(-L) = a0 + b0 U1
    vbar[n - 1] = 0.0;  // v(+L) = U2 unknown
    const double s1 = gains.u1_u.apply(ubar) + gains.u1_v.apply(vbar);
    const double s2 = gains.u2_u.apply(ubar) + gains.u2_v.apply(vbar);
    const double w0 = grid.trapezoid_weights()[0];
    const double wn = grid.trapezoid_weights()[n - 1];
    const double g1u0 = gains.u1_u.sample(0), g1v0 = gains.u1_v.sample(0);
    const double g1un = gains.u1_u.sample(n - 1), g1vn = gains.u1_v.sample(n - 1);
    const double g2u0 = gains.u2_u.sample(0), g2v0 = gains.u2_v.sample(0);
    const double g2un = gains.u2_u.sample(n - 1), g2vn = gains.u2_v.sample(n - 1);
    Pair2x2 sys{1.0 - w0 * (g1u0 + g1v0 * end.b0), -wn * (g1un * end.b1 + g1vn),
                -w0 * (g2u0 + g2v0 * end.b0), 1.0 - wn * (g2un * end.b1 + g2vn),
                s1 + w0 * g1v0 * end.a0 + wn * g1un * end.a1,
                s2 + w0 * g2v0 * end.a0 + wn * g2un * end.a1};
    return sys.solve();
}

// --- hyperbolic characteristic core ---------------------------------------

enum class HypBoundaryMode { closed_loop, zero_inflow, reflective };

struct HypStepper {
    HypStepper(const HypPlant& plant, const IntervalGrid& grid)
        : grid_(grid), dt_(grid.spacing() / plant.epsilon) {
        const Eigen::Index n = grid.size();
        m00_.resize(n);
        m01_.resize(n);
        m10_.resize(n);
        m11_.resize(n);
        // implicit midpoint over dt/2 of w' = C(x) w, per node
        const double q = 0.25 * dt_;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = grid.node(i);
            const double c1 = plant.c1(x), c2 = plant.c2(x);
            const double c3 = plant.c3(x), c4 = plant.c4(x);
            // (I - q C)^{-1} (I + q C)
            const double ia = 1.0 - q * c1, ib = -q * c2, ic = -q * c3, id = 1.0 - q * c4;
            const double det = ia * id - ib * ic;
            const double pa = 1.0 + q * c1, pb = q * c2, pc = q * c3, pd = 1.0 + q * c4;
            m00_[i] = (id * pa - ib * pc) / det;
            m01_[i] = (id * pb - ib * pd) / det;
            m10_[i] = (-ic * pa + ia * pc) / det;
            m11_[i] = (-ic * pb + ia * pd) / det;
        }
        c1_right_ = plant.c1(grid.node(n - 1));
        c2_right_ = plant.c2(grid.node(n - 1));
        c3_left_ = plant.c3(grid.node(0));
        c4_left_ = plant.c4(grid.node(0));
    }

    double dt() const { return dt_; }

    void half_source(Eigen::VectorXd& u, Eigen::VectorXd& v, Eigen::Index lo,
                     Eigen::Index hi) const {
        for (Eigen::Index i = lo; i <= hi; ++i) {
            const double uu = m00_[i] * u[i] + m01_[i] * v[i];
            const double vv = m10_[i] * u[i] + m11_[i] * v[i];
            u[i] = uu;
            v[i] = vv;
        }
    }

    static void shift(Eigen::VectorXd& u, Eigen::VectorXd& v) {
        const Eigen::Index n = u.size();
        for (Eigen::Index i = n - 1; i >= 1; --i) u[i] = u[i - 1];
        for (Eigen::Index i = 0; i < n - 1; ++i) v[i] = v[i + 1];
    }

    // Post-shift outflow values at the boundary nodes: scalar implicit
    // midpoint over dt/2 with the other component held at the (still
    // unknown) inflow value, so v(x0) = a0 + b0 U1 and u(xn) = a1 + b1 U2.
    EndpointAffine endpoint_affine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        const Eigen::Index n = u.size();
        const double q = 0.25 * dt_;
        EndpointAffine e;
        e.a0 = v[0] * (1.0 + q * c4_left_) / (1.0 - q * c4_left_);
        e.b0 = 0.5 * dt_ * c3_left_ / (1.0 - q * c4_left_);
        e.a1 = u[n - 1] * (1.0 + q * c1_right_) / (1.0 - q * c1_right_);
        e.b1 = 0.5 * dt_ * c2_right_ / (1.0 - q * c1_right_);
        return e;
    }

    void step(Eigen::VectorXd& u, Eigen::VectorXd& v, HypBoundaryMode mode,
              const std::optional<HypGains>& gains) const {
        const Eigen::Index n = u.size();
        half_source(u, v, 0, n - 1);
        shift(u, v);
        half_source(u, v, 1, n - 2);
        const EndpointAffine e = endpoint_affine(u, v);
        double b1 = 0.0, b2 = 0.0;
        switch (mode) {
            case HypBoundaryMode::closed_loop:
                std::tie(b1, b2) = hyp_boundary_values(*gains, grid_, u, v, e);
                break;
            case HypBoundaryMode::zero_inflow:
                break;
            case HypBoundaryMode::reflective:
                // u_t = 0 at each end: inflow equals the local outflow
                b1 = e.a0 / (1.0 - e.b0);
                b2 = e.a1 / (1.0 - e.b1);
                break;
        }
        u[0] = b1;
        v[0] = e.a0 + e.b0 * b1;
        u[n - 1] = e.a1 + e.b1 * b2;
        v[n - 1] = b2;
    }

    /// Boundary values consistent with an unstepped state (used at t = 0,
    /// where the endpoint components are plain state values).
    void initial_boundary(Eigen::VectorXd& u, Eigen::VectorXd& v, HypBoundaryMode mode,
                          const std::optional<HypGains>& gains) const {
        const Eigen::Index n = u.size();
        switch (mode) {
            case HypBoundaryMode::closed_loop: {
                EndpointAffine e{v[0], 0.0, u[n - 1], 0.0};
                auto [b1, b2] = hyp_boundary_values(*gains, grid_, u, v, e);
                u[0] = b1;
                v[n - 1] = b2;
                break;
            }
            case HypBoundaryMode::zero_inflow:
                u[0] = 0.0;
                v[n - 1] = 0.0;
                break;
            case HypBoundaryMode::reflective:
                u[0] = v[0];
                v[n - 1] = u[n - 1];
                break;
        }
    }

    const IntervalGrid& grid_;
    double dt_;
    Eigen::VectorXd m00_, m01_, m10_, m11_;
    double c1_right_ = 0.0, c2_right_ = 0.0, c3_left_ = 0.0, c4_left_ = 0.0;
};

long resolve_steps(double T, double dt, const char* what) {
    if (!(T > 0.0)) throw ConfigError(std::string(what) + ": horizon must be positive");
    const long steps = std::lround(T / dt);
    if (steps < 1) throw ConfigError(std::string(what) + ": horizon shorter than one step");
    return steps;
}

}  // namespace

Trajectory simulate_rd(const RdPlant& plant, const IntervalGrid& grid,
                       const std::optional<RdGains>& gains,
                       Eigen::Ref<const Eigen::VectorXd> initial, const RdSimOptions& opts) {
    if (!(opts.dt > 0.0)) throw ConfigError("simulate_rd: dt must be positive");
    if (initial.size() != grid.size()) throw ConfigError("simulate_rd: initial profile size");
    const long steps = resolve_steps(opts.T, opts.dt, "simulate_rd");
    const Eigen::Index n = grid.size();
    const double h = grid.spacing();
    const double r = 0.5 * opts.dt;
    const double mu = plant.epsilon / (h * h);

    std::optional<RdGains> local;
    const RdGains* g = nullptr;
    if (gains) {
        local = RdGains{gains->right.grid().same_layout(grid) ? gains->right
                                                              : gains->right.resampled(grid),
                        gains->left.grid().same_layout(grid) ? gains->left
                                                             : gains->left.resampled(grid)};
        g = &*local;
    }

    Eigen::VectorXd lam = plant.lambda.sample(grid);

    // interior Crank-Nicolson operator, constant over the run
    const Eigen::Index ni = n - 2;
    Eigen::VectorXd diag(ni), lower(ni - 1), upper(ni - 1);
    for (Eigen::Index i = 0; i < ni; ++i) {
        diag[i] = 1.0 + r * (2.0 * mu - lam[i + 1]);
        if (i + 1 < ni) {
            lower[i] = -r * mu;
            upper[i] = -r * mu;
        }
    }
    TridiagonalSolver solver(lower, diag, upper);

    Trajectory traj{PlantClass::reaction_diffusion,
                    grid,
                    opts.dt,
                    Eigen::VectorXd(steps + 1),
                    {"u"},
                    {Eigen::MatrixXd(steps + 1, n)},
                    Eigen::VectorXd(steps + 1),
                    Eigen::VectorXd(steps + 1),
                    Eigen::MatrixXd(steps + 1, 1),
                    Eigen::MatrixXd(steps + 1, 1)};

    Eigen::VectorXd u = initial;
    // actuators act from t = 0 on; initial endpoint values jump accordingly
    double b1 = 0.0, b2 = 0.0;
    if (g) std::tie(b1, b2) = rd_boundary_values(*g, grid, u);
    u[n - 1] = b1;
    u[0] = b2;

    auto record = [&](long k, double t) {
        traj.times[k] = t;
        traj.fields[0].row(k) = u;
        traj.u1_history[k] = u[n - 1];
        traj.u2_history[k] = u[0];
        traj.l2_history(k, 0) = l2_norm(grid, u);
        traj.sup_history(k, 0) = u.cwiseAbs().maxCoeff();
    };
    record(0, 0.0);

    Eigen::VectorXd rhs_base(ni), rhs(ni), interior(ni);
    for (long k = 1; k <= steps; ++k) {
        for (Eigen::Index i = 0; i < ni; ++i) {
            const Eigen::Index j = i + 1;
            // the stencil terms already carry the old boundary values
            rhs_base[i] = u[j] + r * (mu * (u[j + 1] - 2.0 * u[j] + u[j - 1]) + lam[j] * u[j]);
        }

        double nb1 = 0.0, nb2 = 0.0;
        if (!g) {
            rhs = rhs_base;
            interior = solver.solve(rhs);
        } else {
            nb1 = b1;
            nb2 = b2;
            const double scale = std::max(traj.sup_history(k - 1, 0), 1e-12);
            bool converged = false;
            for (int pass = 0; pass < opts.max_boundary_passes; ++pass) {
                rhs = rhs_base;
                rhs[0] += r * mu * nb2;
                rhs[ni - 1] += r * mu * nb1;
                interior = solver.solve(rhs);
                Eigen::VectorXd candidate(n);
                candidate[0] = nb2;
                candidate.segment(1, ni) = interior;
                candidate[n - 1] = nb1;
                auto [c1, c2] = rd_boundary_values(*g, grid, candidate);
                const double change = std::max(std::abs(c1 - nb1), std::abs(c2 - nb2));
                nb1 = c1;
                nb2 = c2;
                if (change <= opts.boundary_tol * scale) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                throw ConvergenceError("simulate_rd: boundary fixed point stalled",
                                       opts.boundary_tol);
            }
        }
        u[0] = nb2;
        u.segment(1, ni) = interior;
        u[n - 1] = nb1;
        b1 = nb1;
        b2 = nb2;
        check_finite(u, k, "simulate_rd");
        record(k, opts.dt * static_cast<double>(k));
    }
    return traj;
}

Trajectory simulate_hyp(const HypPlant& plant, const IntervalGrid& grid,
                        const std::optional<HypGains>& gains,
                        Eigen::Ref<const Eigen::VectorXd> u0,
                        Eigen::Ref<const Eigen::VectorXd> v0, const HypSimOptions& opts) {
    if (u0.size() != grid.size() || v0.size() != grid.size()) {
        throw ConfigError("simulate_hyp: initial profile size");
    }
    HypStepper stepper(plant, grid);
    if (opts.dt && std::abs(*opts.dt - stepper.dt()) > 1e-12 * stepper.dt()) {
        throw ConfigError("simulate_hyp: dt must equal h/epsilon (unit CFL)");
    }
    const long steps = resolve_steps(opts.T, stepper.dt(), "simulate_hyp");
    const Eigen::Index n = grid.size();
    const HypBoundaryMode mode =
        gains ? HypBoundaryMode::closed_loop : HypBoundaryMode::zero_inflow;

    std::optional<HypGains> local;
    if (gains && !gains->u1_u.grid().same_layout(grid)) {
        local = HypGains{gains->u1_u.resampled(grid), gains->u1_v.resampled(grid),
                         gains->u2_u.resampled(grid), gains->u2_v.resampled(grid)};
    } else if (gains) {
        local = gains;
    }

    Trajectory traj{PlantClass::hyperbolic,
                    grid,
                    stepper.dt(),
                    Eigen::VectorXd(steps + 1),
                    {"u", "v"},
                    {Eigen::MatrixXd(steps + 1, n), Eigen::MatrixXd(steps + 1, n)},
                    Eigen::VectorXd(steps + 1),
                    Eigen::VectorXd(steps + 1),
                    Eigen::MatrixXd(steps + 1, 2),
                    Eigen::MatrixXd(steps + 1, 2)};

    Eigen::VectorXd u = u0, v = v0;
    stepper.initial_boundary(u, v, mode, local);

    auto record = [&](long k, double t) {
        traj.times[k] = t;
        traj.fields[0].row(k) = u;
        traj.fields[1].row(k) = v;
        traj.u1_history[k] = u[0];
        traj.u2_history[k] = v[n - 1];
        traj.l2_history(k, 0) = l2_norm(grid, u);
        traj.l2_history(k, 1) = l2_norm(grid, v);
        traj.sup_history(k, 0) = u.cwiseAbs().maxCoeff();
        traj.sup_history(k, 1) = v.cwiseAbs().maxCoeff();
    };
    record(0, 0.0);

    for (long k = 1; k <= steps; ++k) {
        stepper.step(u, v, mode, local);
        check_finite(u, k, "simulate_hyp");
        check_finite(v, k, "simulate_hyp");
        record(k, stepper.dt() * static_cast<double>(k));
    }
    return traj;
}

Trajectory simulate_wave(const WavePlant& plant, const IntervalGrid& grid,
                         const std::optional<HypGains>& gains,
                         Eigen::Ref<const Eigen::VectorXd> u0,
                         Eigen::Ref<const Eigen::VectorXd> ut0, const WaveSimOptions& opts) {
    if (u0.size() != grid.size() || ut0.size() != grid.size()) {
        throw ConfigError("simulate_wave: initial profile size");
    }
    const WaveReduction reduction = wave_to_hyp(plant);
    HypStepper stepper(reduction.hyp, grid);
    if (opts.dt && std::abs(*opts.dt - stepper.dt()) > 1e-12 * stepper.dt()) {
        throw ConfigError("simulate_wave: dt must equal the grid spacing (unit CFL)");
    }
    const long steps = resolve_steps(opts.T, stepper.dt(), "simulate_wave");
    const Eigen::Index n = grid.size();
    const double dt = stepper.dt();
    const HypBoundaryMode mode =
        gains ? HypBoundaryMode::closed_loop : HypBoundaryMode::reflective;

    std::optional<HypGains> local;
    if (gains && !gains->u1_u.grid().same_layout(grid)) {
        local = HypGains{gains->u1_u.resampled(grid), gains->u1_v.resampled(grid),
                         gains->u2_u.resampled(grid), gains->u2_v.resampled(grid)};
    } else if (gains) {
        local = gains;
    }

    Trajectory traj{PlantClass::wave,
                    grid,
                    dt,
                    Eigen::VectorXd(steps + 1),
                    {"u", "w", "v"},
                    {Eigen::MatrixXd(steps + 1, n), Eigen::MatrixXd(steps + 1, n),
                     Eigen::MatrixXd(steps + 1, n)},
                    Eigen::VectorXd(steps + 1),
                    Eigen::VectorXd(steps + 1),
                    Eigen::MatrixXd(steps + 1, 3),
                    Eigen::MatrixXd(steps + 1, 3)};

    // Riemann pair: rightward slot carries v = u_x - u_t, leftward carries
    // w = u_x + u_t.
    Eigen::VectorXd ux = spatial_derivative(grid, u0);
    Eigen::VectorXd rfield = ux - ut0;  // v, actuated at -L
    Eigen::VectorXd lfield = ux + ut0;  // w, actuated at +L
    Eigen::VectorXd u = u0;
    ActuatorState act{u0[0], u0[n - 1]};
    stepper.initial_boundary(rfield, lfield, mode, local);

    auto record = [&](long k, double t) {
        traj.times[k] = t;
        traj.fields[0].row(k) = u;
        traj.fields[1].row(k) = lfield;
        traj.fields[2].row(k) = rfield;
        traj.u1_history[k] = u[0];
        traj.u2_history[k] = u[n - 1];
        for (int f = 0; f < 3; ++f) {
            const Eigen::VectorXd row = traj.fields[f].row(k);
            traj.l2_history(k, f) = l2_norm(grid, row);
            traj.sup_history(k, f) = row.cwiseAbs().maxCoeff();
        }
    };
    record(0, 0.0);

    for (long k = 1; k <= steps; ++k) {
        const double v1_old = rfield[0], v2_old = lfield[n - 1];
        const double ux_l_old = 0.5 * (rfield[0] + lfield[0]);
        const double ux_r_old = 0.5 * (rfield[n - 1] + lfield[n - 1]);
        Eigen::VectorXd ut_old = 0.5 * (lfield - rfield);

        stepper.step(rfield, lfield, mode, local);

        const double v1_new = rfield[0], v2_new = lfield[n - 1];
        const double ux_l_new = 0.5 * (rfield[0] + lfield[0]);
        const double ux_r_new = 0.5 * (rfield[n - 1] + lfield[n - 1]);
        Eigen::VectorXd ut_new = 0.5 * (lfield - rfield);

        u += 0.5 * dt * (ut_old + ut_new);
        act = actuator_ode_step(act, dt, v1_old, v1_new, v2_old, v2_new, ux_l_old, ux_l_new,
                                ux_r_old, ux_r_new);
        u[0] = act.u1;
        u[n - 1] = act.u2;

        check_finite(u, k, "simulate_wave");
        check_finite(rfield, k, "simulate_wave");
        check_finite(lfield, k, "simulate_wave");
        record(k, dt * static_cast<double>(k));
    }
    return traj;
}

namespace {

Eigen::VectorXd boundary_collar(const IntervalGrid& grid, BoundaryEnd end, double width) {
    Eigen::VectorXd c(grid.size());
    const double x0 = end == BoundaryEnd::left ? -grid.half_length() : grid.half_length();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double s = (grid.node(i) - x0) / width;
        c[i] = std::exp(-s * s);
    }
    return c;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> hyp_compatible_initial(
    const HypGains& gains, const IntervalGrid& grid, Eigen::Ref<const Eigen::VectorXd> u_raw,
    Eigen::Ref<const Eigen::VectorXd> v_raw, double collar_width) {
    const Eigen::Index n = grid.size();
    const Eigen::VectorXd cl = boundary_collar(grid, BoundaryEnd::left, collar_width);
    const Eigen::VectorXd cr = boundary_collar(grid, BoundaryEnd::right, collar_width);
    // u0 = u_raw + a cl, v0 = v_raw + b cr with u0(-L) = U1(0), v0(+L) = U2(0)
    const double g1 = gains.u1_u.apply(u_raw) + gains.u1_v.apply(v_raw);
    const double g2 = gains.u2_u.apply(u_raw) + gains.u2_v.apply(v_raw);
    const double a11 = gains.u1_u.apply(cl), a12 = gains.u1_v.apply(cr);
    const double a21 = gains.u2_u.apply(cl), a22 = gains.u2_v.apply(cr);
    Pair2x2 sys{cl[0] - a11, -a12, -a21, cr[n - 1] - a22, g1 - u_raw[0], g2 - v_raw[n - 1]};
    auto [a, b] = sys.solve();
    return {u_raw + a * cl, v_raw + b * cr};
}

Eigen::VectorXd wave_compatible_velocity(const HypGains& gains, const IntervalGrid& grid,
                                         Eigen::Ref<const Eigen::VectorXd> u0,
                                         Eigen::Ref<const Eigen::VectorXd> ut_raw,
                                         double collar_width) {
    const Eigen::Index n = grid.size();
    const Eigen::VectorXd ux = spatial_derivative(grid, u0);
    const Eigen::VectorXd cl = boundary_collar(grid, BoundaryEnd::left, collar_width);
    const Eigen::VectorXd cr = boundary_collar(grid, BoundaryEnd::right, collar_width);
    // ut = ut_raw + p cl + q cr shifts the Riemann pair by
    // v -> v - p cl - q cr (rightward), w -> w + p cl + q cr (leftward)
    const Eigen::VectorXd vf = ux - ut_raw;
    const Eigen::VectorXd wf = ux + ut_raw;
    const double g1 = gains.u1_u.apply(vf) + gains.u1_v.apply(wf);
    const double g2 = gains.u2_u.apply(vf) + gains.u2_v.apply(wf);
    const double d1l = -gains.u1_u.apply(cl) + gains.u1_v.apply(cl);
    const double d1r = -gains.u1_u.apply(cr) + gains.u1_v.apply(cr);
    const double d2l = -gains.u2_u.apply(cl) + gains.u2_v.apply(cl);
    const double d2r = -gains.u2_u.apply(cr) + gains.u2_v.apply(cr);
    // conditions: v(-L) = U1(0) and w(+L) = U2(0)
    //   vf(-L) - p cl(0) - q cr(0) = g1 + p d1l + q d1r
    //   wf(+L) + p cl(n-1) + q cr(n-1) = g2 + p d2l + q d2r
    Pair2x2 sys{cl[0] + d1l, cr[0] + d1r, cl[n - 1] - d2l, cr[n - 1] - d2r, vf[0] - g1,
                g2 - wf[n - 1]};
    auto [p, q] = sys.solve();
    return ut_raw + p * cl + q * cr;
}

Eigen::VectorXd wave_energy_history(const Trajectory& traj) {
    if (traj.plant_class != PlantClass::wave) {
        throw ConfigError("wave_energy_history: not a wave trajectory");
    }
    const Eigen::Index steps = traj.steps();
    Eigen::VectorXd energy(steps + 1);
    for (Eigen::Index k = 0; k <= steps; ++k) {
        const Eigen::VectorXd w = traj.fields[1].row(k);
        const Eigen::VectorXd v = traj.fields[2].row(k);
        const Eigen::VectorXd ut = 0.5 * (w - v);
        const Eigen::VectorXd ux = 0.5 * (w + v);
        energy[k] = 0.5 * traj.grid.trapezoid_weights().dot(
                              (ut.cwiseProduct(ut) + ux.cwiseProduct(ux)).eval());
    }
    return energy;
}

double oriented_transform_value(const HourglassField& kernel, const IntervalGrid& grid,
                                Eigen::Ref<const Eigen::VectorXd> state, Eigen::Index k) {
    const Eigen::Index m = grid.mid();
    const Eigen::Index lo = std::min(k, 2 * m - k);
    const Eigen::Index hi = std::max(k, 2 * m - k);
    if (lo == hi) return 0.0;
    const double h = grid.spacing();
    double acc = 0.5 * (kernel.values(k, lo) * state[lo] + kernel.values(k, hi) * state[hi]);
    for (Eigen::Index j = lo + 1; j < hi; ++j) acc += kernel.values(k, j) * state[j];
    acc *= h;
    return k >= m ? acc : -acc;
}

namespace {

TargetCheck make_target_check(const Trajectory& traj, Eigen::Index nfields) {
    TargetCheck tc;
    tc.times = traj.times;
    const Eigen::Index steps = traj.steps();
    tc.transformed.assign(nfields, Eigen::MatrixXd(steps + 1, traj.grid.size()));
    tc.l2.resize(steps + 1, nfields);
    tc.sup.resize(steps + 1, nfields);
    tc.boundary_trace.resize(steps + 1, 2);
    tc.state_sup.resize(steps + 1);
    return tc;
}

}  // namespace

TargetCheck target_check(const Trajectory& traj, const RdKernel& kernel, double epsilon) {
    if (traj.plant_class != PlantClass::reaction_diffusion) {
        throw ConfigError("target_check: kernel/trajectory class mismatch");
    }
    const HourglassGrid target_grid{traj.grid};
    const HourglassField field = resample(kernel.field, target_grid);
    const Eigen::Index n = traj.grid.size();
    const Eigen::Index steps = traj.steps();

    TargetCheck tc = make_target_check(traj, 1);
    tc.field_names = {"w"};
    for (Eigen::Index k = 0; k <= steps; ++k) {
        const Eigen::VectorXd u = traj.fields[0].row(k);
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            w[i] = u[i] - oriented_transform_value(field, traj.grid, u, i);
        }
        tc.transformed[0].row(k) = w;
        tc.l2(k, 0) = l2_norm(traj.grid, w);
        tc.sup(k, 0) = w.cwiseAbs().maxCoeff();
        tc.boundary_trace(k, 0) = std::abs(w[0]);
        tc.boundary_trace(k, 1) = std::abs(w[n - 1]);
        tc.state_sup[k] = traj.state_sup(k);
    }

    // centered-difference residual of w_t = eps w_xx, past the startup layer
    const double h = traj.grid.spacing();
    const Eigen::Index k_start = std::max<Eigen::Index>(1, steps / 20);
    double resid = 0.0;
    const Eigen::MatrixXd& w = tc.transformed[0];
    for (Eigen::Index k = k_start; k < steps; ++k) {
        for (Eigen::Index i = 1; i < n - 1; ++i) {
            const double wt = (w(k + 1, i) - w(k - 1, i)) / (2.0 * traj.dt);
            const double wxx = (w(k, i + 1) - 2.0 * w(k, i) + w(k, i - 1)) / (h * h);
            resid = std::max(resid, std::abs(wt - epsilon * wxx));
        }
    }
    tc.target_residual = resid;
    return tc;
}

TargetCheck target_check(const Trajectory& traj, const HypKernel& kernel,
                         const std::optional<HypPlant>& plant) {
    if (traj.plant_class != PlantClass::hyperbolic && traj.plant_class != PlantClass::wave) {
        throw ConfigError("target_check: kernel/trajectory class mismatch");
    }
    const HourglassGrid target_grid{traj.grid};
    const HourglassField uu = resample(kernel.uu, target_grid);
    const HourglassField uv = resample(kernel.uv, target_grid);
    const HourglassField vu = resample(kernel.vu, target_grid);
    const HourglassField vv = resample(kernel.vv, target_grid);
    const Eigen::Index n = traj.grid.size();
    const Eigen::Index steps = traj.steps();

    // wave trajectories store {u, w, v}: the hyperbolic u-slot is the
    // rightward Riemann field v, the v-slot is w.
    const Eigen::MatrixXd& ufield =
        traj.plant_class == PlantClass::wave ? traj.fields[2] : traj.fields[0];
    const Eigen::MatrixXd& vfield =
        traj.plant_class == PlantClass::wave ? traj.fields[1] : traj.fields[1];

    TargetCheck tc = make_target_check(traj, 2);
    tc.field_names = {"alpha", "beta"};
    for (Eigen::Index k = 0; k <= steps; ++k) {
        const Eigen::VectorXd u = ufield.row(k);
        const Eigen::VectorXd v = vfield.row(k);
        Eigen::VectorXd alpha(n), beta(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            alpha[i] = u[i] - oriented_transform_value(uu, traj.grid, u, i) -
                       oriented_transform_value(uv, traj.grid, v, i);
            beta[i] = v[i] - oriented_transform_value(vu, traj.grid, u, i) -
                      oriented_transform_value(vv, traj.grid, v, i);
        }
        tc.transformed[0].row(k) = alpha;
        tc.transformed[1].row(k) = beta;
        tc.l2(k, 0) = l2_norm(traj.grid, alpha);
        tc.l2(k, 1) = l2_norm(traj.grid, beta);
        tc.sup(k, 0) = alpha.cwiseAbs().maxCoeff();
        tc.sup(k, 1) = beta.cwiseAbs().maxCoeff();
        tc.boundary_trace(k, 0) = std::abs(alpha[0]);      // alpha(t, -L)
        tc.boundary_trace(k, 1) = std::abs(beta[n - 1]);   // beta(t, +L)
        const double su = u.cwiseAbs().maxCoeff();
        const double sv = v.cwiseAbs().maxCoeff();
        tc.state_sup[k] = std::max(su, sv);
    }

    if (plant) {
        const double h = traj.grid.spacing();
        const Eigen::MatrixXd& alpha = tc.transformed[0];
        const Eigen::MatrixXd& beta = tc.transformed[1];
        const Eigen::Index k_start = std::max<Eigen::Index>(1, steps / 20);
        double resid = 0.0;
        for (Eigen::Index k = k_start; k < steps; ++k) {
            for (Eigen::Index i = 1; i < n - 1; ++i) {
                const double x = traj.grid.node(i);
                const double at = (alpha(k + 1, i) - alpha(k - 1, i)) / (2.0 * traj.dt);
                const double ax = (alpha(k, i + 1) - alpha(k, i - 1)) / (2.0 * h);
                const double bt = (beta(k + 1, i) - beta(k - 1, i)) / (2.0 * traj.dt);
                const double bx = (beta(k, i + 1) - beta(k, i - 1)) / (2.0 * h);
                resid = std::max(resid, std::abs(at + plant->epsilon * ax -
                                                 plant->c1(x) * alpha(k, i)));
                resid = std::max(resid, std::abs(bt - plant->epsilon * bx -
                                                 plant->c4(x) * beta(k, i)));
            }
        }
        tc.target_residual = resid;
    }
    return tc;
}

double TargetCheck::max_trace_ratio() const {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double trace = std::max(boundary_trace(k, 0), boundary_trace(k, 1));
        if (state_sup[k] <= 0.0) {
            if (trace > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        worst = std::max(worst, trace / state_sup[k]);
    }
    return worst;
}

double TargetCheck::fitted_decay_rate(double t0, double t1, Eigen::Index field) const {
    Eigen::VectorXd norms = l2.col(field);
    return fit_decay_rate(times, norms, t0, t1);
}

double TargetCheck::sup_after(double t_from) const {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (times[k] < t_from) continue;
        worst = std::max(worst, sup.row(k).maxCoeff());
    }
    return worst;
}

double fit_decay_rate(const Eigen::VectorXd& times, const Eigen::VectorXd& values, double t0,
                      double t1) {
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    long count = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (times[k] < t0 || times[k] > t1) continue;
        if (!(values[k] > 0.0)) continue;
        const double y = std::log(values[k]);
        st += times[k];
        sy += y;
        stt += times[k] * times[k];
        sty += times[k] * y;
        ++count;
    }
    if (count < 2) throw NumericError("fit_decay_rate: not enough samples in window");
    const double denom = count * stt - st * st;
    const double slope = (count * sty - st * sy) / denom;
    return -slope;
}

}  // namespace bilat
