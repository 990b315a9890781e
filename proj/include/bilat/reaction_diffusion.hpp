#pragma once

// Backstepping kernels and boundary gains for the reaction-diffusion plant
//   u_t = eps u_xx + lambda(x) u,   u(t, L) = U1,   u(t, -L) = U2,
// via the bilateral transformation w(x) = u(x) - S_{-x}^{x} K(x,xi) u(xi) dxi
// (the integral is oriented: for x < 0 it equals minus the increasing-limit
// integral). Constant lambda admits the closed Bessel form; general lambda
// goes through the Goursat problem in characteristic coordinates.

#include <Eigen/Dense>

#include "bilat/gain.hpp"
#include "bilat/grid.hpp"
#include "bilat/kernel_field.hpp"

namespace bilat {

struct RdPlant {
    double epsilon;
    CoefficientProfile lambda;
    double half_length;
};

struct RdKernel {
    HourglassField field;
    KernelProvenance provenance;
    int iterations = 0;  // Picard sweeps of the deepest Goursat solve
};

struct RdGains {
    GainFunction right;  // feeds U1 = S g_right u
    GainFunction left;   // feeds U2 = S g_left u  (g_left = -K(-L, .))
};

/// Closed-form kernel for constant lambda >= 0:
///   K(x,xi) = -(lambda/(2 eps)) (x+xi) * I1(s)/s,  s = sqrt(lambda/eps (x^2-xi^2)).
/// The ratio form makes the diagonal limit -lambda x/(2 eps) and the
/// antidiagonal zero exact. Throws std::domain_error for lambda < 0.
RdKernel rd_kernel_explicit(const RdPlant& plant, const HourglassGrid& grid);

/// Pointwise evaluation of the same closed form.
double rd_kernel_explicit_value(const RdPlant& plant, double x, double xi);

struct GoursatOptions {
    double tol = 1e-10;
    int max_iter = 200;
    /// Number of lattice refinements entering the Richardson combination
    /// (1 = plain trapezoid solve at the grid spacing).
    int richardson_levels = 3;
};

/// Successive-approximation solve of the kernel Goursat problem on T1 with
/// point-reflection extension to T2 (odd rule, reflected coefficient).
RdKernel rd_kernel_goursat(const RdPlant& plant, const HourglassGrid& grid,
                           const GoursatOptions& opts = {});

/// Boundary gains read off the kernel rows at x = +/-L.
RdGains rd_gains(const RdKernel& kernel);

/// Direct evaluation of the constant-lambda gain integrands with the
/// endpoint limits taken analytically.
GainFunction rd_gain_explicit(const RdPlant& plant, BoundaryEnd end, const IntervalGrid& grid);
double rd_gain_explicit_value(const RdPlant& plant, BoundaryEnd end, double xi);

/// The four restrictions of K to {x >= 0, 0 <= xi <= x}:
/// K11(x,xi)=K(x,xi), K12(x,xi)=K(x,-xi), K21(x,xi)=K(-x,xi), K22(x,xi)=K(-x,-xi).
struct RdKernelFold {
    IntervalGrid base;                      // full grid the fold came from
    Eigen::MatrixXd k11, k12, k21, k22;     // (m+1) x (m+1), zero above the diagonal

    HourglassField refold() const;
};

RdKernelFold fold_kernel(const RdKernel& kernel);

/// Max abs second-order finite-difference residual of
/// eps (K_xx - K_xixi) - lambda(xi) K over interior hourglass nodes.
double rd_kernel_residual_sup(const RdKernel& kernel, const RdPlant& plant);

}  // namespace bilat
