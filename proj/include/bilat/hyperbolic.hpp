#pragma once

// Backstepping kernel matrix (K^uu, K^uv, K^vu, K^vv) and feedback laws for
// the 2x2 same-speed hyperbolic plant
//   u_t = -eps u_x + c1(x) u + c2(x) v,   u(t,-L) = U1,
//   v_t = +eps v_x + c3(x) u + c4(x) v,   v(t,+L) = U2.
//
// The transformation (alpha, beta) = (u, v) - oriented-integral terms maps
// to the cascade target alpha_t = -eps alpha_x + c1 alpha,
// beta_t = eps beta_x + c4 beta with zero inflow. Substituting it into the
// plant gives, on both triangles of the hourglass,
//   K^uu_x + K^uu_xi = ((c1(x)-c1(xi))/eps) K^uu - (c3(xi)/eps) K^uv,
//   K^uv_x - K^uv_xi = ((c1(x)-c4(xi))/eps) K^uv - (c2(xi)/eps) K^uu,
//   K^uu(x,-x) = 0,            K^uv(x,x) = +c2(x)/(2 eps),
// and the (K^vv, K^vu) pair is the same system under the substitution
// (c1,c2,c3,c4) -> (-c4,-c3,-c2,-c1). The feedback laws are
//   U1 = -S (K^uu(-L,.) u + K^uv(-L,.) v),
//   U2 = +S (K^vu(+L,.) u + K^vv(+L,.) v).

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "bilat/gain.hpp"
#include "bilat/grid.hpp"
#include "bilat/kernel_field.hpp"

namespace bilat {

struct HypPlant {
    double epsilon;
    CoefficientProfile c1, c2, c3, c4;
    double half_length;
};

struct HypKernel {
    HourglassField uu, uv, vu, vv;
    KernelProvenance provenance;
};

/// Per-term record of the successive-approximation series for the
/// (K^uu, K^uv) pair, against the analytic envelope
/// 4^i lambda_bar^{i+1} (y+z)^i / i! (lambda_bar built from |c_i|).
struct SeriesTermRecord {
    int index;
    double sup_uu;
    double sup_uv;
    double bound_sup;  // envelope at y+z = 2L
};

struct SeriesTermLedger {
    double lambda_bar = 0.0;
    std::vector<SeriesTermRecord> terms;
};

struct HypSeriesOptions {
    int n_terms = 80;
    double tol = 1e-12;
    int richardson_levels = 3;
};

/// Successive-approximation series solve of both kernel pairs in
/// characteristic coordinates, with T2 obtained by point reflection of the
/// reflected-coefficient solves. Throws ConvergenceError if n_terms is
/// exhausted before the term sup-norm drops below tol, and std::logic_error
/// if a computed term escapes the analytic envelope.
std::pair<HypKernel, SeriesTermLedger> hyp_kernel_series(const HypPlant& plant,
                                                         const HourglassGrid& grid,
                                                         const HypSeriesOptions& opts = {});

/// Closed Bessel form for constant coefficients with c2 c3 >= 0:
///   K^uu = K^vv = e^{psi (x-xi)} F,  psi = (c1-c4)/(2 eps),
///   F = -(c2 c3/(2 eps^2)) (x+xi) I1(s)/s,  s = sqrt(c2 c3 (x^2-xi^2))/eps,
///   K^uv = +(c2/(2 eps)) e^{psi (x-xi)} I0(s),
///   K^vu = -(c3/(2 eps)) e^{psi (x-xi)} I0(s).
HypKernel hyp_kernel_explicit(const HypPlant& plant, const HourglassGrid& grid);

/// Pointwise closed-form values (same conventions as hyp_kernel_explicit).
double hyp_kernel_explicit_uu(const HypPlant& plant, double x, double xi);
double hyp_kernel_explicit_uv(const HypPlant& plant, double x, double xi);
double hyp_kernel_explicit_vu(const HypPlant& plant, double x, double xi);

struct HypGains {
    GainFunction u1_u, u1_v;  // U1 = S(u1_u u) + S(u1_v v), applied at x = -L
    GainFunction u2_u, u2_v;  // U2 = S(u2_u u) + S(u2_v v), applied at x = +L
};

HypGains hyp_gains(const HypKernel& kernel);

/// lambda_bar = max over the grid of |c_i|/(2 eps).
double hyp_lambda_bar(const HypPlant& plant, const IntervalGrid& grid);

/// Max abs centered-difference residual of the four first-order kernel PDEs
/// over interior hourglass nodes.
double hyp_kernel_residual_sup(const HypKernel& kernel, const HypPlant& plant);

}  // namespace bilat
