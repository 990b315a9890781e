#include "bilat/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

#include "bilat/bessel.hpp"

namespace bilat {

namespace {

struct PairCoefficients {
    CoefficientProfile d1, d2, d3, d4;
};

// The generic T1 problem solved below, in characteristic coordinates
// y = x + xi, z = x - xi:
//   A_y = p A + q B,  p(s,z) = (d1((s+z)/2) - d1((s-z)/2))/(2 eps),
//                     q(s,z) = -d3((s-z)/2)/(2 eps),
//   B_z = r B + t A,  r(y,s) = (d1((y+s)/2) - d4((y-s)/2))/(2 eps),
//                     t(y,s) = -d2((y-s)/2)/(2 eps),
//   A(0,z) = 0,  B(y,0) = d2(y/2)/(2 eps).
struct PairLattice {
    Eigen::Index n = 0;
    double h = 0.0;
    Eigen::MatrixXd a, b;
    int terms_used = 0;
};

PairLattice series_solve_T1(const PairCoefficients& coef, double epsilon, double half_length,
                            Eigen::Index n, const HypSeriesOptions& opts, double lambda_bar,
                            SeriesTermLedger* ledger) {
    PairLattice lat;
    lat.n = n;
    lat.h = 2.0 * half_length / static_cast<double>(n - 1);
    const double h = lat.h;
    const double span = 2.0 * half_length;

    Eigen::MatrixXd p(n, n), q(n, n), r(n, n), t(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= n - 1 - i; ++j) {
            const double hi = 0.5 * h * static_cast<double>(i + j);
            const double lo = 0.5 * h * static_cast<double>(i - j);
            p(i, j) = (coef.d1(hi) - coef.d1(lo)) / (2.0 * epsilon);
            q(i, j) = -coef.d3(lo) / (2.0 * epsilon);
            r(i, j) = (coef.d1(hi) - coef.d4(lo)) / (2.0 * epsilon);
            t(i, j) = -coef.d2(lo) / (2.0 * epsilon);
        }
    }
    // note: p,q are indexed (iy, iz) like the fields; r,t use (iy, is) with
    // the same (hi, lo) arguments, which match because both reduce to
    // ((index sum)/2, (index difference)/2) scaled by h.

    Eigen::MatrixXd fa = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double by = coef.d2(0.5 * h * static_cast<double>(i));  // d2(y/2)
        fb.row(i).head(n - i).setConstant(by / (2.0 * epsilon));
    }

    Eigen::MatrixXd a = fa;
    Eigen::MatrixXd b = fb;
    Eigen::MatrixXd na(n, n), nb(n, n);

    double sup = std::max(fa.cwiseAbs().maxCoeff(), fb.cwiseAbs().maxCoeff());
    for (int term = 0; term <= opts.n_terms; ++term) {
        const double sup_a = fa.cwiseAbs().maxCoeff();
        const double sup_b = fb.cwiseAbs().maxCoeff();
        const double bound_sup =
            term == 0 ? lambda_bar
                      : std::exp(term * std::log(4.0 * lambda_bar * span) +
                                 std::log(lambda_bar) - std::lgamma(term + 1.0));
        if (std::max(sup_a, sup_b) > bound_sup * (1.0 + 1e-6) + 1e-280) {
            throw std::logic_error(
                "hyp_kernel_series: computed term escaped the analytic bound (term " +
                std::to_string(term) + ")");
        }
        if (ledger) ledger->terms.push_back({term, sup_a, sup_b, bound_sup});

        sup = std::max(sup_a, sup_b);
        if (sup < opts.tol) break;
        if (term == opts.n_terms) {
            throw ConvergenceError("hyp_kernel_series: series did not converge", sup);
        }

        // next term: cumulative trapezoid of the previous one
        for (Eigen::Index iz = 0; iz < n; ++iz) {
            na(0, iz) = 0.0;
        }
        for (Eigen::Index iz = 0; iz < n; ++iz) {
            for (Eigen::Index iy = 1; iy <= n - 1 - iz; ++iy) {
                const double w0 = p(iy - 1, iz) * fa(iy - 1, iz) + q(iy - 1, iz) * fb(iy - 1, iz);
                const double w1 = p(iy, iz) * fa(iy, iz) + q(iy, iz) * fb(iy, iz);
                na(iy, iz) = na(iy - 1, iz) + 0.5 * h * (w0 + w1);
            }
        }
        for (Eigen::Index iy = 0; iy < n; ++iy) {
            nb(iy, 0) = 0.0;
            for (Eigen::Index iz = 1; iz <= n - 1 - iy; ++iz) {
                const double w0 = r(iy, iz - 1) * fb(iy, iz - 1) + t(iy, iz - 1) * fa(iy, iz - 1);
                const double w1 = r(iy, iz) * fb(iy, iz) + t(iy, iz) * fa(iy, iz);
                nb(iy, iz) = nb(iy, iz - 1) + 0.5 * h * (w0 + w1);
            }
        }
        for (Eigen::Index iy = 0; iy < n; ++iy) {
            for (Eigen::Index iz = 0; iz <= n - 1 - iy; ++iz) {
                fa(iy, iz) = na(iy, iz);
                fb(iy, iz) = nb(iy, iz);
                a(iy, iz) += na(iy, iz);
                b(iy, iz) += nb(iy, iz);
            }
        }
        lat.terms_used = term + 1;
    }
    lat.a = std::move(a);
    lat.b = std::move(b);
    return lat;
}

struct PairSolution {
    Eigen::MatrixXd a, b;  // restricted to the base lattice
};

PairSolution series_solve_extrapolated(const PairCoefficients& coef, double epsilon,
                                       double half_length, Eigen::Index n_base,
                                       const HypSeriesOptions& opts, double lambda_bar,
                                       SeriesTermLedger* ledger) {
    const int levels = std::max(1, opts.richardson_levels);
    std::vector<PairSolution> table;
    for (int level = 0; level < levels; ++level) {
        const Eigen::Index stride = Eigen::Index(1) << level;
        const Eigen::Index n_fine = stride * (n_base - 1) + 1;
        // ledger is recorded from the finest lattice only
        SeriesTermLedger* sink = (level == levels - 1) ? ledger : nullptr;
        PairLattice lat =
            series_solve_T1(coef, epsilon, half_length, n_fine, opts, lambda_bar, sink);
        PairSolution sol{Eigen::MatrixXd::Zero(n_base, n_base),
                         Eigen::MatrixXd::Zero(n_base, n_base)};
        for (Eigen::Index i = 0; i < n_base; ++i) {
            for (Eigen::Index j = 0; j <= n_base - 1 - i; ++j) {
                sol.a(i, j) = lat.a(i * stride, j * stride);
                sol.b(i, j) = lat.b(i * stride, j * stride);
            }
        }
        table.push_back(std::move(sol));
    }
    for (int m = 1; m < levels; ++m) {
        const double w = std::pow(4.0, m);
        for (int k = 0; k + m < levels; ++k) {
            table[k].a = (w * table[k + 1].a - table[k].a) / (w - 1.0);
            table[k].b = (w * table[k + 1].b - table[k].b) / (w - 1.0);
        }
    }
    return table[0];
}

void fill_T1_pair(const HourglassGrid& grid, const PairSolution& sol,
                  Eigen::Ref<Eigen::MatrixXd> a_out, Eigen::Ref<Eigen::MatrixXd> b_out) {
    const Eigen::Index n = grid.size();
    const Eigen::Index m = grid.base().mid();
    for (Eigen::Index i = m; i < n; ++i) {
        const Eigen::Index off = i - m;
        for (Eigen::Index j = m - off; j <= m + off; ++j) {
            auto [iy, iz] = grid.to_char(i, j);
            a_out(i, j) = sol.a(iy, iz);
            b_out(i, j) = sol.b(iy, iz);
        }
    }
}

PairCoefficients mirror_coefficients(const PairCoefficients& coef) {
    auto neg = [](const CoefficientProfile& p) {
        return CoefficientProfile::closed_form([p](double x) { return -p(x); });
    };
    return PairCoefficients{neg(coef.d1.reflected()), coef.d2.reflected(),
                            coef.d3.reflected(), neg(coef.d4.reflected())};
}

// Solves one kernel pair on the whole hourglass: direct T1 solve plus the
// reflected solve mapped by K_A(x,xi) = -A(-x,-xi), K_B(x,xi) = +B(-x,-xi).
void solve_pair(const PairCoefficients& coef, const HypPlant& plant, const HourglassGrid& grid,
                const HypSeriesOptions& opts, double lambda_bar, SeriesTermLedger* ledger,
                Eigen::Ref<Eigen::MatrixXd> a_field, Eigen::Ref<Eigen::MatrixXd> b_field) {
    const Eigen::Index n = grid.size();
    PairSolution t1 = series_solve_extrapolated(coef, plant.epsilon, plant.half_length, n,
                                                opts, lambda_bar, ledger);
    fill_T1_pair(grid, t1, a_field, b_field);

    PairSolution t2 = series_solve_extrapolated(mirror_coefficients(coef), plant.epsilon,
                                                plant.half_length, n, opts, lambda_bar, nullptr);
    Eigen::MatrixXd a_t1 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b_t1 = Eigen::MatrixXd::Zero(n, n);
    fill_T1_pair(grid, t2, a_t1, b_t1);
    mirror_to_T2(grid, a_t1, MirrorParity::odd, a_field);
    mirror_to_T2(grid, b_t1, MirrorParity::even, b_field);
}

void require_constant_real_argument(const HypPlant& plant) {
    const double c2 = plant.c2.constant_value();
    const double c3 = plant.c3.constant_value();
    plant.c1.constant_value();
    plant.c4.constant_value();
    if (c2 * c3 < 0.0) {
        throw std::domain_error(
            "explicit hyperbolic kernel requires c2 c3 >= 0; use the series path");
    }
}

}  // namespace

double hyp_lambda_bar(const HypPlant& plant, const IntervalGrid& grid) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        m = std::max({m, std::abs(plant.c1(x)), std::abs(plant.c2(x)), std::abs(plant.c3(x)),
                      std::abs(plant.c4(x))});
    }
    return m / (2.0 * plant.epsilon);
}

std::pair<HypKernel, SeriesTermLedger> hyp_kernel_series(const HypPlant& plant,
                                                         const HourglassGrid& grid,
                                                         const HypSeriesOptions& opts) {
    if (!(opts.tol > 0.0)) throw ConfigError("hyp_kernel_series: tol must be positive");
    if (opts.n_terms < 1) throw ConfigError("hyp_kernel_series: n_terms must be >= 1");

    HypKernel kernel{HourglassField(grid), HourglassField(grid), HourglassField(grid),
                     HourglassField(grid), KernelProvenance::series};
    SeriesTermLedger ledger;
    ledger.lambda_bar = hyp_lambda_bar(plant, grid.base());

    PairCoefficients uu_uv{plant.c1, plant.c2, plant.c3, plant.c4};
    solve_pair(uu_uv, plant, grid, opts, ledger.lambda_bar, &ledger, kernel.uu.values,
               kernel.uv.values);

    auto neg = [](const CoefficientProfile& p) {
        return CoefficientProfile::closed_form([p](double x) { return -p(x); });
    };
    PairCoefficients vv_vu{neg(plant.c4), neg(plant.c3), neg(plant.c2), neg(plant.c1)};
    solve_pair(vv_vu, plant, grid, opts, ledger.lambda_bar, nullptr, kernel.vv.values,
               kernel.vu.values);

    return {std::move(kernel), std::move(ledger)};
}

double hyp_kernel_explicit_uu(const HypPlant& plant, double x, double xi) {
    const double eps = plant.epsilon;
    const double c1 = plant.c1.constant_value();
    const double c2 = plant.c2.constant_value();
    const double c3 = plant.c3.constant_value();
    const double c4 = plant.c4.constant_value();
    const double s = std::sqrt(std::max(c2 * c3 * (x * x - xi * xi), 0.0)) / eps;
    const double e = std::exp((c1 - c4) * (x - xi) / (2.0 * eps));
    return -e * c2 * c3 / (2.0 * eps * eps) * (x + xi) * bessel_i1_over_z(s);
}

double hyp_kernel_explicit_uv(const HypPlant& plant, double x, double xi) {
    const double eps = plant.epsilon;
    const double c1 = plant.c1.constant_value();
    const double c2 = plant.c2.constant_value();
    const double c3 = plant.c3.constant_value();
    const double c4 = plant.c4.constant_value();
    const double s = std::sqrt(std::max(c2 * c3 * (x * x - xi * xi), 0.0)) / eps;
    const double e = std::exp((c1 - c4) * (x - xi) / (2.0 * eps));
    return e * c2 / (2.0 * eps) * bessel_i0(s);
}

double hyp_kernel_explicit_vu(const HypPlant& plant, double x, double xi) {
    const double eps = plant.epsilon;
    const double c1 = plant.c1.constant_value();
    const double c2 = plant.c2.constant_value();
    const double c3 = plant.c3.constant_value();
    const double c4 = plant.c4.constant_value();
    const double s = std::sqrt(std::max(c2 * c3 * (x * x - xi * xi), 0.0)) / eps;
    const double e = std::exp((c1 - c4) * (x - xi) / (2.0 * eps));
    return -e * c3 / (2.0 * eps) * bessel_i0(s);
}

HypKernel hyp_kernel_explicit(const HypPlant& plant, const HourglassGrid& grid) {
    require_constant_real_argument(plant);
    HypKernel kernel{HourglassField(grid), HourglassField(grid), HourglassField(grid),
                     HourglassField(grid), KernelProvenance::explicit_form};
    const Eigen::Index n = grid.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!grid.contains(i, j)) continue;
            const double x = grid.base().node(i);
            const double xi = grid.base().node(j);
            const double uu = hyp_kernel_explicit_uu(plant, x, xi);
            kernel.uu.values(i, j) = uu;
            kernel.vv.values(i, j) = uu;
            kernel.uv.values(i, j) = hyp_kernel_explicit_uv(plant, x, xi);
            kernel.vu.values(i, j) = hyp_kernel_explicit_vu(plant, x, xi);
        }
    }
    return kernel;
}

HypGains hyp_gains(const HypKernel& kernel) {
    const HourglassGrid& grid = kernel.uu.grid;
    const Eigen::Index n = grid.size();
    Eigen::VectorXd g1u = -kernel.uu.values.row(0);
    Eigen::VectorXd g1v = -kernel.uv.values.row(0);
    Eigen::VectorXd g2u = kernel.vu.values.row(n - 1);
    Eigen::VectorXd g2v = kernel.vv.values.row(n - 1);
    return HypGains{GainFunction(BoundaryEnd::left, grid.base(), std::move(g1u)),
                    GainFunction(BoundaryEnd::left, grid.base(), std::move(g1v)),
                    GainFunction(BoundaryEnd::right, grid.base(), std::move(g2u)),
                    GainFunction(BoundaryEnd::right, grid.base(), std::move(g2v))};
}

double hyp_kernel_residual_sup(const HypKernel& kernel, const HypPlant& plant) {
    const HourglassGrid& grid = kernel.uu.grid;
    const Eigen::Index m = grid.base().mid();
    const double h = grid.base().spacing();
    const double eps = plant.epsilon;
    const Eigen::MatrixXd& uu = kernel.uu.values;
    const Eigen::MatrixXd& uv = kernel.uv.values;
    const Eigen::MatrixXd& vu = kernel.vu.values;
    const Eigen::MatrixXd& vv = kernel.vv.values;

    auto dx = [&](const Eigen::MatrixXd& k, Eigen::Index i, Eigen::Index j) {
        return (k(i + 1, j) - k(i - 1, j)) / (2.0 * h);
    };
    auto dxi = [&](const Eigen::MatrixXd& k, Eigen::Index i, Eigen::Index j) {
        return (k(i, j + 1) - k(i, j - 1)) / (2.0 * h);
    };

    double sup = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Eigen::Index a = std::abs(i - m);
        if (a < 1 || a > m - 1) continue;
        for (Eigen::Index j = m - (a - 1); j <= m + (a - 1); ++j) {
            const double x = grid.base().node(i);
            const double xi = grid.base().node(j);
            const double c1x = plant.c1(x), c1s = plant.c1(xi);
            const double c2s = plant.c2(xi), c3s = plant.c3(xi);
            const double c4x = plant.c4(x), c4s = plant.c4(xi);
            const double r1 = dx(uu, i, j) + dxi(uu, i, j) -
                              ((c1x - c1s) / eps) * uu(i, j) + (c3s / eps) * uv(i, j);
            const double r2 = dx(uv, i, j) - dxi(uv, i, j) -
                              ((c1x - c4s) / eps) * uv(i, j) + (c2s / eps) * uu(i, j);
            const double r3 = dx(vv, i, j) + dxi(vv, i, j) -
                              ((c4s - c4x) / eps) * vv(i, j) - (c2s / eps) * vu(i, j);
            const double r4 = dx(vu, i, j) - dxi(vu, i, j) -
                              ((c1s - c4x) / eps) * vu(i, j) - (c3s / eps) * vv(i, j);
            sup = std::max({sup, std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)});
        }
    }
    return sup;
}

}  // namespace bilat
