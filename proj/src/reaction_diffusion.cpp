#include "bilat/reaction_diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilat/bessel.hpp"

namespace bilat {

namespace {

double require_constant_nonneg_lambda(const RdPlant& plant) {
    const double lam = plant.lambda.constant_value();
    if (lam < 0.0) {
        throw std::domain_error(
            "explicit RD kernel requires constant lambda >= 0; use the Goursat path");
    }
    return lam;
}

// --- Goursat solver on T1 in characteristic coordinates -------------------
//
// G_ab = f(a,b) G with f(a,b) = lambda((a-b)/2) / (4 eps),
// G(a,0) = -(1/(2 eps)) S_0^{a/2} lambda,  G(0,b) = 0, on the triangle
// a, b >= 0, a + b <= 2L. Picard iteration of the equivalent integral
// equation with cumulative trapezoid sums; each lattice keeps its rows
// ragged (j <= N-1-i stays inside the triangle).

struct GoursatLattice {
    Eigen::Index n = 0;   // points per characteristic edge
    double h = 0.0;       // lattice spacing
    Eigen::MatrixXd g;    // solution, zero outside the triangle
    int iterations = 0;
};

GoursatLattice goursat_solve_T1(const CoefficientProfile& lambda, double epsilon,
                                double half_length, Eigen::Index n, double tol,
                                int max_iter) {
    GoursatLattice lat;
    lat.n = n;
    lat.h = 2.0 * half_length / static_cast<double>(n - 1);
    const double h = lat.h;

    // boundary data along b = 0: cumulative trapezoid of lambda(s), s = a/2
    Eigen::VectorXd diag_data(n);
    diag_data[0] = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
        const double s0 = 0.5 * h * static_cast<double>(i - 1);
        const double s1 = 0.5 * h * static_cast<double>(i);
        diag_data[i] =
            diag_data[i - 1] - (s1 - s0) * 0.25 * (lambda(s0) + lambda(s1)) / epsilon;
    }

    Eigen::MatrixXd factor(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= n - 1 - i; ++j) {
            factor(i, j) = lambda(0.5 * h * static_cast<double>(i - j)) / (4.0 * epsilon);
        }
    }

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g.row(i).head(n - i).setConstant(diag_data[i]);
    }

    Eigen::MatrixXd w(n, n), inner(n, n), next(n, n);
    double change = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j <= n - 1 - i; ++j) w(i, j) = factor(i, j) * g(i, j);
        }
        // inner(i,j) = S_0^{b_j} w(a_i, b) db
        for (Eigen::Index i = 0; i < n; ++i) {
            inner(i, 0) = 0.0;
            for (Eigen::Index j = 1; j <= n - 1 - i; ++j) {
                inner(i, j) = inner(i, j - 1) + 0.5 * h * (w(i, j - 1) + w(i, j));
            }
        }
        // next(i,j) = diag_data(i) + S_0^{a_i} inner(a, b_j) da
        change = 0.0;
        next.row(0).head(n).setConstant(diag_data[0]);
        for (Eigen::Index j = 0; j < n; ++j) {
            double acc = 0.0;
            for (Eigen::Index i = 1; i <= n - 1 - j; ++i) {
                acc += 0.5 * h * (inner(i - 1, j) + inner(i, j));
                const double value = diag_data[i] + acc;
                change = std::max(change, std::abs(value - g(i, j)));
                next(i, j) = value;
            }
        }
        change = std::max(change, std::abs(next(0, 0) - g(0, 0)));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j <= n - 1 - i; ++j) g(i, j) = next(i, j);
        }
        lat.iterations = it;
        if (change < tol) {
            lat.g = std::move(g);
            return lat;
        }
    }
    throw ConvergenceError("rd_kernel_goursat: successive approximation did not reach tol",
                           change);
}

// Solves at spacings h, h/2, ..., restricts to the base lattice and combines
// by repeated Richardson extrapolation of the h^2 expansion.
Eigen::MatrixXd goursat_solve_extrapolated(const CoefficientProfile& lambda, double epsilon,
                                           double half_length, Eigen::Index n_base,
                                           const GoursatOptions& opts, int* iterations) {
    const int levels = std::max(1, opts.richardson_levels);
    std::vector<Eigen::MatrixXd> table;
    for (int level = 0; level < levels; ++level) {
        const Eigen::Index stride = Eigen::Index(1) << level;
        const Eigen::Index n_fine = stride * (n_base - 1) + 1;
        GoursatLattice lat =
            goursat_solve_T1(lambda, epsilon, half_length, n_fine, opts.tol, opts.max_iter);
        if (iterations) *iterations = std::max(*iterations, lat.iterations);
        Eigen::MatrixXd restricted = Eigen::MatrixXd::Zero(n_base, n_base);
        for (Eigen::Index i = 0; i < n_base; ++i) {
            for (Eigen::Index j = 0; j <= n_base - 1 - i; ++j) {
                restricted(i, j) = lat.g(i * stride, j * stride);
            }
        }
        table.push_back(std::move(restricted));
    }
    // Romberg-style triangle: entry k after m combines has error O(h^{2m+2}).
    for (int m = 1; m < levels; ++m) {
        const double w = std::pow(4.0, m);
        for (int k = 0; k + m < levels; ++k) {
            table[k] = (w * table[k + 1] - table[k]) / (w - 1.0);
        }
    }
    return table[0];
}

// Scatter a characteristic-lattice T1 solution into the (x, xi) matrix rows
// with x >= 0.
void fill_T1(const HourglassGrid& grid, const Eigen::MatrixXd& g_char,
             Eigen::Ref<Eigen::MatrixXd> out) {
    const Eigen::Index n = grid.size();
    const Eigen::Index m = grid.base().mid();
    for (Eigen::Index i = m; i < n; ++i) {
        const Eigen::Index a = i - m;
        for (Eigen::Index j = m - a; j <= m + a; ++j) {
            auto [iy, iz] = grid.to_char(i, j);
            out(i, j) = g_char(iy, iz);
        }
    }
}

}  // namespace

double rd_kernel_explicit_value(const RdPlant& plant, double x, double xi) {
    const double lam = require_constant_nonneg_lambda(plant);
    const double eps = plant.epsilon;
    const double arg2 = lam / eps * std::max(x * x - xi * xi, 0.0);
    return -lam / (2.0 * eps) * (x + xi) * bessel_i1_over_z(std::sqrt(arg2));
}

RdKernel rd_kernel_explicit(const RdPlant& plant, const HourglassGrid& grid) {
    require_constant_nonneg_lambda(plant);
    RdKernel kernel{HourglassField(grid), KernelProvenance::explicit_form};
    const Eigen::Index n = grid.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!grid.contains(i, j)) continue;
            kernel.field.values(i, j) =
                rd_kernel_explicit_value(plant, grid.base().node(i), grid.base().node(j));
        }
    }
    return kernel;
}

RdKernel rd_kernel_goursat(const RdPlant& plant, const HourglassGrid& grid,
                           const GoursatOptions& opts) {
    if (!(opts.tol > 0.0)) throw ConfigError("rd_kernel_goursat: tol must be positive");
    RdKernel kernel{HourglassField(grid), KernelProvenance::goursat};
    const Eigen::Index n = grid.size();

    Eigen::MatrixXd g1 = goursat_solve_extrapolated(plant.lambda, plant.epsilon,
                                                    plant.half_length, n, opts,
                                                    &kernel.iterations);
    fill_T1(grid, g1, kernel.field.values);

    // T2 by odd point reflection of the solve with the reflected coefficient.
    Eigen::MatrixXd g2 = goursat_solve_extrapolated(plant.lambda.reflected(), plant.epsilon,
                                                    plant.half_length, n, opts,
                                                    &kernel.iterations);
    Eigen::MatrixXd t1_of_reflected = Eigen::MatrixXd::Zero(n, n);
    fill_T1(grid, g2, t1_of_reflected);
    mirror_to_T2(grid, t1_of_reflected, MirrorParity::odd, kernel.field.values);
    return kernel;
}

RdGains rd_gains(const RdKernel& kernel) {
    const HourglassGrid& grid = kernel.field.grid;
    const Eigen::Index n = grid.size();
    Eigen::VectorXd right = kernel.field.values.row(n - 1);
    Eigen::VectorXd left = -kernel.field.values.row(0);
    return RdGains{GainFunction(BoundaryEnd::right, grid.base(), std::move(right)),
                   GainFunction(BoundaryEnd::left, grid.base(), std::move(left))};
}

double rd_gain_explicit_value(const RdPlant& plant, BoundaryEnd end, double xi) {
    const double lam = require_constant_nonneg_lambda(plant);
    const double eps = plant.epsilon;
    const double L = plant.half_length;
    const double arg2 = lam / eps * std::max(L * L - xi * xi, 0.0);
    const double ratio = bessel_i1_over_z(std::sqrt(arg2));
    // right: K(L, xi); left: -K(-L, xi)
    const double weight = end == BoundaryEnd::right ? (L + xi) : (L - xi);
    return -lam / (2.0 * eps) * weight * ratio;
}

GainFunction rd_gain_explicit(const RdPlant& plant, BoundaryEnd end, const IntervalGrid& grid) {
    Eigen::VectorXd samples(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        samples[i] = rd_gain_explicit_value(plant, end, grid.node(i));
    }
    return GainFunction(end, grid, std::move(samples));
}

RdKernelFold fold_kernel(const RdKernel& kernel) {
    const HourglassGrid& grid = kernel.field.grid;
    const Eigen::Index m = grid.base().mid();
    RdKernelFold fold{grid.base(),
                      Eigen::MatrixXd::Zero(m + 1, m + 1), Eigen::MatrixXd::Zero(m + 1, m + 1),
                      Eigen::MatrixXd::Zero(m + 1, m + 1), Eigen::MatrixXd::Zero(m + 1, m + 1)};
    const Eigen::MatrixXd& k = kernel.field.values;
    for (Eigen::Index a = 0; a <= m; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
            fold.k11(a, b) = k(m + a, m + b);
            fold.k12(a, b) = k(m + a, m - b);
            fold.k21(a, b) = k(m - a, m + b);
            fold.k22(a, b) = k(m - a, m - b);
        }
    }
    return fold;
}

HourglassField RdKernelFold::refold() const {
    HourglassGrid grid{base};
    HourglassField out(grid);
    const Eigen::Index m = base.mid();
    for (Eigen::Index a = 0; a <= m; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
            out.values(m + a, m + b) = k11(a, b);
            out.values(m + a, m - b) = k12(a, b);
            out.values(m - a, m + b) = k21(a, b);
            out.values(m - a, m - b) = k22(a, b);
        }
    }
    return out;
}

double rd_kernel_residual_sup(const RdKernel& kernel, const RdPlant& plant) {
    const HourglassGrid& grid = kernel.field.grid;
    const Eigen::MatrixXd& k = kernel.field.values;
    const Eigen::Index m = grid.base().mid();
    const double h = grid.base().spacing();
    const double eps = plant.epsilon;
    double sup = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Eigen::Index a = std::abs(i - m);
        if (a < 1 || a > m - 1) continue;  // need the x-neighbours inside [-L, L]
        for (Eigen::Index j = m - (a - 1); j <= m + (a - 1); ++j) {
            const double kxx = (k(i + 1, j) - 2.0 * k(i, j) + k(i - 1, j)) / (h * h);
            const double kss = (k(i, j + 1) - 2.0 * k(i, j) + k(i, j - 1)) / (h * h);
            const double resid =
                eps * (kxx - kss) - plant.lambda(grid.base().node(j)) * k(i, j);
            sup = std::max(sup, std::abs(resid));
        }
    }
    return sup;
}

}  // namespace bilat
