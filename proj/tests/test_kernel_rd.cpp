#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bilat/reaction_diffusion.hpp"
#include "oracles.hpp"

using namespace bilat;

namespace {

RdPlant constant_plant(double lambda, double eps = 1.0, double L = 1.0) {
    return RdPlant{eps, CoefficientProfile::constant(lambda), L};
}

double max_gap_on_T(const HourglassField& a, const HourglassField& b) {
    double gap = 0.0;
    const HourglassGrid& g = a.grid;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            if (!g.contains(i, j)) continue;
            gap = std::max(gap, std::abs(a.values(i, j) - b.values(i, j)));
        }
    }
    return gap;
}

}  // namespace

TEST_CASE("explicit kernel pointwise values") {
    RdPlant plant = constant_plant(1.0);
    SUBCASE("diagonal limit -lambda x/(2 eps)") {
        CHECK(rd_kernel_explicit_value(plant, 1.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(rd_kernel_explicit_value(plant, -1.0, -1.0) ==
              doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("antidiagonal zero") {
        for (double x : {-0.9, -0.3, 0.4, 1.0}) {
            CHECK(rd_kernel_explicit_value(plant, x, -x) == 0.0);
        }
    }
    SUBCASE("interior value against the Bessel oracle") {
        const double expected = -0.5 * oracle::bessel_i1_series(1.0);
        CHECK(rd_kernel_explicit_value(plant, 1.0, 0.0) ==
              doctest::Approx(expected).epsilon(1e-13));
        CHECK(rd_kernel_explicit_value(plant, 1.0, 0.0) ==
              doctest::Approx(-0.28257955199624254).epsilon(1e-10));
    }
    SUBCASE("negative lambda refused") {
        CHECK_THROWS_AS(rd_kernel_explicit_value(constant_plant(-1.0), 0.5, 0.0),
                        std::domain_error);
    }
    SUBCASE("lambda zero gives the zero kernel") {
        HourglassGrid g(IntervalGrid(1.0, 21));
        RdKernel k = rd_kernel_explicit(constant_plant(0.0), g);
        CHECK(k.field.max_abs() == 0.0);
    }
}

TEST_CASE("Goursat solve") {
    SUBCASE("zero coefficient gives the zero kernel exactly") {
        HourglassGrid g(IntervalGrid(1.0, 41));
        RdKernel k = rd_kernel_goursat(constant_plant(0.0), g);
        CHECK(k.field.max_abs() == 0.0);
    }
    SUBCASE("constant lambda matches the explicit formula") {
        HourglassGrid g(IntervalGrid(1.0, 201));
        RdPlant plant = constant_plant(5.0);
        RdKernel numeric = rd_kernel_goursat(plant, g);
        RdKernel exact = rd_kernel_explicit(plant, g);
        CHECK(max_gap_on_T(numeric.field, exact.field) < 1e-6);
    }
    SUBCASE("variable lambda diagonal boundary condition") {
        // lambda(x) = 1 + x^2: K(x,x) = -(x + x^3/3)/2
        RdPlant plant{1.0,
                      CoefficientProfile::closed_form([](double x) { return 1.0 + x * x; }),
                      1.0};
        HourglassGrid g(IntervalGrid(1.0, 101));
        RdKernel k = rd_kernel_goursat(plant, g);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            const double x = g.base().node(i);
            const double expected = -(x + x * x * x / 3.0) / 2.0;
            CHECK(k.field.values(i, i) == doctest::Approx(expected).epsilon(1e-8));
        }
    }
    SUBCASE("asymmetric lambda exercises the reflected T2 solve") {
        RdPlant plant{
            1.0,
            CoefficientProfile::closed_form([](double x) { return 1.0 + x + 0.5 * x * x; }),
            1.0};
        HourglassGrid g(IntervalGrid(1.0, 101));
        RdKernel k = rd_kernel_goursat(plant, g);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            const double x = g.base().node(i);
            const double expected = -(x + 0.5 * x * x + 0.5 * x * x * x / 3.0) / 2.0;
            CHECK(k.field.values(i, i) == doctest::Approx(expected).epsilon(1e-8));
            const Eigen::Index j = g.base().mirror_index(i);
            CHECK(std::abs(k.field.values(i, j)) < 1e-12);  // antidiagonal
        }
    }
    SUBCASE("iteration budget enforced") {
        HourglassGrid g(IntervalGrid(1.0, 41));
        GoursatOptions opts;
        opts.max_iter = 1;
        CHECK_THROWS_AS(rd_kernel_goursat(constant_plant(5.0), g, opts), ConvergenceError);
    }
    SUBCASE("negative lambda is handled by the Goursat path") {
        // the explicit formula refuses lambda < 0, the solver does not
        RdPlant plant = constant_plant(-3.0);
        HourglassGrid g(IntervalGrid(1.0, 101));
        RdKernel k = rd_kernel_goursat(plant, g);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            const double x = g.base().node(i);
            CHECK(k.field.values(i, i) == doctest::Approx(1.5 * x).epsilon(1e-9));
        }
        CHECK(rd_kernel_residual_sup(k, plant) < 1e-2);
    }
    SUBCASE("nonunit diffusivity") {
        RdPlant plant{0.5, CoefficientProfile::constant(5.0), 1.0};
        HourglassGrid g(IntervalGrid(1.0, 101));
        RdKernel numeric = rd_kernel_goursat(plant, g);
        RdKernel exact = rd_kernel_explicit(plant, g);
        CHECK(max_gap_on_T(numeric.field, exact.field) < 1e-6);
    }
    SUBCASE("explicit path requires a constant profile") {
        RdPlant varying{1.0, CoefficientProfile::closed_form([](double x) { return 1.0 + x; }),
                        1.0};
        CHECK_THROWS_AS(rd_kernel_explicit_value(varying, 0.5, 0.0), ConfigError);
    }
}

TEST_CASE("PDE residual of the Goursat kernel decays at second order") {
    RdPlant plant{1.0, CoefficientProfile::closed_form([](double x) { return 1.0 + x * x; }),
                  1.0};
    double prev = 0.0;
    double order = 0.0;
    for (Eigen::Index n : {26, 51, 101}) {
        HourglassGrid g(IntervalGrid(1.0, 2 * n - 1));
        RdKernel k = rd_kernel_goursat(plant, g);
        const double resid = rd_kernel_residual_sup(k, plant);
        if (prev > 0.0) order = std::log2(prev / resid);
        prev = resid;
    }
    CHECK(order > 1.7);
}

TEST_CASE("kernel sup stays under the loose envelope") {
    for (double lambda : {1.0, 5.0, 12.0}) {
        RdPlant plant = constant_plant(lambda);
        HourglassGrid g(IntervalGrid(1.0, 101));
        RdKernel k = rd_kernel_explicit(plant, g);
        const double envelope =
            lambda / 2.0 * std::exp(2.0 * std::sqrt(lambda));  // (lambda L/(2 eps)) e^{2L sqrt(lambda/eps)}
        CHECK(k.field.max_abs() <= envelope);
    }
}

TEST_CASE("gains") {
    RdPlant plant = constant_plant(1.0);
    IntervalGrid grid(1.0, 201);
    HourglassGrid hg(grid);

    SUBCASE("two-path consistency: kernel rows vs direct evaluation") {
        RdGains from_kernel = rd_gains(rd_kernel_explicit(plant, hg));
        GainFunction right = rd_gain_explicit(plant, BoundaryEnd::right, grid);
        GainFunction left = rd_gain_explicit(plant, BoundaryEnd::left, grid);
        CHECK((from_kernel.right.samples() - right.samples()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((from_kernel.left.samples() - left.samples()).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("mirror symmetry g_left(xi) = g_right(-xi)") {
        GainFunction right = rd_gain_explicit(plant, BoundaryEnd::right, grid);
        GainFunction left = rd_gain_explicit(plant, BoundaryEnd::left, grid);
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            CHECK(left.sample(i) ==
                  doctest::Approx(right.sample(grid.mirror_index(i))).epsilon(1e-14));
        }
    }
    SUBCASE("regularized endpoint value") {
        // g_right(L) = K(L, L) = -lambda L / (2 eps)
        CHECK(rd_gain_explicit_value(plant, BoundaryEnd::right, 1.0) ==
              doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(rd_gain_explicit_value(plant, BoundaryEnd::right, -1.0) == 0.0);
    }
    SUBCASE("zero lambda, zero gains") {
        GainFunction g = rd_gain_explicit(constant_plant(0.0), BoundaryEnd::right, grid);
        CHECK(g.samples().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("oriented integral reproduces the minus sign at x = -L") {
        // w(-L) = u(-L) + S K(-L,.) u, so U2 = -S K(-L,.) u annuls it
        RdKernel k = rd_kernel_explicit(plant, hg);
        RdGains gains = rd_gains(k);
        Eigen::VectorXd u(grid.size());
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            u[i] = std::cos(0.7 * grid.node(i)) + 0.3 * grid.node(i);
        }
        Eigen::VectorXd row = k.field.values.row(0);
        const double direct = grid.trapezoid_weights().dot(row.cwiseProduct(u));
        CHECK(gains.left.apply(u) == doctest::Approx(-direct).epsilon(1e-13));
    }
}

TEST_CASE("fold_kernel") {
    RdPlant plant = constant_plant(3.0);
    HourglassGrid g(IntervalGrid(1.0, 81));
    RdKernel k = rd_kernel_explicit(plant, g);
    RdKernelFold fold = fold_kernel(k);

    SUBCASE("refolding reproduces the kernel exactly") {
        HourglassField back = fold.refold();
        CHECK(max_gap_on_T(back, k.field) == 0.0);
    }
    SUBCASE("K12 vanishes on its diagonal (antidiagonal of K)") {
        for (Eigen::Index a = 0; a <= g.base().mid(); ++a) {
            CHECK(fold.k12(a, a) == 0.0);
        }
    }
    SUBCASE("constant lambda: K22 = -K11") {
        const double gap = (fold.k22 + fold.k11).cwiseAbs().maxCoeff();
        CHECK(gap < 1e-14);
    }
}
