#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bilat/effort.hpp"
#include "bilat/io.hpp"
#include "bilat/quadrature.hpp"
#include "oracles.hpp"

using namespace bilat;

TEST_CASE("unilateral gain values") {
    RdPlant plant{1.0, CoefficientProfile::constant(1.0), 1.0};
    SUBCASE("shifted variant vanishes at the pinned end") {
        CHECK(unilateral_rd_gain_value(plant, -1.0, UnilateralVariant::shifted_weight) == 0.0);
    }
    SUBCASE("midpoint value against the Bessel oracle") {
        // -(lambda/eps)(0 + L) I1(sqrt(3))/sqrt(3), frozen from the oracle
        const double expected = -oracle::bessel_i1_series(std::sqrt(3.0)) / std::sqrt(3.0);
        CHECK(unilateral_rd_gain_value(plant, 0.0, UnilateralVariant::shifted_weight) ==
              doctest::Approx(expected).epsilon(1e-13));
        CHECK(unilateral_rd_gain_value(plant, 0.0, UnilateralVariant::shifted_weight) ==
              doctest::Approx(-0.71245867353657799).epsilon(1e-12));
    }
    SUBCASE("literal variant carries the printed weight xi") {
        CHECK(unilateral_rd_gain_value(plant, 0.0, UnilateralVariant::literal_weight) == 0.0);
    }
    SUBCASE("zero lambda gives a zero gain") {
        RdPlant zero{1.0, CoefficientProfile::constant(0.0), 1.0};
        IntervalGrid grid(1.0, 51);
        CHECK(unilateral_rd_gain(zero, grid).samples().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("negative lambda refused") {
        RdPlant neg{1.0, CoefficientProfile::constant(-1.0), 1.0};
        CHECK_THROWS_AS(unilateral_rd_gain_value(neg, 0.0), std::domain_error);
    }
}

TEST_CASE("j_norms") {
    SUBCASE("domain guard") {
        CHECK_THROWS_AS(j_norms(0.0), std::domain_error);
        CHECK_THROWS_AS(j_norms(-1.0), std::domain_error);
        CHECK_THROWS_AS(j_norms(10.5), std::domain_error);
    }
    SUBCASE("small delta: both norms approach delta^2, ratio approaches one") {
        const JNorms n = j_norms(0.01);
        CHECK(std::abs(n.j2 / 1e-4 - 1.0) < 0.01);
        CHECK(std::abs(n.j1_shifted / n.j2 - 1.0) < 0.01);
        // the literal weight halves the leading order
        CHECK(std::abs(n.j1_literal / (0.5e-4) - 1.0) < 0.01);
    }
    SUBCASE("unilateral cheaper at delta = 1, bilateral cheaper at delta = 4") {
        CHECK(j_norms(1.0).j1_literal < j_norms(1.0).j2);
        CHECK(j_norms(4.0).j2 < j_norms(4.0).j1_literal);
    }
    SUBCASE("shifted variant dominates the bilateral norm for all delta") {
        for (double d : {0.2, 0.7, 1.5, 3.0, 5.0, 8.0}) {
            const JNorms n = j_norms(d);
            CHECK(n.j1_shifted >= n.j2);
        }
    }
    SUBCASE("both norms increase with delta") {
        double prev1 = 0.0, prev2 = 0.0;
        for (double d = 0.5; d <= 5.0; d += 0.5) {
            const JNorms n = j_norms(d);
            CHECK(n.j1_literal > prev1);
            CHECK(n.j2 > prev2);
            prev1 = n.j1_literal;
            prev2 = n.j2;
        }
    }
}

TEST_CASE("two-path consistency: bilateral gain L1 norms against J2") {
    for (double delta : {0.5, 2.0, 4.0}) {
        RdPlant plant{1.0, CoefficientProfile::constant(delta * delta), 1.0};
        // independent path: adaptive quadrature of the closed-form gain
        const double l1_right =
            richardson_trapezoid(
                [&](double xi) {
                    return std::abs(rd_gain_explicit_value(plant, BoundaryEnd::right, xi));
                },
                -1.0, 1.0, 1e-10)
                .value;
        const double l1_left =
            richardson_trapezoid(
                [&](double xi) {
                    return std::abs(rd_gain_explicit_value(plant, BoundaryEnd::left, xi));
                },
                -1.0, 1.0, 1e-10)
                .value;
        CHECK(l1_left == doctest::Approx(l1_right).epsilon(1e-10));  // equal end norms
        const double total = l1_left + l1_right;  // two actuators
        const double j2 = j_norms(delta, 1e-10).j2;
        CHECK(std::abs(total - j2) / j2 < 1e-6);
    }
}

TEST_CASE("find_crossover") {
    SUBCASE("artificial linear crossing at one") {
        const double star =
            find_crossover([](double d) { return d - (2.0 - d); }, 0.0, 3.0, 1e-10);
        CHECK(star == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("missing bracket raises") {
        CHECK_THROWS_AS(find_crossover([](double) { return 1.0; }, 0.0, 1.0), BracketError);
        CHECK_THROWS_AS(find_crossover(0.1, 0.2, UnilateralVariant::literal_weight),
                        BracketError);
    }
    SUBCASE("literal-variant crossover sits between 1.5 and 2.5") {
        const double star = find_crossover(0.5, 5.0, UnilateralVariant::literal_weight, 1e-6);
        CHECK(star > 1.5);
        CHECK(star < 2.5);
    }
    SUBCASE("crossover is stable under quadrature refinement") {
        auto diff_at = [](double rel_tol) {
            return [rel_tol](double d) {
                const JNorms n = j_norms(d, rel_tol);
                return n.j1_literal - n.j2;
            };
        };
        const double coarse = find_crossover(diff_at(1e-8), 0.5, 5.0, 1e-8);
        const double fine = find_crossover(diff_at(1e-11), 0.5, 5.0, 1e-8);
        CHECK(std::abs(coarse - fine) < 1e-6);
    }
}

TEST_CASE("effort_curve") {
    SUBCASE("ten samples over the bracket attach a crossover") {
        Eigen::VectorXd deltas(10);
        for (int i = 0; i < 10; ++i) deltas[i] = 0.5 + 4.5 * i / 9.0;
        const EffortCurve curve = effort_curve(deltas);
        REQUIRE(curve.crossover_literal.has_value());
        CHECK(*curve.crossover_literal > 1.5);
        CHECK(*curve.crossover_literal < 2.5);
        CHECK_FALSE(curve.crossover_shifted.has_value());  // dominated, never crosses
        for (Eigen::Index i = 1; i < deltas.size(); ++i) {
            CHECK(curve.j1_literal[i] > curve.j1_literal[i - 1]);
            CHECK(curve.j2[i] > curve.j2[i - 1]);
        }
        for (Eigen::Index i = 0; i < deltas.size(); ++i) {
            CHECK(curve.j1_literal[i] > 0.0);
            CHECK(curve.j1_shifted[i] > 0.0);
            CHECK(curve.j2[i] > 0.0);
            // bilateral is cheaper beyond the crossover, dearer before it
            if (deltas[i] > *curve.crossover_literal) {
                CHECK(curve.j2[i] < curve.j1_literal[i]);
            } else {
                CHECK(curve.j1_literal[i] < curve.j2[i]);
            }
        }
    }
    SUBCASE("single sample, no crossover attempted") {
        Eigen::VectorXd one(1);
        one[0] = 1.0;
        const EffortCurve curve = effort_curve(one);
        CHECK(curve.deltas.size() == 1);
        CHECK_FALSE(curve.crossover_literal.has_value());
        CHECK_FALSE(curve.crossover_shifted.has_value());
    }
    SUBCASE("unsorted samples rejected") {
        Eigen::VectorXd bad(2);
        bad << 2.0, 1.0;
        CHECK_THROWS_AS(effort_curve(bad), ConfigError);
    }
    SUBCASE("csv round trip is exact") {
        Eigen::VectorXd deltas(5);
        deltas << 0.5, 1.0, 2.0, 3.0, 4.0;
        const EffortCurve curve = effort_curve(deltas);
        const std::string path =
            (std::filesystem::temp_directory_path() / "bilat_effort_roundtrip.csv").string();
        write_effort_csv(path, curve);
        const EffortCurve back = load_effort_curve(path);
        REQUIRE(back.deltas.size() == curve.deltas.size());
        for (Eigen::Index i = 0; i < curve.deltas.size(); ++i) {
            CHECK(back.deltas[i] == curve.deltas[i]);
            CHECK(back.j1_literal[i] == curve.j1_literal[i]);
            CHECK(back.j1_shifted[i] == curve.j1_shifted[i]);
            CHECK(back.j2[i] == curve.j2[i]);
        }
        std::remove(path.c_str());
    }
}
