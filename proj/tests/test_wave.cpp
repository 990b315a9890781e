#include <doctest.h>

#include <cmath>

#include "bilat/wave.hpp"

using namespace bilat;

namespace {

WavePlant make_plant(double lambda, double alpha, double L = 1.0) {
    return WavePlant{CoefficientProfile::constant(lambda), CoefficientProfile::constant(alpha),
                     L};
}

}  // namespace

TEST_CASE("reduction coefficients") {
    SUBCASE("lambda = 1, alpha = 0 gives (1, -1, -1, 1)") {
        WaveReduction red = wave_to_hyp(make_plant(1.0, 0.0));
        CHECK(red.hyp.epsilon == 1.0);
        CHECK(red.hyp.c1.constant_value() == doctest::Approx(1.0));
        CHECK(red.hyp.c2.constant_value() == doctest::Approx(-1.0));
        CHECK(red.hyp.c3.constant_value() == doctest::Approx(-1.0));
        CHECK(red.hyp.c4.constant_value() == doctest::Approx(1.0));
    }
    SUBCASE("lambda = alpha = 0 decouples to pure transport") {
        WaveReduction red = wave_to_hyp(make_plant(0.0, 0.0));
        CHECK(red.hyp.c1.constant_value() == 0.0);
        CHECK(red.hyp.c2.constant_value() == 0.0);
        CHECK(red.hyp.c3.constant_value() == 0.0);
        CHECK(red.hyp.c4.constant_value() == 0.0);
    }
    SUBCASE("variable coefficients") {
        WavePlant plant{CoefficientProfile::closed_form([](double x) { return x; }),
                        CoefficientProfile::constant(0.5), 1.0};
        WaveReduction red = wave_to_hyp(plant);
        CHECK(red.hyp.c1(0.3) == doctest::Approx(0.3 - 0.25));
        CHECK(red.hyp.c2(0.3) == doctest::Approx(-(0.3 + 0.25)));
        CHECK(red.hyp.c3(0.3) == doctest::Approx(0.25 - 0.3));
        CHECK(red.hyp.c4(0.3) == doctest::Approx(0.3 + 0.25));
    }
}

TEST_CASE("riemann maps are inverse bijections") {
    Eigen::VectorXd ux(5), ut(5);
    ux << 0.1, -0.4, 2.0, 0.0, 1.5;
    ut << 1.0, 0.5, -0.25, 3.0, 0.0;
    auto [w, v] = WaveReduction::to_riemann(ux, ut);
    CHECK(((w + v) * 0.5 - ux).cwiseAbs().maxCoeff() < 1e-15);  // w + v = 2 u_x
    CHECK(((w - v) * 0.5 - ut).cwiseAbs().maxCoeff() < 1e-15);  // w - v = 2 u_t
    auto [ux2, ut2] = WaveReduction::from_riemann(w, v);
    CHECK((ux2 - ux).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((ut2 - ut).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("actuator ODE step") {
    SUBCASE("matched slope freezes the actuator") {
        ActuatorState s{0.7, -0.2};
        // V1 = u_x(-L) and V2 = u_x(+L): both right-hand sides vanish
        ActuatorState next = actuator_ode_step(s, 0.01, 1.5, 1.5, -2.0, -2.0, 1.5, 1.5, -2.0,
                                               -2.0);
        CHECK(next.u1 == s.u1);
        CHECK(next.u2 == s.u2);
    }
    SUBCASE("zero data stays zero") {
        ActuatorState next =
            actuator_ode_step(ActuatorState{}, 0.01, 0, 0, 0, 0, 0, 0, 0, 0);
        CHECK(next.u1 == 0.0);
        CHECK(next.u2 == 0.0);
    }
    SUBCASE("unit right-hand side advances by dt") {
        // constant u_x(-L) - V1 = 1 makes the trapezoid step a forward Euler step
        ActuatorState next =
            actuator_ode_step(ActuatorState{}, 0.01, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0);
        CHECK(next.u1 == doctest::Approx(0.01).epsilon(1e-15));
        // and V2 - u_x(+L) = 1 for the right end
        ActuatorState n2 =
            actuator_ode_step(ActuatorState{}, 0.01, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0);
        CHECK(n2.u2 == doctest::Approx(0.01).epsilon(1e-15));
    }
    SUBCASE("dt must be positive") {
        CHECK_THROWS_AS(actuator_ode_step(ActuatorState{}, 0.0, 0, 0, 0, 0, 0, 0, 0, 0),
                        ConfigError);
    }
}

TEST_CASE("spatial derivative is second order") {
    double prev = 0.0, order = 0.0;
    for (Eigen::Index n : {51, 101}) {
        IntervalGrid g(1.0, n);
        Eigen::VectorXd f(n), exact(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            f[i] = std::sin(2.0 * g.node(i));
            exact[i] = 2.0 * std::cos(2.0 * g.node(i));
        }
        const double err = (spatial_derivative(g, f) - exact).cwiseAbs().maxCoeff();
        if (prev > 0.0) order = std::log2(prev / err);
        prev = err;
    }
    CHECK(order > 1.8);
}
