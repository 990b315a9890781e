#include "bilat/wave.hpp"

namespace bilat {

WaveReduction wave_to_hyp(const WavePlant& plant) {
    const CoefficientProfile lam = plant.lambda;
    const CoefficientProfile alp = plant.alpha;
    auto combine = [](CoefficientProfile a, CoefficientProfile b, double sa, double sb,
                      std::string label) {
        if (a.is_constant() && b.is_constant()) {
            return CoefficientProfile::constant(sa * a.constant_value() +
                                                sb * b.constant_value());
        }
        return CoefficientProfile::closed_form(
            [a, b, sa, sb](double x) { return sa * a(x) + sb * b(x); }, std::move(label));
    };
    HypPlant hyp{1.0,
                 combine(lam, alp, 1.0, -0.5, "lambda - alpha/2"),
                 combine(lam, alp, -1.0, -0.5, "-(lambda + alpha/2)"),
                 combine(lam, alp, -1.0, 0.5, "alpha/2 - lambda"),
                 combine(lam, alp, 1.0, 0.5, "lambda + alpha/2"),
                 plant.half_length};
    return WaveReduction{std::move(hyp)};
}

ActuatorState actuator_ode_step(const ActuatorState& state, double dt, double v1_old,
                                double v1_new, double v2_old, double v2_new,
                                double ux_left_old, double ux_left_new, double ux_right_old,
                                double ux_right_new) {
    if (!(dt > 0.0)) throw ConfigError("actuator_ode_step: dt must be positive");
    ActuatorState next;
    next.u1 = state.u1 + 0.5 * dt * ((ux_left_old - v1_old) + (ux_left_new - v1_new));
    next.u2 = state.u2 + 0.5 * dt * ((v2_old - ux_right_old) + (v2_new - ux_right_new));
    return next;
}

Eigen::VectorXd spatial_derivative(const IntervalGrid& grid,
                                   Eigen::Ref<const Eigen::VectorXd> values) {
    const Eigen::Index n = grid.size();
    const double h = grid.spacing();
    Eigen::VectorXd d(n);
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for (Eigen::Index i = 1; i < n - 1; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    return d;
}

}  // namespace bilat
