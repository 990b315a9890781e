#include "bilat/gain.hpp"

#include <cmath>
#include <utility>

namespace bilat {

GainFunction::GainFunction(BoundaryEnd end, IntervalGrid grid, Eigen::VectorXd samples)
    : end_(end), grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw ConfigError("GainFunction: sample count does not match grid");
    }
    if (!samples_.allFinite()) {
        throw NumericError("GainFunction: non-finite gain sample");
    }
}

double GainFunction::apply(Eigen::Ref<const Eigen::VectorXd> state) const {
    if (state.size() != grid_.size()) {
        throw ConfigError("GainFunction::apply: state size does not match grid");
    }
    return grid_.trapezoid_weights().dot(samples_.cwiseProduct(state));
}

double GainFunction::l1_norm() const {
    return grid_.trapezoid_weights().dot(samples_.cwiseAbs());
}

GainFunction GainFunction::resampled(const IntervalGrid& target) const {
    if (target.half_length() != grid_.half_length()) {
        throw ConfigError("GainFunction::resampled: grids cover different intervals");
    }
    if (target.same_layout(grid_)) return *this;
    Eigen::VectorXd out(target.size());
    const double h = grid_.spacing();
    const Eigen::Index ns = grid_.size();
    for (Eigen::Index i = 0; i < target.size(); ++i) {
        double t = (target.node(i) - grid_.node(0)) / h;
        Eigen::Index k = static_cast<Eigen::Index>(std::floor(t));
        if (k < 0) k = 0;
        if (k > ns - 2) k = ns - 2;
        const double f = t - static_cast<double>(k);
        out[i] = (1.0 - f) * samples_[k] + f * samples_[k + 1];
    }
    return GainFunction(end_, target, std::move(out));
}

}  // namespace bilat
