#pragma once

// Boundary gain xi -> g(xi) for one actuator: the actuator value is the
// trapezoid inner product of the gain samples with the current state.

#include <Eigen/Dense>

#include "bilat/grid.hpp"

namespace bilat {

enum class BoundaryEnd { left, right };

class GainFunction {
public:
    GainFunction(BoundaryEnd end, IntervalGrid grid, Eigen::VectorXd samples);

    BoundaryEnd end() const { return end_; }
    const IntervalGrid& grid() const { return grid_; }
    const Eigen::VectorXd& samples() const { return samples_; }
    double sample(Eigen::Index i) const { return samples_[i]; }

    /// Actuator value for the given state snapshot (same grid).
    double apply(Eigen::Ref<const Eigen::VectorXd> state) const;

    /// L1 norm of the gain by trapezoid over its own grid.
    double l1_norm() const;

    /// Linear interpolation onto another grid covering the same interval.
    GainFunction resampled(const IntervalGrid& target) const;

private:
    BoundaryEnd end_;
    IntervalGrid grid_;
    Eigen::VectorXd samples_;
};

}  // namespace bilat
