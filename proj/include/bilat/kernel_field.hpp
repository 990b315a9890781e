#pragma once

// Kernel values K(x, xi) tabulated on the hourglass domain: a full n x n
// matrix (row = x index, column = xi index) that is zero outside T.

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "bilat/grid.hpp"

namespace bilat {

enum class KernelProvenance { explicit_form, goursat, series };

struct HourglassField {
    HourglassField(HourglassGrid g)
        : grid(std::move(g)), values(Eigen::MatrixXd::Zero(grid.size(), grid.size())) {}

    HourglassGrid grid;
    Eigen::MatrixXd values;

    double max_abs() const { return values.cwiseAbs().maxCoeff(); }
};

/// Bilinear resample onto another (same-extent) grid; values outside T are
/// treated as zero, so accuracy degrades to O(h) in cells cut by the
/// hourglass boundary.
inline HourglassField resample(const HourglassField& field, const HourglassGrid& target) {
    if (field.grid.base().half_length() != target.base().half_length()) {
        throw ConfigError("resample: grids cover different intervals");
    }
    if (field.grid.base().same_layout(target.base())) {
        HourglassField out(target);
        out.values = field.values;
        return out;
    }
    const IntervalGrid& src = field.grid.base();
    const double h = src.spacing();
    const Eigen::Index ns = src.size();
    auto cell = [&](double v) {
        double t = (v - src.node(0)) / h;
        Eigen::Index k = static_cast<Eigen::Index>(std::floor(t));
        if (k < 0) k = 0;
        if (k > ns - 2) k = ns - 2;
        return std::make_pair(k, t - static_cast<double>(k));
    };
    HourglassField out(target);
    const Eigen::Index nt = target.size();
    for (Eigen::Index i = 0; i < nt; ++i) {
        for (Eigen::Index j = 0; j < nt; ++j) {
            if (!target.contains(i, j)) continue;
            auto [ix, tx] = cell(target.base().node(i));
            auto [jx, tj] = cell(target.base().node(j));
            out.values(i, j) = (1 - tx) * (1 - tj) * field.values(ix, jx) +
                               tx * (1 - tj) * field.values(ix + 1, jx) +
                               (1 - tx) * tj * field.values(ix, jx + 1) +
                               tx * tj * field.values(ix + 1, jx + 1);
        }
    }
    return out;
}

}  // namespace bilat
