#pragma once

// Geometry of the control interval [-L, L] and of the hourglass kernel
// domain T = T1 u T2, T1 = {x in [0,L], -x <= xi <= x},
// T2 = {x in [-L,0], x <= xi <= -x}, plus trapezoid quadrature over both.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>

#include "bilat/errors.hpp"

namespace bilat {

/// Uniform symmetric grid on [-L, L]. The point count is odd so that x = 0
/// is a node and nodes come in exact +/- pairs.
class IntervalGrid {
public:
    IntervalGrid(double half_length, Eigen::Index n);

    double half_length() const { return half_length_; }
    Eigen::Index size() const { return n_; }
    double spacing() const { return spacing_; }
    Eigen::Index mid() const { return (n_ - 1) / 2; }

    double node(Eigen::Index i) const { return nodes_[i]; }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    Eigen::Index mirror_index(Eigen::Index i) const { return n_ - 1 - i; }

    /// Composite trapezoid weights h * [1/2, 1, ..., 1, 1/2].
    const Eigen::VectorXd& trapezoid_weights() const { return weights_; }

    bool same_layout(const IntervalGrid& other) const {
        return n_ == other.n_ && half_length_ == other.half_length_;
    }

private:
    double half_length_;
    Eigen::Index n_;
    double spacing_;
    Eigen::VectorXd nodes_;
    Eigen::VectorXd weights_;
};

/// Trapezoid estimate of the integral of `values` over the grid interval.
/// Throws NumericError if any value is non-finite.
double trapezoid(const IntervalGrid& grid, Eigen::Ref<const Eigen::VectorXd> values);

/// Classification of an (x_i, xi_j) node pair against the hourglass domain.
enum class NodeClass { interior_t1, interior_t2, diagonal, antidiagonal, outside };

/// Hourglass domain on top of an IntervalGrid, with exact (index-level)
/// characteristic coordinates y = x + xi, z = x - xi on T1.
class HourglassGrid {
public:
    explicit HourglassGrid(IntervalGrid base);

    const IntervalGrid& base() const { return base_; }
    Eigen::Index size() const { return base_.size(); }

    NodeClass classify(Eigen::Index i, Eigen::Index j) const;
    bool contains(Eigen::Index i, Eigen::Index j) const {
        return classify(i, j) != NodeClass::outside;
    }

    /// Characteristic indices on T1: iy = (i-m)+(j-m), iz = (i-m)-(j-m),
    /// both in [0, n-1] with iy+iz <= ... (iy+iz = 2(i-m) <= n-1 on T1).
    std::pair<Eigen::Index, Eigen::Index> to_char(Eigen::Index i, Eigen::Index j) const;
    std::pair<Eigen::Index, Eigen::Index> from_char(Eigen::Index iy, Eigen::Index iz) const;

    double char_value(Eigen::Index ic) const { return base_.spacing() * static_cast<double>(ic); }

private:
    IntervalGrid base_;
};

/// Sign rule used when extending a T1 kernel solve to T2 by point reflection.
enum class MirrorParity { even, odd };

MirrorParity parse_mirror_parity(const std::string& name);

/// Fills the T2 half (rows x < 0) of `out` from the T1 half (rows x >= 0) of
/// `t1_solution` via K(x, xi) = sign * K(-x, -xi). `t1_solution` and `out`
/// may alias: only strictly-negative-x rows are written.
void mirror_to_T2(const HourglassGrid& grid, const Eigen::MatrixXd& t1_solution,
                  MirrorParity parity, Eigen::Ref<Eigen::MatrixXd> out);

/// A spatially varying scalar coefficient on [-L, L]: a constant, a closed
/// form, or a linearly interpolated table.
class CoefficientProfile {
public:
    enum class Kind { constant, closed_form, tabulated };

    static CoefficientProfile constant(double value);
    static CoefficientProfile closed_form(std::function<double(double)> fn,
                                          std::string label = "");
    static CoefficientProfile tabulated(Eigen::VectorXd xs, Eigen::VectorXd values);

    double operator()(double x) const;
    Eigen::VectorXd sample(const IntervalGrid& grid) const;

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::constant; }
    /// Constant value; throws ConfigError when the profile is not constant.
    double constant_value() const;
    const std::string& label() const { return label_; }

    /// The profile x -> f(-x).
    CoefficientProfile reflected() const;

private:
    CoefficientProfile() = default;

    Kind kind_ = Kind::constant;
    double value_ = 0.0;
    std::function<double(double)> fn_;
    Eigen::VectorXd table_x_, table_v_;
    std::string label_;
};

}  // namespace bilat
