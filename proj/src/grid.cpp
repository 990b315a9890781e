#include "bilat/grid.hpp"

#include <cmath>
#include <utility>

namespace bilat {

IntervalGrid::IntervalGrid(double half_length, Eigen::Index n)
    : half_length_(half_length), n_(n) {
    if (!(half_length > 0.0)) throw ConfigError("IntervalGrid: half length must be positive");
    if (n < 3) throw ConfigError("IntervalGrid: need at least 3 nodes");
    if (n % 2 == 0) throw ConfigError("IntervalGrid: point count must be odd so x=0 is a node");
    spacing_ = 2.0 * half_length / static_cast<double>(n - 1);
    nodes_.resize(n);
    const Eigen::Index m = mid();
    for (Eigen::Index i = 0; i < n; ++i) {
        nodes_[i] = spacing_ * static_cast<double>(i - m);  // exact +/- symmetry
    }
    weights_ = Eigen::VectorXd::Constant(n, spacing_);
    weights_[0] = 0.5 * spacing_;
    weights_[n - 1] = 0.5 * spacing_;
}

double trapezoid(const IntervalGrid& grid, Eigen::Ref<const Eigen::VectorXd> values) {
    if (values.size() != grid.size()) {
        throw ConfigError("trapezoid: value count does not match grid");
    }
    if (!values.allFinite()) throw NumericError("trapezoid: non-finite value in integrand");
    return grid.trapezoid_weights().dot(values);
}

HourglassGrid::HourglassGrid(IntervalGrid base) : base_(std::move(base)) {}

NodeClass HourglassGrid::classify(Eigen::Index i, Eigen::Index j) const {
    const Eigen::Index m = base_.mid();
    const Eigen::Index a = i - m;
    const Eigen::Index b = j - m;
    if (b == a) return NodeClass::diagonal;
    if (b == -a) return NodeClass::antidiagonal;
    if (std::abs(b) > std::abs(a)) return NodeClass::outside;
    return a > 0 ? NodeClass::interior_t1 : NodeClass::interior_t2;
}

std::pair<Eigen::Index, Eigen::Index> HourglassGrid::to_char(Eigen::Index i,
                                                             Eigen::Index j) const {
    const Eigen::Index m = base_.mid();
    return {(i - m) + (j - m), (i - m) - (j - m)};
}

std::pair<Eigen::Index, Eigen::Index> HourglassGrid::from_char(Eigen::Index iy,
                                                               Eigen::Index iz) const {
    const Eigen::Index m = base_.mid();
    return {m + (iy + iz) / 2, m + (iy - iz) / 2};
}

MirrorParity parse_mirror_parity(const std::string& name) {
    if (name == "even") return MirrorParity::even;
    if (name == "odd") return MirrorParity::odd;
    throw ConfigError("unknown mirror parity rule '" + name + "'");
}

void mirror_to_T2(const HourglassGrid& grid, const Eigen::MatrixXd& t1_solution,
                  MirrorParity parity, Eigen::Ref<Eigen::MatrixXd> out) {
    const Eigen::Index n = grid.size();
    if (t1_solution.rows() != n || t1_solution.cols() != n || out.rows() != n ||
        out.cols() != n) {
        throw ConfigError("mirror_to_T2: field shape does not match grid");
    }
    const Eigen::Index m = grid.base().mid();
    const double sign = parity == MirrorParity::odd ? -1.0 : 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {  // strictly x < 0
        const Eigen::Index a = m - i;       // |x| offset
        for (Eigen::Index j = m - a; j <= m + a; ++j) {
            out(i, j) = sign * t1_solution(2 * m - i, 2 * m - j);
        }
    }
}

CoefficientProfile CoefficientProfile::constant(double value) {
    CoefficientProfile p;
    p.kind_ = Kind::constant;
    p.value_ = value;
    return p;
}

CoefficientProfile CoefficientProfile::closed_form(std::function<double(double)> fn,
                                                   std::string label) {
    CoefficientProfile p;
    p.kind_ = Kind::closed_form;
    p.fn_ = std::move(fn);
    p.label_ = std::move(label);
    return p;
}

CoefficientProfile CoefficientProfile::tabulated(Eigen::VectorXd xs, Eigen::VectorXd values) {
    if (xs.size() != values.size() || xs.size() < 2) {
        throw ConfigError("tabulated profile: need matching x/value columns, at least 2 rows");
    }
    for (Eigen::Index i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw ConfigError("tabulated profile: abscissae must be strictly increasing");
        }
    }
    CoefficientProfile p;
    p.kind_ = Kind::tabulated;
    p.table_x_ = std::move(xs);
    p.table_v_ = std::move(values);
    return p;
}

double CoefficientProfile::operator()(double x) const {
    switch (kind_) {
        case Kind::constant:
            return value_;
        case Kind::closed_form:
            return fn_(x);
        case Kind::tabulated: {
            const double lo = table_x_[0];
            const double hi = table_x_[table_x_.size() - 1];
            const double slack = 1e-12 * (hi - lo);
            if (x < lo - slack || x > hi + slack) {
                throw ConfigError("tabulated profile: sample outside table range");
            }
            if (x <= lo) return table_v_[0];
            if (x >= hi) return table_v_[table_v_.size() - 1];
            Eigen::Index k = 1;
            while (table_x_[k] < x) ++k;
            const double t = (x - table_x_[k - 1]) / (table_x_[k] - table_x_[k - 1]);
            return (1.0 - t) * table_v_[k - 1] + t * table_v_[k];
        }
    }
    throw std::logic_error("unreachable profile kind");
}

Eigen::VectorXd CoefficientProfile::sample(const IntervalGrid& grid) const {
    Eigen::VectorXd out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = (*this)(grid.node(i));
    return out;
}

double CoefficientProfile::constant_value() const {
    if (kind_ != Kind::constant) {
        throw ConfigError("profile is not a constant");
    }
    return value_;
}

CoefficientProfile CoefficientProfile::reflected() const {
    switch (kind_) {
        case Kind::constant:
            return *this;
        case Kind::closed_form: {
            auto fn = fn_;
            return closed_form([fn](double x) { return fn(-x); },
                               label_.empty() ? "" : label_ + " reflected");
        }
        case Kind::tabulated: {
            const Eigen::Index n = table_x_.size();
            Eigen::VectorXd xs(n), vs(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                xs[i] = -table_x_[n - 1 - i];
                vs[i] = table_v_[n - 1 - i];
            }
            return tabulated(std::move(xs), std::move(vs));
        }
    }
    throw std::logic_error("unreachable profile kind");
}

}  // namespace bilat
