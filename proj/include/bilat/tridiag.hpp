#pragma once

// Thomas factorization of a constant tridiagonal system, reused across many
// right-hand sides. No pivoting; callers provide diagonally dominant systems.

#include <Eigen/Dense>

#include "bilat/errors.hpp"

namespace bilat {

class TridiagonalSolver {
public:
    TridiagonalSolver(Eigen::VectorXd lower, Eigen::VectorXd diag, Eigen::VectorXd upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        const Eigen::Index n = diag.size();
        if (lower_.size() != n - 1 || upper_.size() != n - 1 || n < 1) {
            throw ConfigError("TridiagonalSolver: inconsistent band sizes");
        }
        inv_denom_.resize(n);
        cprime_.resize(n - 1);
        double denom = diag[0];
        inv_denom_[0] = 1.0 / denom;
        for (Eigen::Index i = 1; i < n; ++i) {
            cprime_[i - 1] = upper_[i - 1] * inv_denom_[i - 1];
            denom = diag[i] - lower_[i - 1] * cprime_[i - 1];
            inv_denom_[i] = 1.0 / denom;
        }
    }

    Eigen::VectorXd solve(Eigen::Ref<const Eigen::VectorXd> rhs) const {
        const Eigen::Index n = inv_denom_.size();
        Eigen::VectorXd x(n);
        x[0] = rhs[0] * inv_denom_[0];
        for (Eigen::Index i = 1; i < n; ++i) {
            x[i] = (rhs[i] - lower_[i - 1] * x[i - 1]) * inv_denom_[i];
        }
        for (Eigen::Index i = n - 2; i >= 0; --i) {
            x[i] -= cprime_[i] * x[i + 1];
        }
        return x;
    }

private:
    Eigen::VectorXd lower_, upper_, inv_denom_, cprime_;
};

}  // namespace bilat
