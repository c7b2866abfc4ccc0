/*
 * This file is part of diracbem.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

#include "dirac/solve.hpp"

#include <sstream>

namespace dirac {

NullspaceResult nullspace(const Eigen::MatrixXd& block, double rel_tol, double required_gap) {
    NullspaceResult res;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeThinV);
    res.singular_values = svd.singularValues();
    const int n = static_cast<int>(res.singular_values.size());
    const double smax = n > 0 ? res.singular_values[0] : 0.0;
    if (smax == 0.0) {
        res.dim = n;
        res.basis = Eigen::MatrixXd::Identity(block.cols(), block.cols());
        return res;
    }

    int dim = 0;
    for (int i = n - 1; i >= 0; --i) {
        if (res.singular_values[i] < rel_tol * smax)
            ++dim;
        else
            break;
    }
    res.dim = dim;
    res.basis = dim > 0 ? Eigen::MatrixXd(svd.matrixV().rightCols(dim))
                        : Eigen::MatrixXd(block.cols(), 0);

    if (dim > 0 && dim < n) {
        const double last_zero = res.singular_values[n - dim];
        const double first_nonzero = res.singular_values[n - dim - 1];
        res.gap_ratio = last_zero > 0 ? first_nonzero / last_zero
                                      : std::numeric_limits<double>::infinity();
        if (res.gap_ratio < required_gap) {
            res.clean_gap = false;
            std::ostringstream os;
            os << "no clean spectral gap: sigma tail =";
            const int tail = std::min(n, dim + 4);
            for (int i = n - tail; i < n; ++i) os << " " << res.singular_values[i] / smax;
            res.message = os.str();
        }
    }
    return res;
}

SaddleSolution solve_saddle(const Eigen::MatrixXd& B, const Eigen::MatrixXd& kernel_basis,
                            const Eigen::VectorXd& rhs) {
    const int n = static_cast<int>(B.rows());
    const int m = static_cast<int>(kernel_basis.cols());

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + m, n + m);
    A.topLeftCorner(n, n) = B;
    if (m > 0) {
        A.topRightCorner(n, m) = kernel_basis;
        A.bottomLeftCorner(m, n) = kernel_basis.transpose();
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + m);
    b.head(n) = rhs;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd sol = lu.solve(b);

    SaddleSolution out;
    out.x = sol.head(n);
    out.multiplier = sol.tail(m);
    const double bn = b.norm();
    out.residual_rel = bn > 0 ? (A * sol - b).norm() / bn : (A * sol).norm();
    if (!sol.allFinite()) throw std::runtime_error("solve_saddle: singular augmented system");
    return out;
}

}  // namespace dirac
