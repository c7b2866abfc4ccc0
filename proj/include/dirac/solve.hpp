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

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dirac {

struct NullspaceResult {
    Eigen::MatrixXd basis;         ///< orthonormal columns spanning the detected kernel
    int dim = 0;
    bool clean_gap = true;         ///< gap ratio >= required between zero and nonzero
    double gap_ratio = 0.0;
    Eigen::VectorXd singular_values;  ///< descending
    std::string message;
};

/// SVD-based kernel detection: dim = #{sigma_i < rel_tol * sigma_max}, with a
/// required ratio between the first kept and last dropped singular value.
NullspaceResult nullspace(const Eigen::MatrixXd& block, double rel_tol = 1e-8,
                          double required_gap = 100.0);

struct SaddleSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd multiplier;
    double residual_rel = 0.0;  ///< augmented-system residual
};

/// Solves [[B, K^T], [K, 0]] [x; p] = [rhs; 0] with K the rows of the kernel
/// basis; returns x orthogonal to the kernel.
SaddleSolution solve_saddle(const Eigen::MatrixXd& B, const Eigen::MatrixXd& kernel_basis,
                            const Eigen::VectorXd& rhs);

}  // namespace dirac
