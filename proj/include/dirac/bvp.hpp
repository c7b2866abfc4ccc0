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

#include <memory>
#include <optional>

#include "dirac/operators.hpp"
#include "dirac/potentials.hpp"
#include "dirac/solve.hpp"

namespace dirac {

/// Owns a mesh together with its spaces and assembled operators.
/// Blocks are assembled lazily per the requested flags.
class BemWorkspace {
public:
    BemWorkspace(SurfaceMesh mesh, AssemblyOptions opt = {});

    const SurfaceMesh& mesh() const { return mesh_; }
    const TraceSpaces& spaces() const { return spaces_; }
    const AssemblyOptions& options() const { return opt_; }

    /// Ensures the kit contains at least the given flags (reassembles once
    /// with the union if not).
    const AssemblyKit& kit(unsigned flags);

    const MatrixXd& BT();
    const MatrixXd& BR();
    const MatrixXd& avg_RT();  ///< weak {gamma_R} L_T, rows H_T x cols H_R
    const MatrixXd& avg_TR();  ///< weak {gamma_T} L_R, rows H_R x cols H_T
    const SparseMat& duality();

    const NullspaceResult& kernel_BT(double rel_tol = 1e-8);
    const NullspaceResult& kernel_BR(double rel_tol = 1e-8);

private:
    SurfaceMesh mesh_;
    TraceSpaces spaces_;
    AssemblyOptions opt_;
    AssemblyKit kit_;
    std::optional<MatrixXd> bt_, br_, m1_, m2_;
    std::optional<SparseMat> duality_;
    std::optional<NullspaceResult> ker_bt_, ker_br_;
};

struct BvpSolution {
    VectorXd unknown;     ///< stacked coefficients of the solved trace
    VectorXd multiplier;  ///< coefficients in the kernel basis
    double res_linear = 0.0;
    double res_consistency = 0.0;
    int kernel_dim = 0;
};

/// Right-hand side vectors of the mixed problems.
VectorXd rhs_R(BemWorkspace& ws, const TraceR& a);  ///< l_R = (1/2 D - M_RT) a
VectorXd rhs_T(BemWorkspace& ws, const TraceT& b);  ///< l_T = (1/2 D^T - M_TR) b

/// Solves (MBVR): given a = gamma_R U, returns b ~ gamma_T U orthogonal to
/// ker B_R. Inconsistent data is not rejected; it shows up in
/// res_consistency and the multiplier.
BvpSolution solve_bvp_R(BemWorkspace& ws, const TraceR& a);
/// Solves (MBVT) directly, or through the Xi-conjugated R-problem.
BvpSolution solve_bvp_T(BemWorkspace& ws, const TraceT& b, bool via_xi = false);

/// Projection of the assembled rhs onto ker B_R, relative to the rhs norm.
double consistency_check(BemWorkspace& ws, const TraceR& a);

struct CalderonReport {
    double id_residual = 0.0;  ///< |P- + P+ - Id| (zero by construction)
    /// |(P-)^2 z - P- z|_M / |P- z|_M on smooth probe data; tends to 0 under
    /// refinement.
    double projector_residual = 0.0;
    /// Raw coefficient-matrix residual |(P-)^2 - P-|_F / |P-|_F; dominated by
    /// the roughest discrete modes and does not decay (diagnostic only).
    double projector_residual_matrix = 0.0;
    double cauchy_residual = -1.0;  ///< |P+ z|_M / |z|_M for supplied data
};

/// Strong (coefficient-space) Calderon projectors, realized with same-space
/// L2-mass weighting. When with_projector_residual is false only the data
/// residual is computed (matrix-free application).
CalderonReport calderon_check(BemWorkspace& ws, const TraceR* a = nullptr,
                              const TraceT* b = nullptr, bool with_projector_residual = true);

/// Smooth generic trace data (all components nonzero), used as probe
/// densities by the jump/decay/projector diagnostics.
TraceR smooth_trace_R(const TraceSpaces& sp);
TraceT smooth_trace_T(const TraceSpaces& sp);

/// Exact interpolation of the traces of an analytic 8-component field.
TraceR interp_traceR(const TraceSpaces& sp, const std::function<Vec8(const Vec3&)>& U);
TraceT interp_traceT(const TraceSpaces& sp, const std::function<Vec8(const Vec3&)>& U);

/// Relative L2(Gamma) error of a discrete trace against the exact traces of U.
double trace_error_T(const TraceSpaces& sp, const TraceT& b,
                     const std::function<Vec8(const Vec3&)>& U);
double trace_error_R(const TraceSpaces& sp, const TraceR& a,
                     const std::function<Vec8(const Vec3&)>& U);

/// Manufactured homogeneous solutions (D U = 0) used by pipelines and tests.
struct ManufacturedCase {
    std::string name;
    std::function<Vec8(const Vec3&)> field;
    bool interior = true;  ///< solution of the interior problem
};
ManufacturedCase manufactured_case(const std::string& name);

}  // namespace dirac
