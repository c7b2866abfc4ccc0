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

#include <string>

#include "dirac/quadrature.hpp"
#include "dirac/spaces.hpp"

namespace dirac {

using MatrixXd = Eigen::MatrixXd;

enum class SpaceId { P0, P1, RWG, RotRWG, HR, HT };
std::string space_name(SpaceId s);
int space_dim(const TraceSpaces& sp, SpaceId s);

/// Dense Galerkin matrix tagged with its row/column space identities.
struct OperatorBlock {
    MatrixXd matrix;
    SpaceId row_space;
    SpaceId col_space;
    std::string kind;
};

enum AssembleFlags : unsigned {
    kGrams = 1u,      ///< single-layer Grams (V00, VT and derived W)
    kGramR = 2u,      ///< rotated tangential Gram (variant R)
    kRhsBlocks = 4u,  ///< duality-tested double-layer blocks (K, K', N, C)
    kCalderon = 8u,   ///< same-space-tested blocks for the strong projectors
};

struct AssemblyOptions {
    QuadratureConfig quad;
    unsigned flags = kGrams;
    int threads = 2;  ///< fixed thread count keeps assembly bitwise reproducible
};

/// All pairwise-assembled dense blocks from one sweep over panel pairs.
/// Notation: f_i = rwg basis, r_i = n x f_i, lam = P1 hats, p = P0,
/// g = grad_x G(x-y). All integrals are Galerkin double integrals over Gamma.
struct AssemblyKit {
    unsigned flags = 0;

    // kGrams
    MatrixXd V00;  ///< F x F   iint G p_i(x) p_j(y)
    MatrixXd VT;   ///< E x E   iint G f_i(x).f_j(y)
    MatrixXd W;    ///< E x V   iint G f_i(x).curl lam_v(y)   (= VT * curl_p1_to_rwg)

    // kGramR
    MatrixXd VR;  ///< E x E   iint G (n x f_i)(x).(n x f_j)(y)

    // kRhsBlocks (tested against the duality partner space)
    MatrixXd Kp;  ///< V x F   iint lam_i(x) (g.n(x)) p_j(y)       adjoint double layer
    MatrixXd K;   ///< F x V   iint p_i(x) (g.n(y)) lam_j(y)       double layer
    MatrixXd N;   ///< V x V   iint (curl lam_i(x).n(y)) G lam_j(y)
    MatrixXd C;   ///< E x E   iint f_i(x).(g x f_j(y))            Maxwell double layer

    // kCalderon (tested against the output component's own space)
    MatrixXd Kp00;  ///< F x F   iint p_i(x) (g.n(x)) p_j(y)
    MatrixXd K11;   ///< V x V   iint lam_i(x) (g.n(y)) lam_j(y)
    MatrixXd N0;    ///< F x V   iint p_i(x) [g.(n(y) x n(x))] lam_j(y)
    MatrixXd Crot;  ///< E x E   iint r_i(x).(g x f_j(y))
    MatrixXd MF;    ///< F x E   iint p_i(x) (n(x) x g).f_j(y)
    MatrixXd CU;    ///< E x V   iint r_i(x).(g x n(y)) lam_j(y)
    MatrixXd GP;    ///< E x F   iint r_i(x).g p_j(y)
    MatrixXd V10;   ///< V x F   iint G lam_i(x) p_j(y)
};

/// One deterministic sweep over all unordered panel pairs; singular classes
/// use the regularizing transforms, separated pairs distance-graded tensor
/// rules. Thread partition is by leading panel index; per-thread partial
/// matrices are reduced in thread order.
AssemblyKit assemble_kit(const TraceSpaces& sp, const AssemblyOptions& opt = {});

/// Single-layer Gram as a tagged block; density/test must match (p0 or rwg).
OperatorBlock assemble_slp_scalar(const TraceSpaces& sp, const AssemblyKit& kit);
OperatorBlock assemble_slp_tangential(const TraceSpaces& sp, const AssemblyKit& kit, char variant);

/// First-kind operator over H_R coefficients [p0 | rwg | p1].
OperatorBlock assemble_BT(const TraceSpaces& sp, const AssemblyKit& kit);
/// First-kind operator over H_T coefficients [p1 | rot_rwg | p0].
OperatorBlock assemble_BR(const TraceSpaces& sp, const AssemblyKit& kit);

/// Weak average operators entering the right-hand sides:
///   M_RT = <{gamma_R} L_T(a), d>  (rows H_T, cols H_R)
///   M_TR = <{gamma_T} L_R(b), c>  (rows H_R, cols H_T)
MatrixXd assemble_avg_RT(const TraceSpaces& sp, const AssemblyKit& kit);
MatrixXd assemble_avg_TR(const TraceSpaces& sp, const AssemblyKit& kit);

/// Duality pairing <<a, d>> as a tagged block (rows H_T, cols H_R).
OperatorBlock assemble_duality_mass(const TraceSpaces& sp);

/// The component-relabeling isomorphism Xi: H_T -> H_R at coefficient level:
/// a0 = -b2, a1 = rotate(RotToRWG) b1, a2 = b0. Satisfies
/// Xi^T B_T Xi = B_R.
SparseMat xi_matrix(const TraceSpaces& sp);
TraceR xi_map(const TraceSpaces& sp, const TraceT& b);
/// Companion map H_R -> H_T; xi_inverse(xi_map(b)) = b.
TraceT xi_inverse(const TraceSpaces& sp, const TraceR& a);

}  // namespace dirac
