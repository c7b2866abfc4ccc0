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

#include <functional>

#include <Eigen/Sparse>

#include "dirac/geometry.hpp"

namespace dirac {

using VectorXd = Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

/// The four discrete trace spaces on one mesh:
///   p0       one DOF per triangle              (H^{-1/2})
///   p1       one DOF per vertex, continuous    (H^{1/2})
///   rwg      one DOF per edge, div-conforming  (H^{-1/2}(div))
///   rot_rwg  n x (rwg basis)                   (H^{-1/2}(curl))
///
/// RWG sign convention: edges are oriented from lower to higher vertex index
/// and the plus triangle is the one whose cyclic order traverses the edge
/// that way. On the plus/minus triangle the basis function for edge e is
/// +-l_e/(2A)(x - p) with p the opposite vertex.
class TraceSpaces {
public:
    explicit TraceSpaces(const SurfaceMesh& mesh);

    const SurfaceMesh& mesh() const { return *mesh_; }
    int dim_p0() const { return mesh_->num_triangles(); }
    int dim_p1() const { return mesh_->num_vertices(); }
    int dim_edge() const { return mesh_->num_edges(); }
    int dim_hr() const { return dim_p0() + dim_edge() + dim_p1(); }
    int dim_ht() const { return dim_p1() + dim_edge() + dim_p0(); }

    /// +1 if t is the plus triangle of its local edge k (edge opposite local
    /// vertex k), -1 if minus.
    double rwg_sign(int t, int k) const { return rwg_sign_[3 * t + k]; }
    /// RWG basis function of the edge opposite local vertex k, evaluated on t.
    Vec3 rwg_value(int t, int k, const Vec3& x) const;
    /// div of that basis restricted to t (constant).
    double rwg_div(int t, int k) const { return rwg_div_[3 * t + k]; }

    /// Surface gradient of the P1 hat of local vertex k on t (constant).
    const Vec3& grad_p1(int t, int k) const { return grad_p1_[3 * t + k]; }
    /// curl of that hat: grad x n (constant, tangential).
    const Vec3& curl_p1(int t, int k) const { return curl_p1_[3 * t + k]; }

    /// P1 field value from vertex coefficients at barycentric coords on t.
    double p1_value(const VectorXd& coef, int t, const std::array<double, 3>& bary) const;
    /// RWG field value from edge coefficients at a point of t.
    Vec3 rwg_field(const VectorXd& coef, int t, const Vec3& x) const;
    /// rot_rwg field (n x rwg with the same coefficients).
    Vec3 rot_rwg_field(const VectorXd& coef, int t, const Vec3& x) const;

    /// Nodal/flux interpolation into the spaces.
    VectorXd interp_p0(const std::function<double(const Vec3&)>& f) const;
    VectorXd interp_p1(const std::function<double(const Vec3&)>& f) const;
    VectorXd interp_rwg(const std::function<Vec3(const Vec3&)>& f) const;
    VectorXd interp_rot_rwg(const std::function<Vec3(const Vec3&)>& f) const;

private:
    const SurfaceMesh* mesh_;
    std::vector<double> rwg_sign_;
    std::vector<double> rwg_div_;
    std::vector<Vec3> grad_p1_;
    std::vector<Vec3> curl_p1_;
};

/// Coefficients of boundary data in H_R = H^{-1/2} x H^{-1/2}(div) x H^{1/2}.
struct TraceR {
    VectorXd a0;  ///< p0
    VectorXd a1;  ///< rwg
    VectorXd a2;  ///< p1

    VectorXd stacked() const;
    static TraceR from_stacked(const TraceSpaces& sp, const VectorXd& v);
    static TraceR zero(const TraceSpaces& sp);
};

/// Coefficients of boundary data in H_T = H^{1/2} x H^{-1/2}(curl) x H^{-1/2}.
struct TraceT {
    VectorXd b0;  ///< p1
    VectorXd b1;  ///< rot_rwg
    VectorXd b2;  ///< p0

    VectorXd stacked() const;
    static TraceT from_stacked(const TraceSpaces& sp, const VectorXd& v);
    static TraceT zero(const TraceSpaces& sp);
};

/// Sparse map rwg -> p0 realizing the surface divergence:
/// +l/A+ on the plus triangle, -l/A- on the minus triangle.
SparseMat surf_div_rwg(const TraceSpaces& sp);

/// Sparse map p1 -> rwg coefficients interpolating curl_G(p1) into the
/// div-conforming space (exact: curl of a hat is tangential pw-constant with
/// continuous normal component across edges).
SparseMat curl_p1_to_rwg(const TraceSpaces& sp);

enum class RotateDir { RWGtoRot, RotToRWG };

/// DOF-level rotation v -> v x n between the edge spaces. Both directions
/// apply the same pointwise rotation, so rotate(RWGtoRot) = -Id on
/// coefficients, rotate(RotToRWG) = +Id, and the composition is -Id
/// (n x (n x v) = -v for tangential v).
VectorXd rotate(RotateDir dir, const VectorXd& coef);

/// Sparse map rot_rwg -> p0: the scalar surface curl, equal to
/// surf_div_rwg composed with rotate(RotToRWG).
SparseMat scalar_curl_rotrwg(const TraceSpaces& sp);

/// L2(Gamma) mass matrices (same space or paired), exact integration.
SparseMat mass_p0(const TraceSpaces& sp);            // F x F, diag(areas)
SparseMat mass_p1(const TraceSpaces& sp);            // V x V
SparseMat mass_rwg(const TraceSpaces& sp);           // E x E, SPD (= rot x rot mass)
SparseMat mass_p1_p0(const TraceSpaces& sp);         // V x F: <p0, p1>
SparseMat mass_rot_rwg_pair(const TraceSpaces& sp);  // E x E: <rwg_j, rot_i> (antisymmetric)

/// Block-diagonal duality pairing  <<a, d>>  for a in H_R, d in H_T:
/// rows H_T = [p1 | rot | p0], cols H_R = [p0 | rwg | p1].
SparseMat duality_pairing(const TraceSpaces& sp);

/// L2(Gamma) norms/errors of discrete fields against analytic functions
/// (degree-4 panel quadrature).
double l2_error_p0(const TraceSpaces& sp, const VectorXd& coef,
                   const std::function<double(const Vec3&)>& exact);
double l2_error_p1(const TraceSpaces& sp, const VectorXd& coef,
                   const std::function<double(const Vec3&)>& exact);
double l2_error_rot_rwg(const TraceSpaces& sp, const VectorXd& coef,
                        const std::function<Vec3(const Vec3&)>& exact);
double l2_norm_p0(const TraceSpaces& sp, const VectorXd& coef);
double l2_norm_p1_gradient(const TraceSpaces& sp, const VectorXd& coef);

}  // namespace dirac
