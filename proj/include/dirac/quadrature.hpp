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

#include <array>
#include <vector>

#include "dirac/geometry.hpp"

namespace dirac {

/// Symmetric Gauss rule on the reference triangle {x,y >= 0, x+y <= 1}.
/// Points are (xi1, xi2); weights sum to 1/2 (the reference measure), so
/// int_T f dA = 2*area(T) * sum_q w_q f(X(xi_q)).
struct TriangleRule {
    std::vector<Eigen::Vector2d> points;
    std::vector<double> weights;
};

/// Rules exact for polynomials of (at least) the requested order, 1..6.
/// All weights positive.
const TriangleRule& gauss_triangle(int order);

/// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

enum class PanelPairTag { Coincident, EdgeAdjacent, VertexAdjacent, Separated };

struct PanelPairClass {
    PanelPairTag tag = PanelPairTag::Separated;
    int shared = 0;
    // Local vertex permutations putting the shared vertices first, pairwise
    // matched between the two panels (Sauter-Schwab convention).
    std::array<int, 3> perm_a{0, 1, 2};
    std::array<int, 3> perm_b{0, 1, 2};
};

PanelPairClass classify_pair(int ta, int tb, const SurfaceMesh& mesh);
/// Classification from raw vertex index triples (panels need not belong to a mesh).
PanelPairClass classify_pair(const std::array<int, 3>& ta, const std::array<int, 3>& tb);

struct QuadratureConfig {
    int coincident_points = 6;     ///< GL points per transformed coordinate, self pairs
    int adjacent_points = 5;       ///< edge- and vertex-adjacent pairs
    int separated_near_points = 4; ///< per Duffy coordinate within far_radius diameters
    int separated_far_points = 3;  ///< per Duffy coordinate beyond
    double near_radius = 1.5;      ///< x max diameter: below this, points double
    double far_radius = 5.0;       ///< x max diameter: separated near/far split

    /// Grades all counts from one base order (the CLI --order knob):
    /// coincident = k+2, adjacent = k+1, near = k, far = k-1.
    static QuadratureConfig from_base_order(int k);
};

/// Tensorized rule on a panel pair. Barycentric coordinates are w.r.t. the
/// ORIGINAL local vertex order of each panel; weights are parameter-domain
/// weights (sum 1/4 for smooth kernels), so
///   iint f dσ(x) dσ(y) = 4*Aa*Ab * sum_q w_q f(x_q, y_q).
struct PairRule {
    std::vector<std::array<double, 3>> bary_a;
    std::vector<std::array<double, 3>> bary_b;
    std::vector<double> weights;

    size_t size() const { return weights.size(); }
    void clear() {
        bary_a.clear();
        bary_b.clear();
        weights.clear();
    }
};

/// Builds regularized (Sauter-Schwab type) product rules per adjacency class.
/// Rules per (class, points-per-coordinate) are cached; thread-safe after a
/// warm-up call, stateless otherwise.
class PairQuadrature {
public:
    explicit PairQuadrature(QuadratureConfig cfg = {});

    const QuadratureConfig& config() const { return cfg_; }

    /// Selects the rule for the pair: singular transform for adjacent
    /// classes, Duffy tensor rule for separated pairs with distance-based
    /// point counts.
    void build_rule(const SurfaceMesh& mesh, int ta, int tb, const PanelPairClass& cls,
                    PairRule& out) const;

    /// Same with an explicit per-coordinate point count override.
    void build_rule_k(const PanelPairClass& cls, int k, PairRule& out) const;

private:
    QuadratureConfig cfg_;
};

enum class KernelType { SingleLayer, DoubleLayerNy, DoubleLayerNx };

/// Panel-local shape function, affine in the space coordinate.
struct ScalarShape {
    double c = 1.0;
    Vec3 g = Vec3::Zero();
    double operator()(const Vec3& x) const { return c + g.dot(x); }
};
struct VectorShape {
    Vec3 c = Vec3::Zero();
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    Vec3 operator()(const Vec3& x) const { return c + G * x; }
};

/// Galerkin double integral  iint fa(x) k(x,y) fb(y) dσ(y) dσ(x)  over the
/// panel pair (ta, tb), with the adjacency-appropriate transform at the
/// requested points-per-coordinate count.
double integrate_kernel_pair(const SurfaceMesh& mesh, int ta, int tb, const ScalarShape& fa,
                             const ScalarShape& fb, KernelType kernel, int order);
/// Vector variant: iint fa(x)·fb(y) k(x,y).
double integrate_kernel_pair(const SurfaceMesh& mesh, int ta, int tb, const VectorShape& fa,
                             const VectorShape& fb, KernelType kernel, int order);

}  // namespace dirac
