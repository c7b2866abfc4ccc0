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

#include "dirac/spaces.hpp"

#include "dirac/quadrature.hpp"

namespace dirac {

TraceSpaces::TraceSpaces(const SurfaceMesh& mesh) : mesh_(&mesh) {
    const int nt = mesh.num_triangles();
    rwg_sign_.resize(3 * nt);
    rwg_div_.resize(3 * nt);
    grad_p1_.resize(3 * nt);
    curl_p1_.resize(3 * nt);

    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangle(t);
        const Vec3& n = mesh.normal(t);
        const double area = mesh.area(t);
        for (int k = 0; k < 3; ++k) {
            const int e = mesh.triangle_edges(t)[k];
            const Edge& ed = mesh.edge(e);
            const double sign = ed.tri_plus == t ? 1.0 : -1.0;
            rwg_sign_[3 * t + k] = sign;
            rwg_div_[3 * t + k] = sign * ed.length / area;

            // Hat gradient of local vertex k: opposite edge runs
            // tri[(k+1)%3] -> tri[(k+2)%3].
            const Vec3 opp = mesh.vertex(tri[(k + 2) % 3]) - mesh.vertex(tri[(k + 1) % 3]);
            grad_p1_[3 * t + k] = n.cross(opp) / (2.0 * area);
            curl_p1_[3 * t + k] = grad_p1_[3 * t + k].cross(n);
        }
    }
}

Vec3 TraceSpaces::rwg_value(int t, int k, const Vec3& x) const {
    const int e = mesh_->triangle_edges(t)[k];
    const Edge& ed = mesh_->edge(e);
    const Vec3& p = mesh_->vertex(mesh_->triangle(t)[k]);
    return rwg_sign_[3 * t + k] * (ed.length / (2.0 * mesh_->area(t))) * (x - p);
}

double TraceSpaces::p1_value(const VectorXd& coef, int t, const std::array<double, 3>& bary) const {
    const auto& tri = mesh_->triangle(t);
    return bary[0] * coef[tri[0]] + bary[1] * coef[tri[1]] + bary[2] * coef[tri[2]];
}

Vec3 TraceSpaces::rwg_field(const VectorXd& coef, int t, const Vec3& x) const {
    Vec3 v = Vec3::Zero();
    for (int k = 0; k < 3; ++k) v += coef[mesh_->triangle_edges(t)[k]] * rwg_value(t, k, x);
    return v;
}

Vec3 TraceSpaces::rot_rwg_field(const VectorXd& coef, int t, const Vec3& x) const {
    return mesh_->normal(t).cross(rwg_field(coef, t, x));
}

VectorXd TraceSpaces::interp_p0(const std::function<double(const Vec3&)>& f) const {
    VectorXd c(dim_p0());
    for (int t = 0; t < dim_p0(); ++t) c[t] = f(mesh_->centroid(t));
    return c;
}

VectorXd TraceSpaces::interp_p1(const std::function<double(const Vec3&)>& f) const {
    VectorXd c(dim_p1());
    for (int v = 0; v < dim_p1(); ++v) c[v] = f(mesh_->vertex(v));
    return c;
}

VectorXd TraceSpaces::interp_rwg(const std::function<Vec3(const Vec3&)>& f) const {
    // Edge DOF: in-plane normal component at the edge midpoint, evaluated on
    // the plus triangle (the basis has unit constant flux density there).
    VectorXd c(dim_edge());
    for (int e = 0; e < dim_edge(); ++e) {
        const Edge& ed = mesh_->edge(e);
        const int t = ed.tri_plus;
        const Vec3 mid = 0.5 * (mesh_->vertex(ed.v0) + mesh_->vertex(ed.v1));
        int k = 0;
        while (mesh_->triangle_edges(t)[k] != e) ++k;
        const Vec3& p = mesh_->vertex(mesh_->triangle(t)[k]);
        const Vec3 edge_dir = (mesh_->vertex(ed.v1) - mesh_->vertex(ed.v0)).normalized();
        Vec3 nu = mesh_->normal(t).cross(edge_dir);
        if (nu.dot(mid - p) < 0) nu = -nu;  // point away from the opposite vertex
        c[e] = nu.dot(f(mid));
    }
    return c;
}

VectorXd TraceSpaces::interp_rot_rwg(const std::function<Vec3(const Vec3&)>& f) const {
    // rot basis r_e = n x f_e; its DOF is the (n x nu)-component at the
    // midpoint.
    VectorXd c(dim_edge());
    for (int e = 0; e < dim_edge(); ++e) {
        const Edge& ed = mesh_->edge(e);
        const int t = ed.tri_plus;
        const Vec3 mid = 0.5 * (mesh_->vertex(ed.v0) + mesh_->vertex(ed.v1));
        int k = 0;
        while (mesh_->triangle_edges(t)[k] != e) ++k;
        const Vec3& p = mesh_->vertex(mesh_->triangle(t)[k]);
        const Vec3 edge_dir = (mesh_->vertex(ed.v1) - mesh_->vertex(ed.v0)).normalized();
        const Vec3& n = mesh_->normal(t);
        Vec3 nu = n.cross(edge_dir);
        if (nu.dot(mid - p) < 0) nu = -nu;
        c[e] = n.cross(nu).dot(f(mid));
    }
    return c;
}

VectorXd TraceR::stacked() const {
    VectorXd v(a0.size() + a1.size() + a2.size());
    v << a0, a1, a2;
    return v;
}

TraceR TraceR::from_stacked(const TraceSpaces& sp, const VectorXd& v) {
    TraceR a;
    a.a0 = v.segment(0, sp.dim_p0());
    a.a1 = v.segment(sp.dim_p0(), sp.dim_edge());
    a.a2 = v.segment(sp.dim_p0() + sp.dim_edge(), sp.dim_p1());
    return a;
}

TraceR TraceR::zero(const TraceSpaces& sp) {
    TraceR a;
    a.a0 = VectorXd::Zero(sp.dim_p0());
    a.a1 = VectorXd::Zero(sp.dim_edge());
    a.a2 = VectorXd::Zero(sp.dim_p1());
    return a;
}

VectorXd TraceT::stacked() const {
    VectorXd v(b0.size() + b1.size() + b2.size());
    v << b0, b1, b2;
    return v;
}

TraceT TraceT::from_stacked(const TraceSpaces& sp, const VectorXd& v) {
    TraceT b;
    b.b0 = v.segment(0, sp.dim_p1());
    b.b1 = v.segment(sp.dim_p1(), sp.dim_edge());
    b.b2 = v.segment(sp.dim_p1() + sp.dim_edge(), sp.dim_p0());
    return b;
}

TraceT TraceT::zero(const TraceSpaces& sp) {
    TraceT b;
    b.b0 = VectorXd::Zero(sp.dim_p1());
    b.b1 = VectorXd::Zero(sp.dim_edge());
    b.b2 = VectorXd::Zero(sp.dim_p0());
    return b;
}

SparseMat surf_div_rwg(const TraceSpaces& sp) {
    const SurfaceMesh& m = sp.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * m.num_edges());
    for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edge(e);
        trip.emplace_back(ed.tri_plus, e, ed.length / m.area(ed.tri_plus));
        trip.emplace_back(ed.tri_minus, e, -ed.length / m.area(ed.tri_minus));
    }
    SparseMat D(m.num_triangles(), m.num_edges());
    D.setFromTriplets(trip.begin(), trip.end());
    return D;
}

SparseMat curl_p1_to_rwg(const TraceSpaces& sp) {
    // curl of a hat function is pw-constant tangential with continuous normal
    // component across edges, hence exactly representable in rwg. The edge
    // coefficient is the flux-density DOF of the restriction.
    const SurfaceMesh& m = sp.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edge(e);
        const int t = ed.tri_plus;
        int k = 0;
        while (m.triangle_edges(t)[k] != e) ++k;
        const Vec3 mid = 0.5 * (m.vertex(ed.v0) + m.vertex(ed.v1));
        const Vec3& p = m.vertex(m.triangle(t)[k]);
        const Vec3 edge_dir = (m.vertex(ed.v1) - m.vertex(ed.v0)).normalized();
        Vec3 nu = m.normal(t).cross(edge_dir);
        if (nu.dot(mid - p) < 0) nu = -nu;
        for (int j = 0; j < 3; ++j) {
            const double c = nu.dot(sp.curl_p1(t, j));
            if (c != 0.0) trip.emplace_back(e, m.triangle(t)[j], c);
        }
    }
    SparseMat C(m.num_edges(), m.num_vertices());
    C.setFromTriplets(trip.begin(), trip.end());
    return C;
}

VectorXd rotate(RotateDir dir, const VectorXd& coef) {
    return dir == RotateDir::RWGtoRot ? VectorXd(-coef) : coef;
}

SparseMat scalar_curl_rotrwg(const TraceSpaces& sp) {
    return surf_div_rwg(sp);  // rotate(RotToRWG) is +Id on coefficients
}

SparseMat mass_p0(const TraceSpaces& sp) {
    const SurfaceMesh& m = sp.mesh();
    SparseMat M(m.num_triangles(), m.num_triangles());
    for (int t = 0; t < m.num_triangles(); ++t) M.insert(t, t) = m.area(t);
    M.makeCompressed();
    return M;
}

SparseMat mass_p1(const TraceSpaces& sp) {
    const SurfaceMesh& m = sp.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangle(t);
        const double a = m.area(t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], a * (i == j ? 1.0 : 0.5) / 6.0);
    }
    SparseMat M(m.num_vertices(), m.num_vertices());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

namespace {

// Exact integral of f_i . f_j (or rotated variants) over one triangle using
// the degree-2 rule, which is exact for the quadratic integrand.
template <typename PairFn>
void edge_pair_mass(const TraceSpaces& sp, std::vector<Eigen::Triplet<double>>& trip, PairFn fn) {
    const SurfaceMesh& m = sp.mesh();
    const TriangleRule& rule = gauss_triangle(2);
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangle(t);
        const Vec3& v0 = m.vertex(tri[0]);
        const Vec3& v1 = m.vertex(tri[1]);
        const Vec3& v2 = m.vertex(tri[2]);
        const double jac = 2.0 * m.area(t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (size_t q = 0; q < rule.points.size(); ++q) {
                    const double b1 = rule.points[q][0], b2 = rule.points[q][1];
                    const Vec3 x = (1 - b1 - b2) * v0 + b1 * v1 + b2 * v2;
                    acc += rule.weights[q] * fn(t, i, j, x);
                }
                trip.emplace_back(m.triangle_edges(t)[i], m.triangle_edges(t)[j], jac * acc);
            }
    }
}

}  // namespace

SparseMat mass_rwg(const TraceSpaces& sp) {
    std::vector<Eigen::Triplet<double>> trip;
    edge_pair_mass(sp, trip, [&](int t, int i, int j, const Vec3& x) {
        return sp.rwg_value(t, i, x).dot(sp.rwg_value(t, j, x));
    });
    SparseMat M(sp.dim_edge(), sp.dim_edge());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SparseMat mass_rot_rwg_pair(const TraceSpaces& sp) {
    // <f_j, r_i> with r_i = n x f_i; antisymmetric.
    std::vector<Eigen::Triplet<double>> trip;
    edge_pair_mass(sp, trip, [&](int t, int i, int j, const Vec3& x) {
        const Vec3& n = sp.mesh().normal(t);
        return n.cross(sp.rwg_value(t, i, x)).dot(sp.rwg_value(t, j, x));
    });
    SparseMat M(sp.dim_edge(), sp.dim_edge());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SparseMat mass_p1_p0(const TraceSpaces& sp) {
    const SurfaceMesh& m = sp.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < m.num_triangles(); ++t)
        for (int i = 0; i < 3; ++i) trip.emplace_back(m.triangle(t)[i], t, m.area(t) / 3.0);
    SparseMat M(m.num_vertices(), m.num_triangles());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SparseMat duality_pairing(const TraceSpaces& sp) {
    const int V = sp.dim_p1(), E = sp.dim_edge(), F = sp.dim_p0();
    const SparseMat D1 = mass_p1_p0(sp);        // <a0, d0>: V x F
    const SparseMat D2 = mass_rot_rwg_pair(sp); // <a1, r_i>: E x E
    std::vector<Eigen::Triplet<double>> trip;
    auto add_block = [&trip](const SparseMat& B, int r0, int c0, bool transpose) {
        for (int k = 0; k < B.outerSize(); ++k)
            for (SparseMat::InnerIterator it(B, k); it; ++it) {
                if (transpose)
                    trip.emplace_back(r0 + static_cast<int>(it.col()),
                                      c0 + static_cast<int>(it.row()), it.value());
                else
                    trip.emplace_back(r0 + static_cast<int>(it.row()),
                                      c0 + static_cast<int>(it.col()), it.value());
            }
    };
    add_block(D1, 0, 0, false);
    add_block(D2, V, F, false);
    add_block(D1, V + E, F + E, true);
    SparseMat D(V + E + F, F + E + V);
    D.setFromTriplets(trip.begin(), trip.end());
    return D;
}

namespace {

template <typename FieldFn, typename ExactFn>
std::pair<double, double> l2_err_impl(const SurfaceMesh& m, FieldFn field, ExactFn exact) {
    const TriangleRule& rule = gauss_triangle(4);
    double err2 = 0.0, ref2 = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangle(t);
        const Vec3& v0 = m.vertex(tri[0]);
        const Vec3& v1 = m.vertex(tri[1]);
        const Vec3& v2 = m.vertex(tri[2]);
        const double jac = 2.0 * m.area(t);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double b1 = rule.points[q][0], b2 = rule.points[q][1];
            const std::array<double, 3> bary{1 - b1 - b2, b1, b2};
            const Vec3 x = bary[0] * v0 + bary[1] * v1 + bary[2] * v2;
            const auto d = field(t, bary, x) - exact(x);
            const auto e = exact(x);
            double d2, e2;
            if constexpr (std::is_arithmetic_v<std::decay_t<decltype(d)>>) {
                d2 = d * d;
                e2 = e * e;
            } else {
                d2 = d.squaredNorm();
                e2 = e.squaredNorm();
            }
            err2 += rule.weights[q] * jac * d2;
            ref2 += rule.weights[q] * jac * e2;
        }
    }
    return {std::sqrt(err2), std::sqrt(ref2)};
}

}  // namespace

double l2_error_p0(const TraceSpaces& sp, const VectorXd& coef,
                   const std::function<double(const Vec3&)>& exact) {
    auto [err, ref] = l2_err_impl(
        sp.mesh(),
        [&](int t, const std::array<double, 3>&, const Vec3&) -> double { return coef[t]; }, exact);
    return ref > 0 ? err / ref : err;
}

double l2_error_p1(const TraceSpaces& sp, const VectorXd& coef,
                   const std::function<double(const Vec3&)>& exact) {
    auto [err, ref] = l2_err_impl(
        sp.mesh(),
        [&](int t, const std::array<double, 3>& bary, const Vec3&) -> double {
            return sp.p1_value(coef, t, bary);
        },
        exact);
    return ref > 0 ? err / ref : err;
}

double l2_error_rot_rwg(const TraceSpaces& sp, const VectorXd& coef,
                        const std::function<Vec3(const Vec3&)>& exact) {
    auto [err, ref] = l2_err_impl(
        sp.mesh(),
        [&](int t, const std::array<double, 3>&, const Vec3& x) -> Vec3 {
            return sp.rot_rwg_field(coef, t, x);
        },
        exact);
    return ref > 0 ? err / ref : err;
}

double l2_norm_p0(const TraceSpaces& sp, const VectorXd& coef) {
    double s = 0.0;
    for (int t = 0; t < sp.dim_p0(); ++t) s += sp.mesh().area(t) * coef[t] * coef[t];
    return std::sqrt(s);
}

double l2_norm_p1_gradient(const TraceSpaces& sp, const VectorXd& coef) {
    const SurfaceMesh& m = sp.mesh();
    double s = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) {
        Vec3 g = Vec3::Zero();
        for (int k = 0; k < 3; ++k) g += coef[m.triangle(t)[k]] * sp.grad_p1(t, k);
        s += m.area(t) * g.squaredNorm();
    }
    return std::sqrt(s);
}

}  // namespace dirac
