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

#include "dirac/potentials.hpp"

#include <cmath>
#include <fstream>

#include "dirac/quadrature.hpp"

namespace dirac {

TraceTSample gamma_T(const Vec8& u, const Vec3& n) {
    const Vec3 u1 = u.segment<3>(1);
    const Vec3 u2 = u.segment<3>(4);
    return {u[0], n.cross(u1.cross(n)), u2.dot(n)};
}

TraceRSample gamma_R(const Vec8& u, const Vec3& n) {
    const Vec3 u1 = u.segment<3>(1);
    const Vec3 u2 = u.segment<3>(4);
    return {u1.dot(n), u2.cross(n), u[7]};
}

PotentialEvaluator::PotentialEvaluator(const TraceSpaces& sp, int base_order)
    : sp_(&sp), base_order_(base_order) {}

namespace {

// Recursive panel integration against a smooth point kernel: subdivide while
// the panel is large compared to its distance to x, then apply the rule.
// fn(y, bary_interp_weights_on_original_triangle, jacobian_weight).
template <typename PointFn>
void integrate_panel(const Vec3& x, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                     const std::array<double, 3>& c0, const std::array<double, 3>& c1,
                     const std::array<double, 3>& c2, const TriangleRule& rule, int depth,
                     PointFn&& fn) {
    const double diam =
        std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()});
    const Vec3 cen = (v0 + v1 + v2) / 3.0;
    const double dist = (x - cen).norm();
    if (depth > 0 && dist < 2.0 * diam) {
        const Vec3 m01 = 0.5 * (v0 + v1), m12 = 0.5 * (v1 + v2), m20 = 0.5 * (v2 + v0);
        auto mid = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
            return std::array<double, 3>{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]),
                                         0.5 * (a[2] + b[2])};
        };
        const auto c01 = mid(c0, c1), c12 = mid(c1, c2), c20 = mid(c2, c0);
        integrate_panel(x, v0, m01, m20, c0, c01, c20, rule, depth - 1, fn);
        integrate_panel(x, m01, v1, m12, c01, c1, c12, rule, depth - 1, fn);
        integrate_panel(x, m20, m12, v2, c20, c12, c2, rule, depth - 1, fn);
        integrate_panel(x, m01, m12, m20, c01, c12, c20, rule, depth - 1, fn);
        return;
    }
    const double jac = (v1 - v0).cross(v2 - v0).norm();  // = 2 * area
    for (size_t q = 0; q < rule.points.size(); ++q) {
        const double b1 = rule.points[q][0], b2 = rule.points[q][1];
        const double b0 = 1.0 - b1 - b2;
        const Vec3 y = b0 * v0 + b1 * v1 + b2 * v2;
        std::array<double, 3> bary;  // w.r.t. the original triangle
        for (int k = 0; k < 3; ++k) bary[k] = b0 * c0[k] + b1 * c1[k] + b2 * c2[k];
        fn(y, bary, rule.weights[q] * jac);
    }
}

}  // namespace

template <typename DensityFn>
void PotentialEvaluator::integrate(const Vec3& x, DensityFn&& fn) const {
    const SurfaceMesh& m = sp_->mesh();
    const TriangleRule& rule = gauss_triangle(base_order_);
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangle(t);
        integrate_panel(
            x, m.vertex(tri[0]), m.vertex(tri[1]), m.vertex(tri[2]), {1, 0, 0}, {0, 1, 0},
            {0, 0, 1}, rule, /*depth=*/8,
            [&](const Vec3& y, const std::array<double, 3>& bary, double w) { fn(t, y, bary, w); });
    }
}

Vec8 PotentialEvaluator::eval_LT(const TraceR& a, const Vec3& x) const {
    const SurfaceMesh& m = sp_->mesh();
    Vec8 u = Vec8::Zero();
    integrate(x, [&](int t, const Vec3& y, const std::array<double, 3>& bary, double w) {
        const Vec3 rvec = x - y;
        const double rn = rvec.norm();
        const double G = 1.0 / (4.0 * M_PI * rn);
        const Vec3 g = -rvec * (G / (rn * rn));  // grad_x G(x-y)
        const Vec3& n = m.normal(t);

        const double a0 = a.a0[t];
        const Vec3 a1 = sp_->rwg_field(a.a1, t, y);
        const double a2 = sp_->p1_value(a.a2, t, bary);

        u[0] += -w * g.dot(a1);                       // -div Psi(a1)
        u.segment<3>(1) += w * (a0 * g + a2 * g.cross(n));  // grad psi(a0) + curl Ups(a2)
        u.segment<3>(4) += w * g.cross(a1);           // curl Psi(a1)
        u[7] += w * a2 * g.dot(n);                    // div Ups(a2)
    });
    return u;
}

Vec8 PotentialEvaluator::eval_LR(const TraceT& b, const Vec3& x) const {
    const SurfaceMesh& m = sp_->mesh();
    Vec8 u = Vec8::Zero();
    integrate(x, [&](int t, const Vec3& y, const std::array<double, 3>& bary, double w) {
        const Vec3 rvec = x - y;
        const double rn = rvec.norm();
        const double G = 1.0 / (4.0 * M_PI * rn);
        const Vec3 g = -rvec * (G / (rn * rn));
        const Vec3& n = m.normal(t);

        const double b0 = sp_->p1_value(b.b0, t, bary);
        // b1 x n is the underlying rwg field with the same coefficients.
        const Vec3 b1xn = sp_->rwg_field(b.b1, t, y);
        const double b2 = b.b2[t];

        u[0] += w * b0 * g.dot(n);                        // div Ups(b0)
        u.segment<3>(1) += w * g.cross(b1xn);             // curl Psi(b1 x n)
        u.segment<3>(4) += w * (-b0 * g.cross(n) + b2 * g);  // -curl Ups(b0) + grad psi(b2)
        u[7] += w * g.dot(b1xn);                          // div Psi(b1 x n)
    });
    return u;
}

std::vector<FieldSample> PotentialEvaluator::eval_LT(const TraceR& a,
                                                     const std::vector<Vec3>& pts) const {
    std::vector<FieldSample> out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) out[i] = {pts[i], eval_LT(a, pts[i])};
    return out;
}

std::vector<FieldSample> PotentialEvaluator::eval_LR(const TraceT& b,
                                                     const std::vector<Vec3>& pts) const {
    std::vector<FieldSample> out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) out[i] = {pts[i], eval_LR(b, pts[i])};
    return out;
}

Vec8 PotentialEvaluator::represent(const TraceR& a, const TraceT& b, Side side,
                                   const Vec3& x) const {
    const Vec8 u = eval_LT(a, x) + eval_LR(b, x);
    return side == Side::Interior ? u : Vec8(-u);
}

double PotentialEvaluator::winding_number(const Vec3& x) const {
    const SurfaceMesh& m = sp_->mesh();
    double total = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangle(t);
        const Vec3 a = m.vertex(tri[0]) - x;
        const Vec3 b = m.vertex(tri[1]) - x;
        const Vec3 c = m.vertex(tri[2]) - x;
        const double la = a.norm(), lb = b.norm(), lc = c.norm();
        const double num = a.dot(b.cross(c));
        const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
        total += 2.0 * std::atan2(num, den);
    }
    return total / (4.0 * M_PI);
}

JumpReport jump_probe(const PotentialEvaluator& ev, PotentialKind kind, const TraceR& a,
                      const TraceT& b, int sample_count, double delta_rel) {
    const TraceSpaces& sp = ev.spaces();
    const SurfaceMesh& m = sp.mesh();
    const int F = m.num_triangles();
    const int stride = std::max(1, F / std::max(1, sample_count));

    // Accumulated squared deviations and reference norms per component.
    std::array<double, 3> devT{}, devR{}, refT{}, refR{};
    double order_acc = 0.0;
    int order_cnt = 0;
    bool converged = true;

    auto eval = [&](const Vec3& x) {
        return kind == PotentialKind::LT ? ev.eval_LT(a, x) : ev.eval_LR(b, x);
    };

    for (int t = 0; t < F; t += stride) {
        const Vec3& n = m.normal(t);
        const Vec3 c = m.centroid(t);
        const double delta = delta_rel * m.diameter(t);

        const Vec8 um1 = eval(c - delta * n);
        const Vec8 um2 = eval(c - 0.5 * delta * n);
        const Vec8 up1 = eval(c + delta * n);
        const Vec8 up2 = eval(c + 0.5 * delta * n);
        const Vec8 uminus = 2.0 * um2 - um1;  // two-point Richardson
        const Vec8 uplus = 2.0 * up2 - up1;
        const Vec8 jump = uminus - uplus;  // [gamma] = gamma^- - gamma^+

        // Observed convergence order from the one-sided differences.
        const double d1 = (um1 - um2).norm() + (up1 - up2).norm();
        const Vec8 um3 = eval(c - 0.25 * delta * n);
        const Vec8 up3 = eval(c + 0.25 * delta * n);
        const double d2 = (um2 - um3).norm() + (up2 - up3).norm();
        if (d2 > 1e-14 && d1 > 1e-14) {
            order_acc += std::log2(d1 / d2);
            ++order_cnt;
        }

        const TraceTSample jT = gamma_T(jump, n);
        const TraceRSample jR = gamma_R(jump, n);

        // Expected jumps at this point.
        const std::array<double, 3> bary{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        double eT0 = 0, eT2 = 0, eR0 = 0, eR2 = 0;
        Vec3 eT1 = Vec3::Zero(), eR1 = Vec3::Zero();
        if (kind == PotentialKind::LT) {
            eR0 = a.a0[t];
            eR1 = sp.rwg_field(a.a1, t, c);
            eR2 = sp.p1_value(a.a2, t, bary);
        } else {
            eT0 = sp.p1_value(b.b0, t, bary);
            eT1 = sp.rot_rwg_field(b.b1, t, c);
            eT2 = b.b2[t];
        }

        devT[0] += (jT.s0 - eT0) * (jT.s0 - eT0);
        devT[1] += (jT.t1 - eT1).squaredNorm();
        devT[2] += (jT.s2 - eT2) * (jT.s2 - eT2);
        devR[0] += (jR.s0 - eR0) * (jR.s0 - eR0);
        devR[1] += (jR.t1 - eR1).squaredNorm();
        devR[2] += (jR.s2 - eR2) * (jR.s2 - eR2);
        refT[0] += eT0 * eT0;
        refT[1] += eT1.squaredNorm();
        refT[2] += eT2 * eT2;
        refR[0] += eR0 * eR0;
        refR[1] += eR1.squaredNorm();
        refR[2] += eR2 * eR2;
    }

    // Reference scale: the density itself (the identity side of the jumps).
    double ref = 0.0;
    for (int k = 0; k < 3; ++k) ref += refT[k] + refR[k];
    ref = std::sqrt(ref);
    if (ref == 0.0) ref = 1.0;

    JumpReport rep;
    for (int k = 0; k < 3; ++k) {
        rep.dev_gamma_T[k] = std::sqrt(devT[k]) / ref;
        rep.dev_gamma_R[k] = std::sqrt(devR[k]) / ref;
    }
    rep.observed_order = order_cnt > 0 ? order_acc / order_cnt : 0.0;
    rep.converged = converged && (order_cnt == 0 || rep.observed_order > 0.5);
    return rep;
}

DecayReport decay_probe(const PotentialEvaluator& ev, PotentialKind kind, const TraceR& a,
                        const TraceT& b, const std::vector<double>& radii) {
    static const std::vector<Vec3> dirs = [] {
        std::vector<Vec3> d = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) d.push_back(Vec3(sx, sy, sz).normalized());
        return d;
    }();

    DecayReport rep;
    rep.radii = radii;
    for (double r : radii) {
        double s2 = 0.0;
        for (const auto& d : dirs) {
            const Vec8 u = kind == PotentialKind::LT ? ev.eval_LT(a, r * d) : ev.eval_LR(b, r * d);
            s2 += u.squaredNorm();
        }
        rep.norms.push_back(std::sqrt(s2 / dirs.size()));
    }

    double maxn = 0.0;
    for (double v : rep.norms) maxn = std::max(maxn, v);
    if (maxn < 1e-140) {
        rep.zero_field = true;
        return rep;
    }

    // Least-squares slope of log(norm) against log(r).
    const int n = static_cast<int>(radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(radii[i]);
        const double ly = std::log(std::max(rep.norms[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

double fd_dirac_residual(const std::function<Vec8(const Vec3&)>& field, const Vec3& x, double h) {
    Vec8 du[3];  // du[k] = dU/dx_k by central differences
    for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = h;
        du[k] = (field(x + e) - field(x - e)) / (2.0 * h);
    }
    auto grad_of = [&](int comp) { return Vec3(du[0][comp], du[1][comp], du[2][comp]); };
    auto div_of = [&](int base) { return du[0][base] + du[1][base + 1] + du[2][base + 2]; };
    auto curl_of = [&](int base) {
        return Vec3(du[1][base + 2] - du[2][base + 1], du[2][base] - du[0][base + 2],
                    du[0][base + 1] - du[1][base]);
    };

    Vec8 residual;
    residual[0] = -div_of(1);                                    // -div U1
    residual.segment<3>(1) = grad_of(0) + curl_of(4);            // grad U0 + curl U2
    residual.segment<3>(4) = -grad_of(7) + curl_of(1);           // -grad U3 + curl U1
    residual[7] = div_of(4);                                     // div U2
    const double un = field(x).norm();
    return un > 0 ? residual.norm() / un : residual.norm();
}

void write_field_csv(const std::vector<FieldSample>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "x,y,z,U0,U1x,U1y,U1z,U2x,U2y,U2z,U3\n";
    out.precision(17);
    for (const auto& s : samples) {
        out << s.point.x() << "," << s.point.y() << "," << s.point.z();
        for (int k = 0; k < 8; ++k) out << "," << s.value[k];
        out << "\n";
    }
}

}  // namespace dirac
