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

#include "dirac/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dirac {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n >= 1 required");
    x.resize(n);
    w.resize(n);
    // Newton iteration on P_n over [-1,1], then map to [0,1].
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            if (n == 1) p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? t : p1;
            pp = n * (t * pn - p0) / (t * t - 1.0);
            const double dt = pn / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 - t);  // descending t -> ascending x
        w[i] = 1.0 / ((1.0 - t * t) * pp * pp);
    }
}

namespace {

TriangleRule make_rule_1() {
    TriangleRule r;
    r.points = {{1.0 / 3.0, 1.0 / 3.0}};
    r.weights = {0.5};
    return r;
}

TriangleRule make_rule_2() {
    TriangleRule r;
    const double a = 1.0 / 6.0, b = 2.0 / 3.0;
    r.points = {{a, a}, {b, a}, {a, b}};
    r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return r;
}

// Dunavant degree 4, 6 points, all weights positive.
TriangleRule make_rule_4() {
    TriangleRule r;
    const double a1 = 0.445948490915965, w1 = 0.223381589678011 / 2.0;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322 / 2.0;
    for (double a : {a1, a2}) {
        const double w = (a == a1) ? w1 : w2;
        r.points.push_back({a, a});
        r.points.push_back({1.0 - 2.0 * a, a});
        r.points.push_back({a, 1.0 - 2.0 * a});
        r.weights.insert(r.weights.end(), 3, w);
    }
    return r;
}

// Degree 5, 7 points.
TriangleRule make_rule_5() {
    TriangleRule r;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(0.225 / 2.0);
    const double a1 = 0.470142064105115, w1 = 0.132394152788506 / 2.0;
    const double a2 = 0.101286507323456, w2 = 0.125939180544827 / 2.0;
    for (double a : {a1, a2}) {
        const double w = (a == a1) ? w1 : w2;
        r.points.push_back({a, a});
        r.points.push_back({1.0 - 2.0 * a, a});
        r.points.push_back({a, 1.0 - 2.0 * a});
        r.weights.insert(r.weights.end(), 3, w);
    }
    return r;
}

// Dunavant degree 6, 12 points.
TriangleRule make_rule_6() {
    TriangleRule r;
    const double a1 = 0.249286745170910, w1 = 0.116786275726379 / 2.0;
    const double a2 = 0.063089014491502, w2 = 0.050844906370207 / 2.0;
    for (double a : {a1, a2}) {
        const double w = (a == a1) ? w1 : w2;
        r.points.push_back({a, a});
        r.points.push_back({1.0 - 2.0 * a, a});
        r.points.push_back({a, 1.0 - 2.0 * a});
        r.weights.insert(r.weights.end(), 3, w);
    }
    const double a = 0.310352451033785, b = 0.636502499121399;
    const double c = 1.0 - a - b;
    const double w = 0.082851075618374 / 2.0;
    r.points.push_back({a, b});
    r.points.push_back({b, c});
    r.points.push_back({c, a});
    r.points.push_back({b, a});
    r.points.push_back({c, b});
    r.points.push_back({a, c});
    r.weights.insert(r.weights.end(), 6, w);
    return r;
}

}  // namespace

const TriangleRule& gauss_triangle(int order) {
    static const TriangleRule r1 = make_rule_1();
    static const TriangleRule r2 = make_rule_2();
    static const TriangleRule r4 = make_rule_4();
    static const TriangleRule r5 = make_rule_5();
    static const TriangleRule r6 = make_rule_6();
    switch (order) {
        case 1: return r1;
        case 2: return r2;
        case 3: return r4;  // positive-weight rule of higher exactness
        case 4: return r4;
        case 5: return r5;
        case 6: return r6;
        default: throw std::invalid_argument("gauss_triangle: supported orders are 1..6");
    }
}

PanelPairClass classify_pair(const std::array<int, 3>& ta, const std::array<int, 3>& tb) {
    PanelPairClass c;
    c.shared = 0;
    std::array<bool, 3> used_a{false, false, false}, used_b{false, false, false};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!used_b[j] && ta[i] == tb[j]) {
                c.perm_a[c.shared] = i;
                c.perm_b[c.shared] = j;
                used_a[i] = used_b[j] = true;
                ++c.shared;
                break;
            }
    int ka = c.shared, kb = c.shared;
    for (int i = 0; i < 3; ++i)
        if (!used_a[i]) c.perm_a[ka++] = i;
    for (int j = 0; j < 3; ++j)
        if (!used_b[j]) c.perm_b[kb++] = j;
    switch (c.shared) {
        case 3: c.tag = PanelPairTag::Coincident; break;
        case 2: c.tag = PanelPairTag::EdgeAdjacent; break;
        case 1: c.tag = PanelPairTag::VertexAdjacent; break;
        default: c.tag = PanelPairTag::Separated; break;
    }
    return c;
}

PanelPairClass classify_pair(int ta, int tb, const SurfaceMesh& mesh) {
    return classify_pair(mesh.triangle(ta), mesh.triangle(tb));
}

namespace {

// Sauter-Schwab regularizing transforms. Each subdomain produces points in
// intermediate simplex coordinates (u, v) with 0 <= v <= u <= 1; converting
// via (b1, b2) = (u - v, v) gives barycentric coordinates w.r.t. the permuted
// vertex order (shared vertices first). Weights integrate over the parameter
// domain, summing to 1/4 for a unit kernel.
struct RawRule {
    std::vector<std::array<double, 4>> pts;  // (ua, va, ub, vb)
    std::vector<double> w;
};

RawRule ss_coincident(int k) {
    std::vector<double> x, w;
    gauss_legendre_01(k, x, w);
    RawRule r;
    r.pts.reserve(static_cast<size_t>(6) * k * k * k * k);
    r.w.reserve(r.pts.capacity());
    for (int i3 = 0; i3 < k; ++i3)
        for (int i2 = 0; i2 < k; ++i2)
            for (int i1 = 0; i1 < k; ++i1)
                for (int i0 = 0; i0 < k; ++i0) {
                    const double xi = x[i3], e1 = x[i0], e2 = x[i1], e3 = x[i2];
                    const double lw = w[i3] * w[i2] * w[i1] * w[i0] * xi * xi * xi * e1 * e1 * e2;
                    auto push = [&](double ua, double va, double ub, double vb) {
                        r.pts.push_back({ua, va, ub, vb});
                        r.w.push_back(lw);
                    };
                    push(xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1));
                    push(xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2));
                    push(xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2));
                    push(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3));
                    push(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2));
                    push(xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3));
                }
    return r;
}

RawRule ss_edge(int k) {
    std::vector<double> x, w;
    gauss_legendre_01(k, x, w);
    RawRule r;
    r.pts.reserve(static_cast<size_t>(5) * k * k * k * k);
    r.w.reserve(r.pts.capacity());
    for (int i3 = 0; i3 < k; ++i3)
        for (int i2 = 0; i2 < k; ++i2)
            for (int i1 = 0; i1 < k; ++i1)
                for (int i0 = 0; i0 < k; ++i0) {
                    const double xi = x[i3], e1 = x[i0], e2 = x[i1], e3 = x[i2];
                    const double base = w[i3] * w[i2] * w[i1] * w[i0] * xi * xi * xi;
                    const double lw = base * e1 * e1 * e2;
                    auto push = [&](double ua, double va, double ub, double vb, double ww) {
                        r.pts.push_back({ua, va, ub, vb});
                        r.w.push_back(ww);
                    };
                    push(xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), base * e1 * e1);
                    push(xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), lw);
                    push(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, lw);
                    push(xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, lw);
                    push(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, lw);
                }
    return r;
}

RawRule ss_vertex(int k) {
    std::vector<double> x, w;
    gauss_legendre_01(k, x, w);
    RawRule r;
    r.pts.reserve(static_cast<size_t>(2) * k * k * k * k);
    r.w.reserve(r.pts.capacity());
    for (int i3 = 0; i3 < k; ++i3)
        for (int i2 = 0; i2 < k; ++i2)
            for (int i1 = 0; i1 < k; ++i1)
                for (int i0 = 0; i0 < k; ++i0) {
                    const double xi = x[i3], e1 = x[i0], e2 = x[i1], e3 = x[i2];
                    const double lw = w[i3] * w[i2] * w[i1] * w[i0] * xi * xi * xi * e2;
                    r.pts.push_back({xi, xi * e1, xi * e2, xi * e2 * e3});
                    r.w.push_back(lw);
                    r.pts.push_back({xi * e2, xi * e2 * e3, xi, xi * e1});
                    r.w.push_back(lw);
                }
    return r;
}

RawRule ss_separated(int k) {
    std::vector<double> x, w;
    gauss_legendre_01(k, x, w);
    RawRule r;
    r.pts.reserve(static_cast<size_t>(k) * k * k * k);
    r.w.reserve(r.pts.capacity());
    for (int i3 = 0; i3 < k; ++i3)
        for (int i2 = 0; i2 < k; ++i2)
            for (int i1 = 0; i1 < k; ++i1)
                for (int i0 = 0; i0 < k; ++i0) {
                    const double xi = x[i3], e1 = x[i0], e2 = x[i1], e3 = x[i2];
                    r.pts.push_back({xi, xi * e1, e2, e2 * e3});
                    r.w.push_back(w[i3] * w[i2] * w[i1] * w[i0] * xi * e2);
                }
    return r;
}

const RawRule& cached_rule(PanelPairTag tag, int k) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, RawRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    const auto key = std::make_pair(static_cast<int>(tag), k);
    auto it = cache.find(key);
    if (it == cache.end()) {
        RawRule r;
        switch (tag) {
            case PanelPairTag::Coincident: r = ss_coincident(k); break;
            case PanelPairTag::EdgeAdjacent: r = ss_edge(k); break;
            case PanelPairTag::VertexAdjacent: r = ss_vertex(k); break;
            case PanelPairTag::Separated: r = ss_separated(k); break;
        }
        it = cache.emplace(key, std::move(r)).first;
    }
    return it->second;
}

}  // namespace

QuadratureConfig QuadratureConfig::from_base_order(int k) {
    if (k < 1) throw std::invalid_argument("quadrature base order must be >= 1");
    QuadratureConfig cfg;
    cfg.coincident_points = k + 2;
    cfg.adjacent_points = k + 1;
    cfg.separated_near_points = k;
    cfg.separated_far_points = std::max(2, k - 1);
    return cfg;
}

PairQuadrature::PairQuadrature(QuadratureConfig cfg) : cfg_(cfg) {
    if (cfg_.coincident_points < 1 || cfg_.adjacent_points < 1 ||
        cfg_.separated_near_points < 1 || cfg_.separated_far_points < 1)
        throw std::invalid_argument("PairQuadrature: point counts must be >= 1");
}

void PairQuadrature::build_rule_k(const PanelPairClass& cls, int k, PairRule& out) const {
    const RawRule& raw = cached_rule(cls.tag, k);
    const size_t n = raw.w.size();
    out.bary_a.resize(n);
    out.bary_b.resize(n);
    out.weights.resize(n);
    for (size_t q = 0; q < n; ++q) {
        const auto& p = raw.pts[q];
        const double b1a = p[0] - p[1], b2a = p[1];
        const double b1b = p[2] - p[3], b2b = p[3];
        auto& ba = out.bary_a[q];
        auto& bb = out.bary_b[q];
        ba[cls.perm_a[0]] = 1.0 - b1a - b2a;
        ba[cls.perm_a[1]] = b1a;
        ba[cls.perm_a[2]] = b2a;
        bb[cls.perm_b[0]] = 1.0 - b1b - b2b;
        bb[cls.perm_b[1]] = b1b;
        bb[cls.perm_b[2]] = b2b;
        out.weights[q] = raw.w[q];
    }
}

void PairQuadrature::build_rule(const SurfaceMesh& mesh, int ta, int tb,
                                const PanelPairClass& cls, PairRule& out) const {
    int k = cls.tag == PanelPairTag::Coincident ? cfg_.coincident_points : cfg_.adjacent_points;
    if (cls.tag == PanelPairTag::Separated) {
        const double d = (mesh.centroid(ta) - mesh.centroid(tb)).norm();
        const double diam = std::max(mesh.diameter(ta), mesh.diameter(tb));
        if (d < cfg_.near_radius * diam)
            k = 2 * cfg_.separated_near_points;
        else if (d < cfg_.far_radius * diam)
            k = cfg_.separated_near_points;
        else
            k = cfg_.separated_far_points;
    }
    build_rule_k(cls, k, out);
}

namespace {

inline double eval_kernel(KernelType kernel, const Vec3& x, const Vec3& y, const Vec3& nx,
                          const Vec3& ny, double guard) {
    const Vec3 r = x - y;
    const double rn = r.norm();
    if (rn < guard)
        throw std::logic_error("kernel evaluation: |x-y| below guard in a separated rule "
                               "(panel pair misclassified?)");
    const double inv = 1.0 / (4.0 * M_PI * rn);
    switch (kernel) {
        case KernelType::SingleLayer: return inv;
        case KernelType::DoubleLayerNy: return r.dot(ny) * inv / (rn * rn);
        case KernelType::DoubleLayerNx: return -r.dot(nx) * inv / (rn * rn);
    }
    return 0.0;
}

template <typename ShapeA, typename ShapeB>
double integrate_pair_impl(const SurfaceMesh& mesh, int ta, int tb, const ShapeA& fa,
                           const ShapeB& fb, KernelType kernel, int order) {
    const PanelPairClass cls = classify_pair(ta, tb, mesh);
    // grad G is in-plane for coplanar x, y: double-layer self terms vanish.
    if (cls.tag == PanelPairTag::Coincident && kernel != KernelType::SingleLayer) return 0.0;
    PairQuadrature pq;
    PairRule rule;
    pq.build_rule_k(cls, order, rule);

    const Vec3& a0 = mesh.vertex(mesh.triangle(ta)[0]);
    const Vec3& a1 = mesh.vertex(mesh.triangle(ta)[1]);
    const Vec3& a2 = mesh.vertex(mesh.triangle(ta)[2]);
    const Vec3& b0 = mesh.vertex(mesh.triangle(tb)[0]);
    const Vec3& b1 = mesh.vertex(mesh.triangle(tb)[1]);
    const Vec3& b2 = mesh.vertex(mesh.triangle(tb)[2]);
    const Vec3 nx = mesh.normal(ta), ny = mesh.normal(tb);
    const double guard =
        cls.tag == PanelPairTag::Separated ? 1e-14 * mesh.bbox_diagonal() : 0.0;

    double acc = 0.0;
    for (size_t q = 0; q < rule.size(); ++q) {
        const auto& ba = rule.bary_a[q];
        const auto& bb = rule.bary_b[q];
        const Vec3 x = ba[0] * a0 + ba[1] * a1 + ba[2] * a2;
        const Vec3 y = bb[0] * b0 + bb[1] * b1 + bb[2] * b2;
        const double k = eval_kernel(kernel, x, y, nx, ny, guard);
        double prod;
        if constexpr (std::is_same_v<ShapeA, ScalarShape>)
            prod = fa(x) * fb(y);
        else
            prod = fa(x).dot(fb(y));
        acc += rule.weights[q] * k * prod;
    }
    return acc * 4.0 * mesh.area(ta) * mesh.area(tb);
}

}  // namespace

double integrate_kernel_pair(const SurfaceMesh& mesh, int ta, int tb, const ScalarShape& fa,
                             const ScalarShape& fb, KernelType kernel, int order) {
    return integrate_pair_impl(mesh, ta, tb, fa, fb, kernel, order);
}

double integrate_kernel_pair(const SurfaceMesh& mesh, int ta, int tb, const VectorShape& fa,
                             const VectorShape& fb, KernelType kernel, int order) {
    return integrate_pair_impl(mesh, ta, tb, fa, fb, kernel, order);
}

}  // namespace dirac
