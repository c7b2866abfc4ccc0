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

#include "dirac/operators.hpp"

#include <cstring>
#include <thread>

namespace dirac {

std::string space_name(SpaceId s) {
    switch (s) {
        case SpaceId::P0: return "p0";
        case SpaceId::P1: return "p1";
        case SpaceId::RWG: return "rwg";
        case SpaceId::RotRWG: return "rot_rwg";
        case SpaceId::HR: return "HR";
        case SpaceId::HT: return "HT";
    }
    return "?";
}

int space_dim(const TraceSpaces& sp, SpaceId s) {
    switch (s) {
        case SpaceId::P0: return sp.dim_p0();
        case SpaceId::P1: return sp.dim_p1();
        case SpaceId::RWG:
        case SpaceId::RotRWG: return sp.dim_edge();
        case SpaceId::HR: return sp.dim_hr();
        case SpaceId::HT: return sp.dim_ht();
    }
    return 0;
}

namespace {

struct PanelData {
    Vec3 v[3];
    Vec3 n;
    double area;
    int id;
    int vid[3];
    int eid[3];
    std::array<int, 3> key;  ///< sorted vertex ids; canonical pair ordering
    double coef[3];          ///< rwg: f_k(x) = coef[k] * (x - v[k])
    Vec3 curl[3];            ///< curl of hat k, constant per panel
};

PanelData make_panel(const TraceSpaces& sp, int t) {
    const SurfaceMesh& m = sp.mesh();
    PanelData p;
    p.id = t;
    const auto& tri = m.triangle(t);
    for (int k = 0; k < 3; ++k) {
        p.v[k] = m.vertex(tri[k]);
        p.vid[k] = tri[k];
        p.eid[k] = m.triangle_edges(t)[k];
        p.coef[k] = sp.rwg_sign(t, k) * m.edge(p.eid[k]).length / (2.0 * m.area(t));
        p.curl[k] = sp.curl_p1(t, k);
    }
    p.n = m.normal(t);
    p.area = m.area(t);
    p.key = {p.vid[0], p.vid[1], p.vid[2]};
    std::sort(p.key.begin(), p.key.end());
    return p;
}

// Per-pair, per-direction accumulators (x on panel P, y on panel Q).
struct LocalBlocks {
    double v00 = 0;
    double vt[9] = {0}, vr[9] = {0};
    double kp[3] = {0};   // Kp[vidP[i], Q]
    double kk[3] = {0};   // K [P, vidQ[j]]
    double n9[9] = {0};   // N [vidP[i], vidQ[j]]
    double c9[9] = {0};   // C [eidP[i], eidQ[j]]
    double kp00 = 0;      // Kp00[P, Q]
    double k11[9] = {0};  // K11[vidP[i], vidQ[j]]
    double n0[3] = {0};   // N0[P, vidQ[j]]
    double crot[9] = {0};
    double mf[3] = {0};   // MF[P, eidQ[j]]
    double cu[9] = {0};   // CU[eidP[i], vidQ[j]]
    double gp[3] = {0};   // GP[eidP[i], Q]
    double v10[3] = {0};  // V10[vidP[i], Q]

    void reset() { std::memset(this, 0, sizeof(*this)); }
};

struct Accumulator {
    unsigned flags;
    MatrixXd V00, VT, VR, Kp, K, N, C, Kp00, K11, N0, Crot, MF, CU, GP, V10;

    Accumulator(const TraceSpaces& sp, unsigned f) : flags(f) {
        const int F = sp.dim_p0(), E = sp.dim_edge(), V = sp.dim_p1();
        if (flags & kGrams) {
            V00 = MatrixXd::Zero(F, F);
            VT = MatrixXd::Zero(E, E);
        }
        if (flags & kGramR) VR = MatrixXd::Zero(E, E);
        if (flags & kRhsBlocks) {
            Kp = MatrixXd::Zero(V, F);
            K = MatrixXd::Zero(F, V);
            N = MatrixXd::Zero(V, V);
            C = MatrixXd::Zero(E, E);
        }
        if (flags & kCalderon) {
            Kp00 = MatrixXd::Zero(F, F);
            K11 = MatrixXd::Zero(V, V);
            N0 = MatrixXd::Zero(F, V);
            Crot = MatrixXd::Zero(E, E);
            MF = MatrixXd::Zero(F, E);
            CU = MatrixXd::Zero(E, V);
            GP = MatrixXd::Zero(E, F);
            V10 = MatrixXd::Zero(V, F);
        }
    }

    void add(const Accumulator& o) {
        if (flags & kGrams) {
            V00 += o.V00;
            VT += o.VT;
        }
        if (flags & kGramR) VR += o.VR;
        if (flags & kRhsBlocks) {
            Kp += o.Kp;
            K += o.K;
            N += o.N;
            C += o.C;
        }
        if (flags & kCalderon) {
            Kp00 += o.Kp00;
            K11 += o.K11;
            N0 += o.N0;
            Crot += o.Crot;
            MF += o.MF;
            CU += o.CU;
            GP += o.GP;
            V10 += o.V10;
        }
    }

    // Scatter one direction's local blocks with the physical scale factor.
    void scatter(const PanelData& P, const PanelData& Q, const LocalBlocks& L, double s) {
        if (flags & kGrams) {
            V00(P.id, Q.id) += s * L.v00;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) VT(P.eid[i], Q.eid[j]) += s * L.vt[3 * i + j];
        }
        if (flags & kGramR)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) VR(P.eid[i], Q.eid[j]) += s * L.vr[3 * i + j];
        if (flags & kRhsBlocks) {
            for (int i = 0; i < 3; ++i) Kp(P.vid[i], Q.id) += s * L.kp[i];
            for (int j = 0; j < 3; ++j) K(P.id, Q.vid[j]) += s * L.kk[j];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    N(P.vid[i], Q.vid[j]) += s * L.n9[3 * i + j];
                    C(P.eid[i], Q.eid[j]) += s * L.c9[3 * i + j];
                }
        }
        if (flags & kCalderon) {
            Kp00(P.id, Q.id) += s * L.kp00;
            for (int j = 0; j < 3; ++j) {
                N0(P.id, Q.vid[j]) += s * L.n0[j];
                MF(P.id, Q.eid[j]) += s * L.mf[j];
            }
            for (int i = 0; i < 3; ++i) {
                GP(P.eid[i], Q.id) += s * L.gp[i];
                V10(P.vid[i], Q.id) += s * L.v10[i];
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    K11(P.vid[i], Q.vid[j]) += s * L.k11[3 * i + j];
                    Crot(P.eid[i], Q.eid[j]) += s * L.crot[3 * i + j];
                    CU(P.eid[i], Q.vid[j]) += s * L.cu[3 * i + j];
                }
        }
    }
};

// One quadrature point pair, one direction: x on P, y on Q, g = grad_x G(x-y).
// `self` marks coincident flat pairs, where every double-layer-class kernel
// vanishes identically and is skipped.
inline void accumulate_point(unsigned flags, bool self, const PanelData& P, const PanelData& Q,
                             const double (&la)[3], const double (&lb)[3], const Vec3& x,
                             const Vec3& y, double w, double G, const Vec3& g, LocalBlocks& acc) {
    Vec3 fa[3], fb[3];
    for (int k = 0; k < 3; ++k) {
        fa[k] = P.coef[k] * (x - P.v[k]);
        fb[k] = Q.coef[k] * (y - Q.v[k]);
    }
    const double wG = w * G;

    if (flags & kGrams) {
        acc.v00 += wG;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) acc.vt[3 * i + j] += wG * fa[i].dot(fb[j]);
    }
    if (flags & kGramR) {
        Vec3 ra[3], rb[3];
        for (int k = 0; k < 3; ++k) {
            ra[k] = P.n.cross(fa[k]);
            rb[k] = Q.n.cross(fb[k]);
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) acc.vr[3 * i + j] += wG * ra[i].dot(rb[j]);
    }

    if (flags & kRhsBlocks) {
        if (!self) {
            for (int i = 0; i < 3; ++i) {
                const double cdotn = P.curl[i].dot(Q.n);
                for (int j = 0; j < 3; ++j) acc.n9[3 * i + j] += wG * cdotn * lb[j];
            }
            const double gnx = g.dot(P.n), gny = g.dot(Q.n);
            for (int i = 0; i < 3; ++i) acc.kp[i] += w * gnx * la[i];
            for (int j = 0; j < 3; ++j) acc.kk[j] += w * gny * lb[j];
            Vec3 gxfb[3];
            for (int j = 0; j < 3; ++j) gxfb[j] = g.cross(fb[j]);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc.c9[3 * i + j] += w * fa[i].dot(gxfb[j]);
        }
    }
    if (flags & kCalderon) {
        for (int i = 0; i < 3; ++i) acc.v10[i] += wG * la[i];
        if (!self) {
            const double gnx = g.dot(P.n), gny = g.dot(Q.n);
            acc.kp00 += w * gnx;
            Vec3 ra[3], gxfb[3];
            for (int k = 0; k < 3; ++k) {
                ra[k] = P.n.cross(fa[k]);
                gxfb[k] = g.cross(fb[k]);
            }
            const double kn0 = g.dot(Q.n.cross(P.n));
            const Vec3 nxg = P.n.cross(g);
            const Vec3 gxny = g.cross(Q.n);
            for (int j = 0; j < 3; ++j) {
                acc.n0[j] += w * kn0 * lb[j];
                acc.mf[j] += w * nxg.dot(fb[j]);
            }
            for (int i = 0; i < 3; ++i) {
                acc.gp[i] += w * ra[i].dot(g);
                const double rig = ra[i].dot(gxny);
                for (int j = 0; j < 3; ++j) {
                    acc.k11[3 * i + j] += w * gny * la[i] * lb[j];
                    acc.crot[3 * i + j] += w * ra[i].dot(gxfb[j]);
                    acc.cu[3 * i + j] += w * rig * lb[j];
                }
            }
        }
    }
}

}  // namespace

AssemblyKit assemble_kit(const TraceSpaces& sp, const AssemblyOptions& opt) {
    const SurfaceMesh& m = sp.mesh();
    const int F = m.num_triangles();
    const unsigned flags = opt.flags;

    std::vector<PanelData> panels;
    panels.reserve(F);
    for (int t = 0; t < F; ++t) panels.push_back(make_panel(sp, t));

    const PairQuadrature pq(opt.quad);
    // Warm the rule caches so worker threads only read them.
    {
        PairRule tmp;
        PanelPairClass c;
        c.tag = PanelPairTag::Coincident;
        pq.build_rule_k(c, opt.quad.coincident_points, tmp);
        c.tag = PanelPairTag::EdgeAdjacent;
        pq.build_rule_k(c, opt.quad.adjacent_points, tmp);
        c.tag = PanelPairTag::VertexAdjacent;
        pq.build_rule_k(c, opt.quad.adjacent_points, tmp);
        c.tag = PanelPairTag::Separated;
        pq.build_rule_k(c, opt.quad.separated_far_points, tmp);
        pq.build_rule_k(c, opt.quad.separated_near_points, tmp);
        pq.build_rule_k(c, 2 * opt.quad.separated_near_points, tmp);
    }

    const int nthreads = std::max(1, opt.threads);
    // Split leading panel ranges so each thread sees a similar pair count.
    std::vector<int> row_start(nthreads + 1, F);
    row_start[0] = 0;
    {
        const double total = 0.5 * double(F) * double(F + 1);
        int th = 1;
        double acc = 0.0;
        for (int A = 0; A < F && th < nthreads; ++A) {
            acc += F - A;
            if (acc >= total * th / nthreads) row_start[th++] = A + 1;
        }
        for (; th < nthreads; ++th) row_start[th] = F;
    }

    std::vector<Accumulator> accs;
    accs.reserve(nthreads);
    for (int th = 0; th < nthreads; ++th) accs.emplace_back(sp, flags);

    auto worker = [&](int th) {
        Accumulator& acc = accs[th];
        PairRule rule;
        LocalBlocks ab, ba;
        for (int A = row_start[th]; A < row_start[th + 1]; ++A) {
            for (int B = A; B < F; ++B) {
                // Canonical role assignment by sorted vertex triples keeps
                // the integral values independent of the triangle order.
                const PanelData& pa =
                    panels[A].key <= panels[B].key ? panels[A] : panels[B];
                const PanelData& pb =
                    panels[A].key <= panels[B].key ? panels[B] : panels[A];
                const PanelPairClass cls = classify_pair(m.triangle(pa.id), m.triangle(pb.id));
                pq.build_rule(m, pa.id, pb.id, cls, rule);
                const bool self = (A == B);
                ab.reset();
                if (!self) ba.reset();
                const size_t nq = rule.size();
                for (size_t q = 0; q < nq; ++q) {
                    const auto& bca = rule.bary_a[q];
                    const auto& bcb = rule.bary_b[q];
                    const Vec3 x = bca[0] * pa.v[0] + bca[1] * pa.v[1] + bca[2] * pa.v[2];
                    const Vec3 y = bcb[0] * pb.v[0] + bcb[1] * pb.v[1] + bcb[2] * pb.v[2];
                    const Vec3 rvec = x - y;
                    const double rn = rvec.norm();
                    const double G = 1.0 / (4.0 * M_PI * rn);
                    const Vec3 g = -rvec * (G / (rn * rn));  // grad_x G(x-y)
                    const double w = rule.weights[q];
                    const double la[3] = {bca[0], bca[1], bca[2]};
                    const double lb[3] = {bcb[0], bcb[1], bcb[2]};
                    accumulate_point(flags, self, pa, pb, la, lb, x, y, w, G, g, ab);
                    if (!self) accumulate_point(flags, false, pb, pa, lb, la, y, x, w, G, -g, ba);
                }
                const double scale = 4.0 * pa.area * pb.area;
                acc.scatter(pa, pb, ab, scale);
                if (!self) acc.scatter(pb, pa, ba, scale);
            }
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int th = 0; th < nthreads; ++th) threads.emplace_back(worker, th);
        for (auto& t : threads) t.join();
    }
    for (int th = 1; th < nthreads; ++th) accs[0].add(accs[th]);

    AssemblyKit kit;
    kit.flags = flags;
    Accumulator& a0 = accs[0];
    // The transformed self-pair rules are x<->y symmetric only up to the
    // summation order; one symmetrization makes the Grams exactly symmetric.
    auto symmetrize = [](MatrixXd& M) { M = 0.5 * (M + M.transpose()).eval(); };
    if (flags & kGrams) {
        kit.V00 = std::move(a0.V00);
        kit.VT = std::move(a0.VT);
        symmetrize(kit.V00);
        symmetrize(kit.VT);
        kit.W = kit.VT * MatrixXd(curl_p1_to_rwg(sp));
    }
    if (flags & kGramR) {
        kit.VR = std::move(a0.VR);
        symmetrize(kit.VR);
    }
    if (flags & kRhsBlocks) {
        kit.Kp = std::move(a0.Kp);
        kit.K = std::move(a0.K);
        kit.N = std::move(a0.N);
        kit.C = std::move(a0.C);
    }
    if (flags & kCalderon) {
        kit.Kp00 = std::move(a0.Kp00);
        kit.K11 = std::move(a0.K11);
        kit.N0 = std::move(a0.N0);
        kit.Crot = std::move(a0.Crot);
        kit.MF = std::move(a0.MF);
        kit.CU = std::move(a0.CU);
        kit.GP = std::move(a0.GP);
        kit.V10 = std::move(a0.V10);
    }
    return kit;
}

OperatorBlock assemble_slp_scalar(const TraceSpaces& sp, const AssemblyKit& kit) {
    (void)sp;
    return {kit.V00, SpaceId::P0, SpaceId::P0, "slp_scalar"};
}

OperatorBlock assemble_slp_tangential(const TraceSpaces& sp, const AssemblyKit& kit,
                                      char variant) {
    (void)sp;
    if (variant == 'T' || variant == 't') return {kit.VT, SpaceId::RWG, SpaceId::RWG, "slp_T"};
    if (variant == 'R' || variant == 'r') {
        if (kit.VR.size() == 0)
            throw std::invalid_argument("assemble_slp_tangential: kit lacks the R-variant Gram");
        return {kit.VR, SpaceId::RWG, SpaceId::RWG, "slp_R"};
    }
    throw std::invalid_argument("assemble_slp_tangential: variant must be 'T' or 'R'");
}

OperatorBlock assemble_BT(const TraceSpaces& sp, const AssemblyKit& kit) {
    const int F = sp.dim_p0(), E = sp.dim_edge(), V = sp.dim_p1();
    const SparseMat Ddiv = surf_div_rwg(sp);
    const MatrixXd VD = kit.V00 * Ddiv;  // F x E

    MatrixXd B = MatrixXd::Zero(F + E + V, F + E + V);
    B.block(0, F, F, E) = -VD;
    B.block(F, 0, E, F) = -VD.transpose();
    B.block(F, F + E, E, V) = kit.W;
    B.block(F + E, F, V, E) = kit.W.transpose();
    return {std::move(B), SpaceId::HR, SpaceId::HR, "B_T"};
}

OperatorBlock assemble_BR(const TraceSpaces& sp, const AssemblyKit& kit) {
    const int F = sp.dim_p0(), E = sp.dim_edge(), V = sp.dim_p1();
    const SparseMat Ddiv = surf_div_rwg(sp);
    const MatrixXd VD = kit.V00 * Ddiv;

    MatrixXd B = MatrixXd::Zero(V + E + F, V + E + F);
    B.block(0, V, V, E) = kit.W.transpose();
    B.block(V, 0, E, V) = kit.W;
    B.block(V, V + E, E, F) = VD.transpose();
    B.block(V + E, V, F, E) = VD;
    return {std::move(B), SpaceId::HT, SpaceId::HT, "B_R"};
}

MatrixXd assemble_avg_RT(const TraceSpaces& sp, const AssemblyKit& kit) {
    const int F = sp.dim_p0(), E = sp.dim_edge(), V = sp.dim_p1();
    MatrixXd M = MatrixXd::Zero(V + E + F, F + E + V);
    M.block(0, 0, V, F) = kit.Kp;
    M.block(0, F + E, V, V) = kit.N;
    M.block(V, F, E, E) = -kit.C;
    M.block(V + E, F + E, F, V) = kit.K;
    return M;
}

MatrixXd assemble_avg_TR(const TraceSpaces& sp, const AssemblyKit& kit) {
    const int F = sp.dim_p0(), E = sp.dim_edge(), V = sp.dim_p1();
    MatrixXd M = MatrixXd::Zero(F + E + V, V + E + F);
    M.block(0, 0, F, V) = kit.K;
    M.block(F, V, E, E) = kit.C;
    M.block(F + E, 0, V, V) = -kit.N;
    M.block(F + E, V + E, V, F) = kit.Kp;
    return M;
}

OperatorBlock assemble_duality_mass(const TraceSpaces& sp) {
    return {MatrixXd(duality_pairing(sp)), SpaceId::HT, SpaceId::HR, "duality_mass"};
}

SparseMat xi_matrix(const TraceSpaces& sp) {
    const int F = sp.dim_p0(), E = sp.dim_edge(), V = sp.dim_p1();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(F + E + V);
    for (int i = 0; i < F; ++i) trip.emplace_back(i, V + E + i, -1.0);
    for (int i = 0; i < E; ++i) trip.emplace_back(F + i, V + i, 1.0);
    for (int i = 0; i < V; ++i) trip.emplace_back(F + E + i, i, 1.0);
    SparseMat X(F + E + V, V + E + F);
    X.setFromTriplets(trip.begin(), trip.end());
    return X;
}

TraceR xi_map(const TraceSpaces& sp, const TraceT& b) {
    (void)sp;
    TraceR a;
    a.a0 = -b.b2;
    a.a1 = rotate(RotateDir::RotToRWG, b.b1);
    a.a2 = b.b0;
    return a;
}

TraceT xi_inverse(const TraceSpaces& sp, const TraceR& a) {
    (void)sp;
    TraceT b;
    b.b0 = a.a2;
    b.b1 = -rotate(RotateDir::RWGtoRot, a.a1);
    b.b2 = -a.a0;
    return b;
}

}  // namespace dirac
