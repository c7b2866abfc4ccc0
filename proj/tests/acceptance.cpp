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

// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <vector>

#include "dirac/bvp.hpp"
#include "support/meshes.hpp"
#include "support/oracles.hpp"

using namespace dirac;
using clk = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double component_scale(const TraceSpaces& sp, const SparseMat& Mrwg, const TraceT& b) {
    const double n0 = std::sqrt(b.b0.dot(MatrixXd(mass_p1(sp)) * b.b0));
    const double n1 = std::sqrt(b.b1.dot(Mrwg * b.b1));
    const double n2 = l2_norm_p0(sp, b.b2);
    return std::max({n0, n1, n2, 1e-300});
}

double component_scale(const TraceSpaces& sp, const SparseMat& Mrwg, const TraceR& a) {
    const double n0 = l2_norm_p0(sp, a.a0);
    const double n1 = std::sqrt(a.a1.dot(Mrwg * a.a1));
    const double n2 = std::sqrt(a.a2.dot(MatrixXd(mass_p1(sp)) * a.a2));
    return std::max({n0, n1, n2, 1e-300});
}

struct KernelCase {
    std::string name;
    SurfaceMesh mesh;
    int expected;
};

}  // namespace

int main() {
    // ---- criteria 1 + 2: kernel dimension = Betti sum, kernel structure ----
    {
        std::vector<KernelCase> cases;
        cases.push_back({"sphere subdiv 2", sphere_mesh(2), 2});
        cases.push_back({"torus 12x12", torus_mesh(12, 12, 2.0, 0.7), 4});
        cases.push_back({"two disjoint spheres", two_spheres_mesh(1), 4});

        bool dims_ok = true, gaps_ok = true, time_ok = true, struct_ok = true;
        std::string detail;
        for (auto& kc : cases) {
            const auto t0 = clk::now();
            BemWorkspace ws(std::move(kc.mesh));
            const NullspaceResult& nsR = ws.kernel_BR();
            const NullspaceResult& nsT = ws.kernel_BT();
            const double secs = std::chrono::duration<double>(clk::now() - t0).count();
            const int betti = topology(ws.mesh()).betti_sum();
            dims_ok &= (nsR.dim == kc.expected && nsT.dim == kc.expected &&
                        betti == kc.expected);
            gaps_ok &= nsR.clean_gap && nsT.clean_gap;
            time_ok &= secs < 120.0;
            detail += kc.name + ": dim " + std::to_string(nsR.dim) + "/" +
                      std::to_string(nsT.dim) + " vs betti " + std::to_string(betti) + " (" +
                      fmt(secs) + "s); ";

            // criterion 2: structural conditions on every kernel vector
            const TraceSpaces& sp = ws.spaces();
            const SparseMat Mrwg = mass_rwg(sp);
            const SparseMat Dcurl = scalar_curl_rotrwg(sp);
            const SparseMat Ddiv = surf_div_rwg(sp);
            for (int k = 0; k < nsR.dim; ++k) {
                const TraceT b = TraceT::from_stacked(sp, nsR.basis.col(k));
                const double scale = component_scale(sp, Mrwg, b);
                struct_ok &= l2_norm_p0(sp, VectorXd(Dcurl * b.b1)) < 1e-6 * scale;
                struct_ok &= l2_norm_p1_gradient(sp, b.b0) < 1e-6 * scale;
            }
            for (int k = 0; k < nsT.dim; ++k) {
                const TraceR a = TraceR::from_stacked(sp, nsT.basis.col(k));
                const double scale = component_scale(sp, Mrwg, a);
                struct_ok &= l2_norm_p0(sp, VectorXd(Ddiv * a.a1)) < 1e-6 * scale;
                // |curl_G xi| = |grad_G xi| pointwise
                struct_ok &= l2_norm_p1_gradient(sp, a.a2) < 1e-6 * scale;
            }
        }
        report(1, dims_ok && gaps_ok && time_ok,
               "kernel dim = Betti sum with spectral gap >= 100 -- " + detail);
        report(2, struct_ok,
               "kernel vectors satisfy div/curl/locally-constant conditions < 1e-6");
    }

    // ---- criterion 3: jump relations on sphere subdiv 3 ----
    {
        SurfaceMesh m = sphere_mesh(3);
        TraceSpaces sp(m);
        PotentialEvaluator ev(sp);
        const TraceR a = smooth_trace_R(sp);
        const TraceT b = smooth_trace_T(sp);
        const JumpReport lt = jump_probe(ev, PotentialKind::LT, a, b, 32);
        const JumpReport lr = jump_probe(ev, PotentialKind::LR, a, b, 32);
        double lt_zero = 0, lt_id = 0, lr_zero = 0, lr_id = 0;
        for (int k = 0; k < 3; ++k) {
            lt_zero = std::max(lt_zero, lt.dev_gamma_T[k]);
            lt_id = std::max(lt_id, lt.dev_gamma_R[k]);
            lr_zero = std::max(lr_zero, lr.dev_gamma_R[k]);
            lr_id = std::max(lr_id, lr.dev_gamma_T[k]);
        }
        const bool ok = lt_zero < 2e-2 && lt_id < 5e-2 && lr_zero < 2e-2 && lr_id < 5e-2;
        report(3, ok,
               "jump relations: [gT]LT " + fmt(lt_zero) + " (<2e-2), [gR]LT-Id " + fmt(lt_id) +
                   " (<5e-2), [gR]LR " + fmt(lr_zero) + ", [gT]LR-Id " + fmt(lr_id));
    }

    // ---- criterion 4: potentials solve the homogeneous Dirac equation ----
    {
        SurfaceMesh m = sphere_mesh(2);
        TraceSpaces sp(m);
        PotentialEvaluator ev(sp);
        const TraceR a = smooth_trace_R(sp);
        const TraceT b = smooth_trace_T(sp);
        double worst = 0.0;
        for (const Vec3& x : {Vec3(0.2, 0.05, 0.1), Vec3(-0.25, 0.15, -0.05), Vec3(0, 0.3, 0.2)}) {
            worst = std::max(worst, fd_dirac_residual(
                                        [&](const Vec3& p) { return ev.eval_LT(a, p); }, x, 1e-4));
            worst = std::max(worst, fd_dirac_residual(
                                        [&](const Vec3& p) { return ev.eval_LR(b, p); }, x, 1e-4));
        }
        report(4, worst < 1e-4, "finite-difference Dirac residual " + fmt(worst) + " (< 1e-4)");
    }

    // ---- criterion 5: representation formula, monotone under refinement ----
    {
        const std::vector<Vec3> probes = {Vec3(0, 0, 0), Vec3(0.15, -0.1, 0.2),
                                          Vec3(-0.2, 0.25, 0.05)};
        bool ok = true;
        std::string detail;
        for (const char* name : {"constant-field", "harmonic"}) {
            const ManufacturedCase mc = manufactured_case(name);
            double prev = -1.0;
            bool mono = true;
            double last = 0.0;
            for (int lvl : {1, 2, 3}) {
                SurfaceMesh m = sphere_mesh(lvl);
                TraceSpaces sp(m);
                PotentialEvaluator ev(sp);
                const TraceR a = interp_traceR(sp, mc.field);
                const TraceT b = interp_traceT(sp, mc.field);
                double err = 0.0;
                for (const Vec3& x : probes) {
                    const Vec8 u = ev.represent(a, b, Side::Interior, x);
                    const Vec8 ue = mc.field(x);
                    err = std::max(err, (u - ue).norm() / ue.norm());
                }
                if (prev >= 0 && err >= prev) mono = false;
                prev = err;
                last = err;
            }
            ok &= mono && last < 1e-2;
            detail += std::string(name) + " err(subdiv3) " + fmt(last) +
                      (mono ? " monotone; " : " NOT monotone; ");
        }
        report(5, ok, "representation formula at interior probes (< 1%): " + detail);
    }

    // ---- criterion 6: Calderon algebra ----
    {
        bool id_ok = true, mono_ok = true;
        double prev = -1.0;
        std::string seq;
        for (int lvl : {0, 1, 2}) {
            BemWorkspace ws(sphere_mesh(lvl));
            const CalderonReport rep = calderon_check(ws, nullptr, nullptr, true);
            id_ok &= rep.id_residual == 0.0;
            if (prev >= 0 && rep.projector_residual >= prev) mono_ok = false;
            prev = rep.projector_residual;
            seq += fmt(rep.projector_residual) + " ";
        }
        // valid Cauchy data at subdiv 3, matrix-free application
        BemWorkspace ws3(sphere_mesh(3));
        const ManufacturedCase mc = manufactured_case("constant-field");
        const TraceR a = interp_traceR(ws3.spaces(), mc.field);
        const TraceT b = interp_traceT(ws3.spaces(), mc.field);
        const CalderonReport rep3 = calderon_check(ws3, &a, &b, false);
        const bool cauchy_ok = rep3.cauchy_residual < 5e-2;
        report(6, id_ok && mono_ok && cauchy_ok,
               "Calderon: |P-+P+-Id| = 0, projector residual " + seq +
                   "(decreasing), |P+ data| " + fmt(rep3.cauchy_residual) + " (< 5e-2)");

        // ---- criterion 7: first-kind solve (reuses the subdiv-3 workspace) ----
        {
            bool ok = true;
            std::string detail;
            double prev_cf = -1.0, last_cf = 0.0, mult3 = 0.0;
            double prev_h = -1.0;
            bool mono_cf = true, mono_h = true;
            for (int lvl : {1, 2, 3}) {
                BemWorkspace wsl(sphere_mesh(lvl));
                BemWorkspace* ws = lvl == 3 ? &ws3 : &wsl;
                const ManufacturedCase cf = manufactured_case("constant-field");
                const BvpSolution s =
                    solve_bvp_R(*ws, interp_traceR(ws->spaces(), cf.field));
                const double err = trace_error_T(
                    ws->spaces(), TraceT::from_stacked(ws->spaces(), s.unknown), cf.field);
                if (prev_cf >= 0 && err >= prev_cf) mono_cf = false;
                prev_cf = err;
                last_cf = err;
                if (lvl == 3) mult3 = s.multiplier.norm() / s.unknown.norm();

                const ManufacturedCase hc = manufactured_case("harmonic");
                const BvpSolution sh =
                    solve_bvp_R(*ws, interp_traceR(ws->spaces(), hc.field));
                const double errh = trace_error_T(
                    ws->spaces(), TraceT::from_stacked(ws->spaces(), sh.unknown), hc.field);
                if (prev_h >= 0 && errh >= prev_h) mono_h = false;
                prev_h = errh;
                if (lvl == 3) detail += "harmonic err " + fmt(errh) + "; ";
            }
            ok = last_cf < 5e-2 && mono_cf && mono_h && mult3 < 1e-6;
            report(7, ok,
                   "DtN recovery err(subdiv3) " + fmt(last_cf) + " (< 5e-2, monotone " +
                       (mono_cf ? "yes" : "NO") + "), multiplier " + fmt(mult3) +
                       " (< 1e-6), " + detail + std::string("harmonic monotone ") +
                       (mono_h ? "yes" : "NO"));
        }
    }

    // ---- criteria 8 + 9: duality/Xi and symmetry/structure ----
    {
        BemWorkspace ws(sphere_mesh(2));
        const MatrixXd& BT = ws.BT();
        const MatrixXd& BR = ws.BR();
        const SparseMat X = xi_matrix(ws.spaces());
        const double conj = (MatrixXd(X.transpose() * BT * X) - BR).norm() / BR.norm();

        const ManufacturedCase mc = manufactured_case("constant-scalar");
        const TraceT b = interp_traceT(ws.spaces(), mc.field);
        const BvpSolution direct = solve_bvp_T(ws, b, false);
        const BvpSolution viaxi = solve_bvp_T(ws, b, true);
        const double path = (direct.unknown - viaxi.unknown).norm() / direct.unknown.norm();
        report(8, conj <= 1e-10 && path <= 1e-8,
               "Xi-conjugated B_T vs B_R " + fmt(conj) + " (<= 1e-10), Xi-path vs direct " +
                   fmt(path) + " (<= 1e-8)");

        const double symT = (BT - BT.transpose()).norm() / BT.norm();
        const double symR = (BR - BR.transpose()).norm() / BR.norm();
        double complex_max = 0.0;
        for (const SurfaceMesh& m : {sphere_mesh(2), torus_mesh(12, 12, 2.0, 0.7)}) {
            TraceSpaces sp(m);
            const MatrixXd Z = MatrixXd(surf_div_rwg(sp)) * MatrixXd(curl_p1_to_rwg(sp));
            complex_max = std::max(complex_max, Z.cwiseAbs().maxCoeff());
        }
        SurfaceMesh m1 = sphere_mesh(1);
        TraceSpaces sp1(m1);
        PotentialEvaluator ev1(sp1);
        const DecayReport dec =
            decay_probe(ev1, PotentialKind::LT, smooth_trace_R(sp1), smooth_trace_T(sp1),
                        {4, 8, 16, 32});
        const bool ok = symT <= 1e-12 && symR <= 1e-12 && complex_max < 1e-13 &&
                        std::abs(dec.exponent + 2.0) < 0.2;
        report(9, ok,
               "symmetry " + fmt(symT) + "/" + fmt(symR) + " (<= 1e-12), div curl = " +
                   fmt(complex_max) + " (< 1e-13), decay exponent " + fmt(dec.exponent) +
                   " (-2 +- 0.2)");
    }

    // ---- criterion 10: oracle equivalence on micro-meshes ----
    {
        bool ok = true;
        double worst = 0.0;
        // sharp-angled tetrahedron plus the icosahedron: every self entry
        std::vector<Vec3> tv = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        std::vector<std::array<int, 3>> tt = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}};
        SurfaceMesh tetra(std::move(tv), std::move(tt));
        for (const SurfaceMesh* m : {&tetra}) {
            TraceSpaces sp(*m);
            AssemblyOptions opt;
            const AssemblyKit kit = assemble_kit(sp, opt);
            for (int t = 0; t < m->num_triangles(); ++t) {
                const double ref = dirac::testing::reference_single_layer(*m, t, t, 1e-10);
                worst = std::max(worst, std::abs(kit.V00(t, t) - ref) / ref);
            }
        }
        SurfaceMesh ico = icosahedron_mesh();
        TraceSpaces spi(ico);
        const AssemblyKit kiti = assemble_kit(spi, AssemblyOptions{});
        for (int t = 0; t < 3; ++t) {
            const double ref = dirac::testing::reference_single_layer(ico, t, t, 1e-10);
            worst = std::max(worst, std::abs(kiti.V00(t, t) - ref) / ref);
        }
        ok = worst < 1e-6;
        report(10, ok,
               "assembled self-panel entries vs reference quadrature: worst rel dev " +
                   fmt(worst) + " (< 1e-6, 6 significant digits)");
    }

    printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
           g_failures);
    return g_failures == 0 ? 0 : 1;
}
