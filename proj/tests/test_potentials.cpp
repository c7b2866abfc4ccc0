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

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dirac/bvp.hpp"
#include "dirac/potentials.hpp"

using namespace dirac;

namespace {

struct Setup {
    SurfaceMesh mesh;
    TraceSpaces sp;
    PotentialEvaluator ev;
    explicit Setup(int lvl) : mesh(sphere_mesh(lvl)), sp(mesh), ev(sp) {}
};

}  // namespace

TEST_CASE("zero densities give zero fields") {
    Setup s(1);
    const TraceR a = TraceR::zero(s.sp);
    const TraceT b = TraceT::zero(s.sp);
    CHECK(s.ev.eval_LT(a, Vec3(0.1, 0.2, 0.0)).norm() == 0.0);
    CHECK(s.ev.eval_LR(b, Vec3(2.0, 0.0, 0.0)).norm() == 0.0);
}

TEST_CASE("formula structure: which density feeds which component") {
    Setup s(1);
    // U3 of L_T depends only on a2
    TraceR a = smooth_trace_R(s.sp);
    a.a2.setZero();
    const Vec8 u = s.ev.eval_LT(a, Vec3(0.3, -0.1, 0.2));
    CHECK(u[7] == 0.0);
    // U0 of L_R depends only on b0
    TraceT b = smooth_trace_T(s.sp);
    b.b0.setZero();
    const Vec8 v = s.ev.eval_LR(b, Vec3(1.7, 0.4, -0.2));
    CHECK(v[0] == 0.0);
    TraceT b2 = TraceT::zero(s.sp);
    b2.b0 = smooth_trace_T(s.sp).b0;
    CHECK(s.ev.eval_LR(b2, Vec3(1.7, 0.4, -0.2))[0] != 0.0);
}

TEST_CASE("linearity / superposition") {
    Setup s(1);
    const TraceR a1 = smooth_trace_R(s.sp);
    TraceR a2 = TraceR::zero(s.sp);
    a2.a0.setConstant(0.3);
    a2.a1.setLinSpaced(s.sp.dim_edge(), -1.0, 1.0);
    TraceR sum = TraceR::zero(s.sp);
    sum.a0 = a1.a0 + 2.0 * a2.a0;
    sum.a1 = a1.a1 + 2.0 * a2.a1;
    sum.a2 = a1.a2 + 2.0 * a2.a2;
    const Vec3 x(0.2, 0.1, -0.3);
    const Vec8 u = s.ev.eval_LT(sum, x);
    const Vec8 v = s.ev.eval_LT(a1, x) + 2.0 * s.ev.eval_LT(a2, x);
    CHECK((u - v).norm() <= 1e-13 * v.norm());
}

TEST_CASE("potentials solve the homogeneous Dirac equation (FD oracle)") {
    Setup s(2);
    const TraceR a = smooth_trace_R(s.sp);
    const TraceT b = smooth_trace_T(s.sp);
    for (const Vec3& x : {Vec3(0.2, 0.05, 0.1), Vec3(-0.15, 0.25, -0.1)}) {
        const double rt =
            fd_dirac_residual([&](const Vec3& p) { return s.ev.eval_LT(a, p); }, x, 1e-4);
        CHECK(rt < 1e-4);
        const double rr =
            fd_dirac_residual([&](const Vec3& p) { return s.ev.eval_LR(b, p); }, x, 1e-4);
        CHECK(rr < 1e-4);
    }
    // residual tends to zero under quadrature-order increase, down to the
    // finite-difference stencil floor (~1e-9 at h = 1e-4)
    PotentialEvaluator ev2(s.sp, 2);
    PotentialEvaluator ev6(s.sp, 6);
    const Vec3 x(0.31, -0.22, 0.11);
    const double r2 = fd_dirac_residual([&](const Vec3& p) { return ev2.eval_LT(a, p); }, x, 1e-4);
    const double r6 = fd_dirac_residual([&](const Vec3& p) { return ev6.eval_LT(a, p); }, x, 1e-4);
    CHECK(r2 < 1e-4);
    CHECK(r6 < 1e-8);
    CHECK(r6 <= std::max(r2, 1e-8));
}

TEST_CASE("jump relations at sphere level 2") {
    Setup s(2);
    const TraceR a = smooth_trace_R(s.sp);
    const TraceT b = smooth_trace_T(s.sp);

    const JumpReport lt = jump_probe(s.ev, PotentialKind::LT, a, b, 24);
    for (double d : lt.dev_gamma_T) CHECK(d < 2e-2);  // [gamma_T] L_T = 0
    for (double d : lt.dev_gamma_R) CHECK(d < 5e-2);  // [gamma_R] L_T = Id
    CHECK(lt.observed_order > 0.7);
    CHECK(lt.converged);

    const JumpReport lr = jump_probe(s.ev, PotentialKind::LR, a, b, 24);
    for (double d : lr.dev_gamma_R) CHECK(d < 2e-2);  // [gamma_R] L_R = 0
    for (double d : lr.dev_gamma_T) CHECK(d < 5e-2);  // [gamma_T] L_R = Id
}

TEST_CASE("zero density jumps are exactly zero") {
    Setup s(1);
    const JumpReport rep =
        jump_probe(s.ev, PotentialKind::LR, TraceR::zero(s.sp), TraceT::zero(s.sp), 8);
    for (double d : rep.dev_gamma_T) CHECK(d == 0.0);
    for (double d : rep.dev_gamma_R) CHECK(d == 0.0);
}

TEST_CASE("far-field decay exponent") {
    Setup s(1);
    const TraceR a = smooth_trace_R(s.sp);
    const TraceT b = smooth_trace_T(s.sp);
    const DecayReport dt = decay_probe(s.ev, PotentialKind::LT, a, b, {4, 8, 16, 32});
    CHECK(!dt.zero_field);
    CHECK(std::abs(dt.exponent + 2.0) < 0.2);
    const DecayReport dr = decay_probe(s.ev, PotentialKind::LR, a, b, {4, 8, 16, 32});
    CHECK(std::abs(dr.exponent + 2.0) < 0.2);

    // zero density flags an identically zero field
    const DecayReport zz =
        decay_probe(s.ev, PotentialKind::LT, TraceR::zero(s.sp), TraceT::zero(s.sp), {4, 8});
    CHECK(zz.zero_field);

    // doubling the density doubles the field at every radius
    TraceR a2 = a;
    a2.a0 *= 2.0;
    a2.a1 *= 2.0;
    a2.a2 *= 2.0;
    const DecayReport d2 = decay_probe(s.ev, PotentialKind::LT, a2, b, {4, 8});
    // b is unused for kind LT
    CHECK(d2.norms[0] == doctest::Approx(2.0 * dt.norms[0]).epsilon(1e-12));
}

TEST_CASE("interior representation of a constant field") {
    Setup s(2);
    const ManufacturedCase mc = manufactured_case("constant-field");
    const TraceR a = interp_traceR(s.sp, mc.field);
    const TraceT b = interp_traceT(s.sp, mc.field);
    for (const Vec3& x : {Vec3(0, 0, 0), Vec3(0.1, -0.05, 0.2), Vec3(-0.3, 0.2, 0.1)}) {
        const Vec8 u = s.ev.represent(a, b, Side::Interior, x);
        const Vec8 ue = mc.field(x);
        CHECK((u - ue).norm() / ue.norm() < 1e-2);
    }
}

TEST_CASE("constant scalar field: inside c, outside 0") {
    Setup s(2);
    const ManufacturedCase mc = manufactured_case("constant-scalar");
    const TraceR a = interp_traceR(s.sp, mc.field);  // = 0
    const TraceT b = interp_traceT(s.sp, mc.field);  // = (c, 0, 0)
    CHECK(a.stacked().norm() == 0.0);
    const Vec8 inside = s.ev.represent(a, b, Side::Interior, Vec3(0.2, 0.1, -0.1));
    CHECK(inside[0] == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(inside.tail<7>().norm() < 2e-3);
    const Vec8 outside = s.ev.eval_LR(b, Vec3(2.5, 0.0, 0.5));
    CHECK(outside.norm() < 2e-3);
}

TEST_CASE("exterior representation of a decaying harmonic field") {
    Setup s(2);
    const ManufacturedCase mc = manufactured_case("coulomb");
    const TraceR a = interp_traceR(s.sp, mc.field);
    const TraceT b = interp_traceT(s.sp, mc.field);
    const Vec3 x(3.0, 0.4, -0.2);
    const Vec8 u = s.ev.represent(a, b, Side::Exterior, x);
    const Vec8 ue = mc.field(x);
    CHECK((u - ue).norm() / ue.norm() < 2e-2);
}

TEST_CASE("winding number distinguishes the sides") {
    Setup s(1);
    CHECK(s.ev.winding_number(Vec3(0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.ev.winding_number(Vec3(0.4, -0.2, 0.3)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.ev.winding_number(Vec3(2.0, 0.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("field CSV dump") {
    Setup s(0);
    const TraceR a = smooth_trace_R(s.sp);
    const std::vector<Vec3> pts = {Vec3(2, 0, 0), Vec3(0, 3, 0)};
    const auto samples = s.ev.eval_LT(a, pts);
    const std::string path = "test_field.csv";
    write_field_csv(samples, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "x,y,z,U0,U1x,U1y,U1z,U2x,U2y,U2z,U3");
    int rows = 0;
    std::string line;
    while (std::getline(f, line)) ++rows;
    CHECK(rows == 2);
    f.close();
    std::remove(path.c_str());
}
