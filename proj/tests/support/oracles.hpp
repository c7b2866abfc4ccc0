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

// Test-only reference quadrature, independent of the production integration
// path: the inner single-layer integral over a flat triangle is evaluated in
// closed form (the classical edge-wise log/atan expansion), the outer
// integral by uniformly refined high-order rules until convergence.

#pragma once

#include <cmath>

#include "dirac/quadrature.hpp"

namespace dirac::testing {

/// Closed-form  int_T 1/|r - y| dA(y)  over the flat triangle (p0,p1,p2).
inline double analytic_inv_r_integral(const Vec3& r, const Vec3& p0, const Vec3& p1,
                                      const Vec3& p2) {
    const Vec3 nhat = (p1 - p0).cross(p2 - p0).normalized();
    const double w0 = nhat.dot(r - p0);
    const Vec3 rho = r - w0 * nhat;
    const Vec3 verts[4] = {p0, p1, p2, p0};

    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3& a = verts[i];
        const Vec3& b = verts[i + 1];
        const Vec3 lhat = (b - a).normalized();
        const Vec3 uhat = lhat.cross(nhat);  // outward in-plane edge normal
        const double sm = (a - rho).dot(lhat);
        const double sp = (b - rho).dot(lhat);
        const double t = (a - rho).dot(uhat);
        const double R02 = t * t + w0 * w0;
        const double Rm = std::sqrt(R02 + sm * sm);
        const double Rp = std::sqrt(R02 + sp * sp);

        if (std::abs(t) < 1e-14 && std::abs(w0) < 1e-14) continue;  // on the edge line

        double logterm;
        if (Rm + sm > Rp - sp)
            logterm = std::log((Rp + sp) / (Rm + sm));
        else
            logterm = std::log((Rm - sm) / (Rp - sp));  // equivalent, stable when s < 0

        const double atp = std::atan2(t * sp, R02 + std::abs(w0) * Rp);
        const double atm = std::atan2(t * sm, R02 + std::abs(w0) * Rm);
        total += t * logterm - std::abs(w0) * (atp - atm);
    }
    return total;
}

/// Reference  iint_{A x B} fa(x) G(x-y) fb(y)  with analytic inner integral
/// and uniformly refined outer integration (degree-6 rule per cell); refines
/// until the relative change drops below rtol.
inline double reference_single_layer(const Vec3& a0, const Vec3& a1, const Vec3& a2,
                                     const Vec3& b0, const Vec3& b1, const Vec3& b2,
                                     const ScalarShape& fa, const ScalarShape& fb,
                                     double rtol = 1e-9, int max_level = 6) {
    // fb must be constant for the analytic inner form; linear densities are
    // reduced by outer-level subdivision of B instead. Restrict to the cases
    // the tests need: constant fb.
    const TriangleRule& rule = gauss_triangle(6);

    auto outer_integrate = [&](int level) {
        // Uniform 4^level subdivision of the outer triangle A.
        double acc = 0.0;
        const int n = 1 << level;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j + i < n; ++j) {
                // Two sub-triangles of the (i,j) cell in barycentric grid.
                auto corner = [&](int bi, int bj) {
                    const double u = double(bi) / n, v = double(bj) / n;
                    return Vec3(a0 + u * (a1 - a0) + v * (a2 - a0));
                };
                const Vec3 c00 = corner(i, j), c10 = corner(i + 1, j), c01 = corner(i, j + 1);
                std::vector<std::array<Vec3, 3>> cells;
                cells.push_back({c00, c10, c01});
                if (j + i + 1 < n) cells.push_back({c10, corner(i + 1, j + 1), c01});
                for (const auto& cell : cells) {
                    const double jac = (cell[1] - cell[0]).cross(cell[2] - cell[0]).norm();
                    for (size_t q = 0; q < rule.points.size(); ++q) {
                        const double u = rule.points[q][0], v = rule.points[q][1];
                        const Vec3 x = cell[0] + u * (cell[1] - cell[0]) + v * (cell[2] - cell[0]);
                        const double inner = analytic_inv_r_integral(x, b0, b1, b2);
                        acc += rule.weights[q] * jac * fa(x) * fb.c * inner;
                    }
                }
            }
        }
        return acc / (4.0 * M_PI);
    };

    double prev = outer_integrate(1);
    for (int level = 2; level <= max_level; ++level) {
        const double cur = outer_integrate(level);
        const double diff = cur - prev;
        if (std::abs(diff) <= rtol * std::abs(cur)) return cur;
        if (level == max_level) {
            // The uniform refinement converges as O(4^-level); one Richardson
            // step recovers two to three extra digits.
            return cur + diff / 3.0;
        }
        prev = cur;
    }
    return prev;
}

/// Convenience overload on mesh panels with unit densities.
inline double reference_single_layer(const SurfaceMesh& m, int ta, int tb, double rtol = 1e-9) {
    const auto& A = m.triangle(ta);
    const auto& B = m.triangle(tb);
    return reference_single_layer(m.vertex(A[0]), m.vertex(A[1]), m.vertex(A[2]), m.vertex(B[0]),
                                  m.vertex(B[1]), m.vertex(B[2]), ScalarShape{}, ScalarShape{},
                                  rtol);
}

}  // namespace dirac::testing
