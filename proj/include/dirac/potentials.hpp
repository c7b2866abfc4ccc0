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

#include "dirac/spaces.hpp"

namespace dirac {

using Vec8 = Eigen::Matrix<double, 8, 1>;

/// Sampled 8-component field value (U0, U1 in R^3, U2 in R^3, U3).
struct FieldSample {
    Vec3 point;
    Vec8 value;
};

/// Three-component trace bundles evaluated pointwise from an 8-vector:
///   gamma_T U = (U0, n x (U1 x n), U2.n)    -> (scalar, tangential, scalar)
///   gamma_R U = (U1.n, U2 x n, U3)
struct TraceTSample {
    double s0;
    Vec3 t1;
    double s2;
};
struct TraceRSample {
    double s0;
    Vec3 t1;
    double s2;
};
TraceTSample gamma_T(const Vec8& u, const Vec3& n);
TraceRSample gamma_R(const Vec8& u, const Vec3& n);

enum class Side { Interior, Exterior };
enum class PotentialKind { LT, LR };

/// Off-surface evaluation of the surface potentials. Panels are integrated
/// with regular Gauss rules; panels close to the evaluation point are
/// subdivided recursively until child size is small against the distance.
class PotentialEvaluator {
public:
    PotentialEvaluator(const TraceSpaces& sp, int base_order = 4);

    /// L_T(a) = (-div Psi(a1), grad psi(a0) + curl Ups(a2), curl Psi(a1), div Ups(a2)).
    Vec8 eval_LT(const TraceR& a, const Vec3& x) const;
    /// L_R(b) = (div Ups(b0), curl Psi(b1 x n), -curl Ups(b0) + grad psi(b2), div Psi(b1 x n)).
    Vec8 eval_LR(const TraceT& b, const Vec3& x) const;

    std::vector<FieldSample> eval_LT(const TraceR& a, const std::vector<Vec3>& pts) const;
    std::vector<FieldSample> eval_LR(const TraceT& b, const std::vector<Vec3>& pts) const;

    /// Interior: L_T(gamma_R U) + L_R(gamma_T U); exterior: the negatives.
    Vec8 represent(const TraceR& a, const TraceT& b, Side side, const Vec3& x) const;

    /// Winding number of the surface around x (1 inside, 0 outside).
    double winding_number(const Vec3& x) const;

    const TraceSpaces& spaces() const { return *sp_; }

private:
    template <typename DensityFn>
    void integrate(const Vec3& x, DensityFn&& fn) const;

    const TraceSpaces* sp_;
    int base_order_;
};

struct JumpReport {
    // Relative deviations of the probed jumps from their expected values,
    // per trace component ([gamma_T] then [gamma_R], components 0..2).
    // Expected: [gamma_T]L_T = 0, [gamma_R]L_T = Id; mirrored for L_R.
    std::array<double, 3> dev_gamma_T{};
    std::array<double, 3> dev_gamma_R{};
    bool converged = true;  ///< Richardson inputs behaved (order >= ~1)
    double observed_order = 0.0;
};

/// Probes the jump relations at sampled face centroids, offsets x +- delta n
/// with two-point Richardson extrapolation (delta, delta/2).
JumpReport jump_probe(const PotentialEvaluator& ev, PotentialKind kind, const TraceR& a,
                      const TraceT& b, int sample_count, double delta_rel = 0.25);

struct DecayReport {
    double exponent = 0.0;  ///< least-squares slope of log|field| vs log r
    bool zero_field = false;
    std::vector<double> radii;
    std::vector<double> norms;
};

/// Fits the far-field decay exponent over sampled directions.
DecayReport decay_probe(const PotentialEvaluator& ev, PotentialKind kind, const TraceR& a,
                        const TraceT& b, const std::vector<double>& radii);

/// Central finite-difference Dirac residual |D U| / |U| at x using stencil
/// evaluations of the given field.
double fd_dirac_residual(const std::function<Vec8(const Vec3&)>& field, const Vec3& x, double h);

/// CSV dump: x,y,z,U0..U7 per row.
void write_field_csv(const std::vector<FieldSample>& samples, const std::string& path);

}  // namespace dirac
