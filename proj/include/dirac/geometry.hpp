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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dirac {

using Vec3 = Eigen::Vector3d;

/// Raised on invalid input meshes (parse failures, non-manifold edges,
/// unorientable components, degenerate triangles) and bad generator
/// parameters.
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

enum class MeshFormat { Off, GmshAscii };

struct Edge {
    int v0 = -1;           ///< lower vertex index
    int v1 = -1;           ///< higher vertex index
    int tri_plus = -1;     ///< triangle traversing the edge as v0 -> v1
    int tri_minus = -1;    ///< triangle traversing the edge as v1 -> v0
    double length = 0.0;
};

struct TopologyReport {
    int beta0 = 0;
    int euler = 0;
    int beta1 = 0;
    int beta2 = 0;
    std::vector<int> genus;  ///< per connected component

    int betti_sum() const { return beta0 + beta1 + beta2; }
};

/// Closed, consistently oriented triangulated surface.
///
/// Normals point out of the enclosed volume Omega^- (into Omega^+); the
/// constructor repairs orientation per component and flips components whose
/// signed volume is negative. All derived quantities (edges, areas, normals)
/// are built once and the mesh is immutable afterwards.
class SurfaceMesh {
public:
    SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Vec3& vertex(int v) const { return vertices_[v]; }
    const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
    const Edge& edge(int e) const { return edges_[e]; }

    const Vec3& normal(int t) const { return normals_[t]; }
    double area(int t) const { return areas_[t]; }
    const Vec3& centroid(int t) const { return centroids_[t]; }
    double diameter(int t) const { return diameters_[t]; }

    /// Edge indices of triangle t, edge k opposite local vertex k.
    const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
    int component_of(int t) const { return tri_component_[t]; }

    double total_area() const { return total_area_; }
    double signed_volume() const { return signed_volume_; }
    double bbox_diagonal() const { return bbox_diagonal_; }
    double max_diameter() const { return max_diameter_; }

    /// FNV-1a hash of the quantized geometry, stable across runs.
    std::string hash() const;

private:
    void build_edges(bool strict = false);
    void orient();
    void compute_metrics();

    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<Vec3> normals_;
    std::vector<double> areas_;
    std::vector<Vec3> centroids_;
    std::vector<double> diameters_;
    std::vector<int> tri_component_;
    int num_components_ = 0;
    double total_area_ = 0.0;
    double signed_volume_ = 0.0;
    double bbox_diagonal_ = 0.0;
    double max_diameter_ = 0.0;
};

SurfaceMesh load_mesh(const std::string& path, MeshFormat format);
/// Detects the format from the file contents (OFF keyword / $MeshFormat).
SurfaceMesh load_mesh(const std::string& path);
void write_off(const SurfaceMesh& mesh, const std::string& path);

TopologyReport topology(const SurfaceMesh& mesh);

/// Uniform 1:4 edge-midpoint refinement; preserves topology and orientation.
SurfaceMesh refine(const SurfaceMesh& mesh);

SurfaceMesh icosahedron_mesh(double radius = 1.0);
SurfaceMesh sphere_mesh(int subdiv, double radius = 1.0);
SurfaceMesh torus_mesh(int nu, int nv, double major_radius, double minor_radius);
/// Two icospheres of the given subdivision, centers 2*radius + gap apart.
SurfaceMesh two_spheres_mesh(int subdiv, double radius = 1.0, double gap = 1.0);

SurfaceMesh merge_meshes(const SurfaceMesh& a, const SurfaceMesh& b, const Vec3& offset_b);

/// Parses generator specs: "sphere:<subdiv>", "torus:<nu>x<nv>[:R:r]",
/// "icosa", "twospheres:<subdiv>[:<gap>]", otherwise treats the spec as a
/// mesh file path.
SurfaceMesh mesh_from_spec(const std::string& spec);

}  // namespace dirac
