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

#include "dirac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace dirac {

namespace {

// Union-find over vertex indices.
struct DisjointSet {
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
    std::vector<int> parent;
};

double bbox_diag(const std::vector<Vec3>& pts) {
    if (pts.empty()) return 0.0;
    Vec3 lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

// Merges vertices closer than tol and drops unreferenced ones.
void dedup_vertices(std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& triangles,
                    double tol) {
    const int n = static_cast<int>(vertices.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vertices[a].x() < vertices[b].x(); });

    std::vector<int> remap(n, -1);
    for (int i = 0; i < n; ++i) {
        const int vi = order[i];
        if (remap[vi] != -1) continue;
        remap[vi] = vi;
        for (int j = i + 1; j < n; ++j) {
            const int vj = order[j];
            if (vertices[vj].x() - vertices[vi].x() > tol) break;
            if (remap[vj] == -1 && (vertices[vj] - vertices[vi]).norm() <= tol) remap[vj] = vi;
        }
    }

    std::vector<int> used(n, 0);
    for (auto& t : triangles)
        for (int k = 0; k < 3; ++k) {
            t[k] = remap[t[k]];
            used[t[k]] = 1;
        }

    std::vector<int> newindex(n, -1);
    std::vector<Vec3> out;
    out.reserve(n);
    for (int v = 0; v < n; ++v)
        if (used[v]) {
            newindex[v] = static_cast<int>(out.size());
            out.push_back(vertices[v]);
        }
    for (auto& t : triangles)
        for (int k = 0; k < 3; ++k) t[k] = newindex[t[k]];
    vertices = std::move(out);
}

}  // namespace

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    if (triangles_.empty()) throw MeshError("mesh has no triangles");
    const int nv = static_cast<int>(vertices_.size());
    for (const auto& t : triangles_)
        for (int k = 0; k < 3; ++k)
            if (t[k] < 0 || t[k] >= nv) throw MeshError("triangle vertex index out of range");

    bbox_diagonal_ = bbox_diag(vertices_);
    dedup_vertices(vertices_, triangles_, 1e-9 * bbox_diagonal_);

    for (const auto& t : triangles_)
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw MeshError("degenerate triangle (repeated vertex)");

    build_edges();
    orient();
    compute_metrics();
}

void SurfaceMesh::build_edges(bool strict) {
    // Edge ids are ranks in the sorted (v0, v1) order, so the numbering is
    // independent of the triangle order.
    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& tri : triangles_)
        for (int k = 0; k < 3; ++k)
            edge_index.emplace(std::minmax(tri[(k + 1) % 3], tri[(k + 2) % 3]), 0);
    edges_.assign(edge_index.size(), Edge{});
    {
        int id = 0;
        for (auto& [key, value] : edge_index) {
            value = id;
            edges_[id].v0 = key.first;
            edges_[id].v1 = key.second;
            ++id;
        }
    }
    tri_edges_.assign(triangles_.size(), {-1, -1, -1});

    for (int t = 0; t < num_triangles(); ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            // Edge k is opposite local vertex k.
            const int a = tri[(k + 1) % 3];
            const int b = tri[(k + 2) % 3];
            const auto key = std::minmax(a, b);
            auto it = edge_index.find(key);
            Edge& e = edges_[it->second];
            const bool agrees = (a == e.v0 && b == e.v1);
            // Before orientation repair the traversal direction is unreliable,
            // so only the incidence count is checked.
            int& slot = agrees ? e.tri_plus : e.tri_minus;
            int& other = agrees ? e.tri_minus : e.tri_plus;
            if (slot == -1) {
                slot = t;
            } else if (!strict && other == -1) {
                other = t;
            } else {
                throw MeshError(strict ? "inconsistently oriented edge"
                                       : "non-manifold edge (more than 2 incident triangles)");
            }
            tri_edges_[t][k] = it->second;
        }
    }
}

void SurfaceMesh::orient() {
    // Greedy BFS: flip triangles so every shared edge is traversed in
    // opposite directions by its two neighbours. build_edges() has already
    // rejected edges with more than two incident triangles, but a flip may
    // be needed when a file carries mixed orientations, in which case the
    // plus/minus tags above are unreliable; redo adjacency from scratch.
    const int nt = num_triangles();
    std::map<std::pair<int, int>, std::vector<int>> incident;
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            const auto key = std::minmax(tri[(k + 1) % 3], tri[(k + 2) % 3]);
            incident[key].push_back(t);
        }
    }
    for (const auto& [key, tris] : incident)
        if (tris.size() != 2) throw MeshError("open or non-manifold edge (incident triangles != 2)");

    auto directed = [&](int t, int a, int b) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k)
            if (tri[k] == a && tri[(k + 1) % 3] == b) return true;
        return false;
    };

    std::vector<int> state(nt, -1);  // -1 unvisited, 0 keep, 1 flip
    tri_component_.assign(nt, -1);
    num_components_ = 0;

    for (int seed = 0; seed < nt; ++seed) {
        if (state[seed] != -1) continue;
        const int comp = num_components_++;
        state[seed] = 0;
        std::vector<int> stack{seed};
        tri_component_[seed] = comp;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            const auto& tri = triangles_[t];
            for (int k = 0; k < 3; ++k) {
                int a = tri[(k + 1) % 3];
                int b = tri[(k + 2) % 3];
                if (state[t] == 1) std::swap(a, b);  // t will be flipped
                const auto key = std::minmax(a, b);
                for (int u : incident[key]) {
                    if (u == t) continue;
                    // t (after its flip) traverses (a, b); consistency needs u
                    // to traverse (b, a), so u gets flipped iff its stored
                    // order runs the same way as t.
                    const int u_state = directed(u, a, b) ? 1 : 0;
                    if (state[u] == -1) {
                        state[u] = u_state;
                        tri_component_[u] = comp;
                        stack.push_back(u);
                    } else if (state[u] != u_state) {
                        throw MeshError("unorientable component");
                    }
                }
            }
        }
    }

    for (int t = 0; t < nt; ++t)
        if (state[t] == 1) std::swap(triangles_[t][1], triangles_[t][2]);

    // Outward convention: signed volume of each component positive.
    std::vector<double> comp_vol(num_components_, 0.0);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        comp_vol[tri_component_[t]] +=
            vertices_[tri[0]].dot(vertices_[tri[1]].cross(vertices_[tri[2]])) / 6.0;
    }
    for (int t = 0; t < nt; ++t)
        if (comp_vol[tri_component_[t]] < 0.0) std::swap(triangles_[t][1], triangles_[t][2]);

    build_edges(/*strict=*/true);
    for (const auto& e : edges_)
        if (e.tri_plus == -1 || e.tri_minus == -1)
            throw MeshError("orientation repair failed");
}

void SurfaceMesh::compute_metrics() {
    const int nt = num_triangles();
    normals_.resize(nt);
    areas_.resize(nt);
    centroids_.resize(nt);
    diameters_.resize(nt);
    total_area_ = 0.0;
    signed_volume_ = 0.0;
    max_diameter_ = 0.0;

    const double area_floor = 1e-14 * bbox_diagonal_ * bbox_diagonal_;
    for (int t = 0; t < nt; ++t) {
        const Vec3& a = vertices_[triangles_[t][0]];
        const Vec3& b = vertices_[triangles_[t][1]];
        const Vec3& c = vertices_[triangles_[t][2]];
        const Vec3 cr = (b - a).cross(c - a);
        const double area2 = cr.norm();
        if (area2 <= area_floor) throw MeshError("degenerate triangle (zero area)");
        areas_[t] = 0.5 * area2;
        normals_[t] = cr / area2;
        centroids_[t] = (a + b + c) / 3.0;
        diameters_[t] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
        max_diameter_ = std::max(max_diameter_, diameters_[t]);
        total_area_ += areas_[t];
        signed_volume_ += a.dot(b.cross(c)) / 6.0;
    }
    for (auto& e : edges_) e.length = (vertices_[e.v1] - vertices_[e.v0]).norm();
}

std::string SurfaceMesh::hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    const double scale = bbox_diagonal_ > 0 ? bbox_diagonal_ : 1.0;
    for (const auto& v : vertices_)
        for (int k = 0; k < 3; ++k) mix(static_cast<uint64_t>(std::llround(v[k] / scale * 1e12)));
    for (const auto& t : triangles_)
        for (int k = 0; k < 3; ++k) mix(static_cast<uint64_t>(t[k]));
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

TopologyReport topology(const SurfaceMesh& mesh) {
    DisjointSet ds(mesh.num_vertices());
    for (const auto& t : mesh.triangles()) {
        ds.unite(t[0], t[1]);
        ds.unite(t[1], t[2]);
    }
    std::map<int, int> roots;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const int r = ds.find(v);
        if (!roots.count(r)) roots.emplace(r, static_cast<int>(roots.size()));
    }

    TopologyReport rep;
    rep.beta0 = static_cast<int>(roots.size());
    rep.euler = mesh.num_vertices() - mesh.num_edges() + mesh.num_triangles();
    rep.beta1 = 2 * rep.beta0 - rep.euler;
    rep.beta2 = rep.beta0;

    // Per-component Euler characteristic -> genus.
    std::vector<int> vcnt(rep.beta0, 0), ecnt(rep.beta0, 0), fcnt(rep.beta0, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) vcnt[roots.at(ds.find(v))]++;
    for (const auto& e : mesh.edges()) ecnt[roots.at(ds.find(e.v0))]++;
    for (const auto& t : mesh.triangles()) fcnt[roots.at(ds.find(t[0]))]++;
    rep.genus.resize(rep.beta0);
    for (int c = 0; c < rep.beta0; ++c) {
        const int chi = vcnt[c] - ecnt[c] + fcnt[c];
        rep.genus[c] = (2 - chi) / 2;
    }
    return rep;
}

SurfaceMesh refine(const SurfaceMesh& mesh) {
    std::vector<Vec3> verts = mesh.vertices();
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it == midpoint.end()) {
            it = midpoint.emplace(key, static_cast<int>(verts.size())).first;
            verts.push_back(0.5 * (mesh.vertex(a) + mesh.vertex(b)));
        }
        return it->second;
    };

    std::vector<std::array<int, 3>> tris;
    tris.reserve(4 * mesh.num_triangles());
    for (const auto& t : mesh.triangles()) {
        const int mab = mid(t[0], t[1]);
        const int mbc = mid(t[1], t[2]);
        const int mca = mid(t[2], t[0]);
        tris.push_back({t[0], mab, mca});
        tris.push_back({mab, t[1], mbc});
        tris.push_back({mca, mbc, t[2]});
        tris.push_back({mab, mbc, mca});
    }
    return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh icosahedron_mesh(double radius) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : v) p *= radius / p.norm();
    std::vector<std::array<int, 3>> t = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    return SurfaceMesh(std::move(v), std::move(t));
}

SurfaceMesh sphere_mesh(int subdiv, double radius) {
    if (subdiv < 0) throw MeshError("sphere_mesh: subdiv must be >= 0");
    if (radius <= 0) throw MeshError("sphere_mesh: radius must be positive");
    SurfaceMesh m = icosahedron_mesh(radius);
    for (int s = 0; s < subdiv; ++s) {
        SurfaceMesh r = refine(m);
        std::vector<Vec3> verts = r.vertices();
        for (auto& p : verts) p *= radius / p.norm();
        m = SurfaceMesh(std::move(verts), std::vector<std::array<int, 3>>(r.triangles()));
    }
    return m;
}

SurfaceMesh torus_mesh(int nu, int nv, double major_radius, double minor_radius) {
    if (nu < 3 || nv < 3) throw MeshError("torus_mesh: nu, nv must be >= 3");
    if (!(minor_radius > 0 && minor_radius < major_radius))
        throw MeshError("torus_mesh: need 0 < r < R");
    std::vector<Vec3> verts(static_cast<size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = 2.0 * M_PI * j / nv;
            const double w = major_radius + minor_radius * std::cos(v);
            verts[static_cast<size_t>(i) * nv + j] =
                Vec3(w * std::cos(u), w * std::sin(u), minor_radius * std::sin(v));
        }
    }
    std::vector<std::array<int, 3>> tris;
    tris.reserve(2ull * nu * nv);
    auto id = [nv](int i, int j) { return i * nv + j; };
    for (int i = 0; i < nu; ++i) {
        const int i1 = (i + 1) % nu;
        for (int j = 0; j < nv; ++j) {
            const int j1 = (j + 1) % nv;
            tris.push_back({id(i, j), id(i1, j), id(i1, j1)});
            tris.push_back({id(i, j), id(i1, j1), id(i, j1)});
        }
    }
    return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh merge_meshes(const SurfaceMesh& a, const SurfaceMesh& b, const Vec3& offset_b) {
    std::vector<Vec3> verts = a.vertices();
    for (const auto& p : b.vertices()) verts.push_back(p + offset_b);
    std::vector<std::array<int, 3>> tris = a.triangles();
    const int off = a.num_vertices();
    for (const auto& t : b.triangles()) tris.push_back({t[0] + off, t[1] + off, t[2] + off});
    return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh two_spheres_mesh(int subdiv, double radius, double gap) {
    SurfaceMesh s = sphere_mesh(subdiv, radius);
    return merge_meshes(s, s, Vec3(2.0 * radius + gap, 0, 0));
}

namespace {

SurfaceMesh load_off(std::istream& in) {
    std::string token;
    auto next = [&](std::string& out) {
        while (in >> out) {
            if (out[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return true;
        }
        return false;
    };
    if (!next(token) || token != "OFF") throw MeshError("OFF parse error: missing OFF header");
    std::string sv, sf, se;
    if (!next(sv) || !next(sf) || !next(se)) throw MeshError("OFF parse error: missing counts");
    const int nv = std::stoi(sv), nf = std::stoi(sf);
    std::vector<Vec3> verts(nv);
    for (int i = 0; i < nv; ++i) {
        std::string x, y, z;
        if (!next(x) || !next(y) || !next(z)) throw MeshError("OFF parse error: vertex data");
        verts[i] = Vec3(std::stod(x), std::stod(y), std::stod(z));
    }
    std::vector<std::array<int, 3>> tris(nf);
    for (int i = 0; i < nf; ++i) {
        std::string cnt;
        if (!next(cnt)) throw MeshError("OFF parse error: face data");
        if (std::stoi(cnt) != 3) throw MeshError("OFF parse error: only triangles supported");
        std::string a, b, c;
        if (!next(a) || !next(b) || !next(c)) throw MeshError("OFF parse error: face indices");
        tris[i] = {std::stoi(a), std::stoi(b), std::stoi(c)};
    }
    return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh load_gmsh22(std::istream& in) {
    std::string line;
    std::vector<Vec3> verts;
    std::map<long, int> node_index;
    std::vector<std::array<int, 3>> tris;
    bool saw_nodes = false, saw_elements = false;

    while (std::getline(in, line)) {
        if (line.rfind("$MeshFormat", 0) == 0) {
            std::getline(in, line);
            std::istringstream ls(line);
            double version = 0;
            ls >> version;
            if (version < 2.0 || version >= 3.0)
                throw MeshError("Gmsh parse error: only MSH 2.x ASCII supported");
        } else if (line.rfind("$Nodes", 0) == 0) {
            saw_nodes = true;
            std::getline(in, line);
            const long n = std::stol(line);
            verts.reserve(n);
            for (long i = 0; i < n; ++i) {
                std::getline(in, line);
                std::istringstream ls(line);
                long id;
                double x, y, z;
                if (!(ls >> id >> x >> y >> z)) throw MeshError("Gmsh parse error: node line");
                node_index[id] = static_cast<int>(verts.size());
                verts.emplace_back(x, y, z);
            }
        } else if (line.rfind("$Elements", 0) == 0) {
            saw_elements = true;
            std::getline(in, line);
            const long n = std::stol(line);
            for (long i = 0; i < n; ++i) {
                std::getline(in, line);
                std::istringstream ls(line);
                long id;
                int type, ntags;
                if (!(ls >> id >> type >> ntags)) throw MeshError("Gmsh parse error: element line");
                long tag;
                for (int k = 0; k < ntags; ++k) ls >> tag;
                if (type == 2) {
                    long a, b, c;
                    if (!(ls >> a >> b >> c)) throw MeshError("Gmsh parse error: triangle nodes");
                    tris.push_back({node_index.at(a), node_index.at(b), node_index.at(c)});
                } else if (type == 15 || type == 1) {
                    continue;  // points and lines are ignored
                } else {
                    throw MeshError("Gmsh parse error: unsupported element type " +
                                    std::to_string(type));
                }
            }
        }
    }
    if (!saw_nodes || !saw_elements) throw MeshError("Gmsh parse error: missing sections");
    return SurfaceMesh(std::move(verts), std::move(tris));
}

}  // namespace

SurfaceMesh load_mesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file: " + path);
    switch (format) {
        case MeshFormat::Off: return load_off(in);
        case MeshFormat::GmshAscii: return load_gmsh22(in);
    }
    throw MeshError("unknown mesh format");
}

SurfaceMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file: " + path);
    std::string head;
    in >> head;
    in.close();
    if (head == "OFF") return load_mesh(path, MeshFormat::Off);
    if (head == "$MeshFormat") return load_mesh(path, MeshFormat::GmshAscii);
    throw MeshError("cannot detect mesh format of " + path);
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open output file: " + path);
    out << "OFF\n" << mesh.num_vertices() << " " << mesh.num_triangles() << " "
        << mesh.num_edges() << "\n";
    out.precision(17);
    for (const auto& v : mesh.vertices()) out << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles()) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

SurfaceMesh mesh_from_spec(const std::string& spec) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::istringstream is(s);
        std::string item;
        while (std::getline(is, item, sep)) parts.push_back(item);
        return parts;
    };
    const auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    try {
        if (kind == "sphere") {
            const int s = parts.size() > 1 ? std::stoi(parts[1]) : 1;
            const double r = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
            return sphere_mesh(s, r);
        }
        if (kind == "icosa") return icosahedron_mesh(parts.size() > 1 ? std::stod(parts[1]) : 1.0);
        if (kind == "torus") {
            if (parts.size() < 2) throw MeshError("torus spec needs <nu>x<nv>");
            const auto dims = split(parts[1], 'x');
            if (dims.size() != 2) throw MeshError("torus spec needs <nu>x<nv>");
            const double R = parts.size() > 2 ? std::stod(parts[2]) : 2.0;
            const double r = parts.size() > 3 ? std::stod(parts[3]) : 0.7;
            return torus_mesh(std::stoi(dims[0]), std::stoi(dims[1]), R, r);
        }
        if (kind == "twospheres") {
            const int s = parts.size() > 1 ? std::stoi(parts[1]) : 1;
            const double gap = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
            return two_spheres_mesh(s, 1.0, gap);
        }
    } catch (const std::invalid_argument&) {
        throw MeshError("bad mesh spec: " + spec);
    }
    return load_mesh(spec);
}

}  // namespace dirac
