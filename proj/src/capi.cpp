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

#include "diracbem.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "dirac/bvp.hpp"
#include "dirac/report.hpp"

using nlohmann::json;

struct db_mesh {
    dirac::SurfaceMesh mesh;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const dirac::MeshError& e) {
        g_last_error = e.what();
        return DB_ERR_MESH;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return DB_ERR_INVALID;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DB_ERR_RUNTIME;
    }
}

json topology_json(const dirac::SurfaceMesh& m) {
    const dirac::TopologyReport rep = dirac::topology(m);
    json j;
    j["beta"] = {rep.beta0, rep.beta1, rep.beta2};
    j["chi"] = rep.euler;
    j["betti_sum"] = rep.betti_sum();
    j["genus"] = rep.genus;
    j["counts"] = {{"vertices", m.num_vertices()},
                   {"edges", m.num_edges()},
                   {"triangles", m.num_triangles()}};
    return j;
}

dirac::AssemblyOptions options_from(const json& cfg) {
    dirac::AssemblyOptions opt;
    if (cfg.contains("order"))
        opt.quad = dirac::QuadratureConfig::from_base_order(cfg["order"].get<int>());
    if (cfg.contains("threads")) opt.threads = cfg["threads"].get<int>();
    return opt;
}

json run_kernel_dim(const dirac::SurfaceMesh& mesh, const json& cfg, bool& check_ok) {
    dirac::BemWorkspace ws(mesh, options_from(cfg));
    const std::string op = cfg.value("operator", "BR");
    const double tol = cfg.value("tol", 1e-8);
    const dirac::NullspaceResult& ns =
        op == "BT" ? ws.kernel_BT(tol) : ws.kernel_BR(tol);
    const dirac::TopologyReport top = dirac::topology(ws.mesh());

    json j;
    j["operator"] = op;
    j["kernel_dim"] = ns.dim;
    j["betti_sum"] = top.betti_sum();
    j["match"] = (ns.dim == top.betti_sum());
    j["clean_gap"] = ns.clean_gap;
    j["gap_ratio"] = std::isfinite(ns.gap_ratio) ? ns.gap_ratio : 1e308;
    const int tail = std::min<int>(ns.dim + 3, ns.singular_values.size());
    json sv = json::array();
    for (int i = int(ns.singular_values.size()) - tail; i < ns.singular_values.size(); ++i)
        sv.push_back(ns.singular_values[i] / ns.singular_values[0]);
    j["singular_tail"] = sv;
    if (!ns.message.empty()) j["message"] = ns.message;
    check_ok = j["match"].get<bool>() && ns.clean_gap;
    return j;
}

json run_assemble(const dirac::SurfaceMesh& mesh, const json& cfg, bool& check_ok) {
    dirac::BemWorkspace ws(mesh, options_from(cfg));
    const std::string op = cfg.value("operator", "BR");
    dirac::OperatorBlock block;
    if (op == "BT")
        block = dirac::assemble_BT(ws.spaces(), ws.kit(dirac::kGrams));
    else if (op == "BR")
        block = dirac::assemble_BR(ws.spaces(), ws.kit(dirac::kGrams));
    else if (op == "slp-p0")
        block = dirac::assemble_slp_scalar(ws.spaces(), ws.kit(dirac::kGrams));
    else if (op == "slp-rwg-T")
        block = dirac::assemble_slp_tangential(ws.spaces(), ws.kit(dirac::kGrams), 'T');
    else if (op == "slp-rwg-R")
        block = dirac::assemble_slp_tangential(ws.spaces(), ws.kit(dirac::kGramR), 'R');
    else if (op == "duality")
        block = dirac::assemble_duality_mass(ws.spaces());
    else
        throw std::invalid_argument("assemble: unknown operator " + op);

    json j;
    j["operator"] = op;
    j["rows"] = block.matrix.rows();
    j["cols"] = block.matrix.cols();
    const double nrm = block.matrix.norm();
    const double sym = (block.matrix - block.matrix.transpose()).norm();
    j["symmetry_residual"] = nrm > 0 ? sym / nrm : 0.0;
    if (cfg.contains("out")) {
        const std::string base = cfg["out"].get<std::string>();
        dirac::export_matrix_csv(block.matrix, base + ".csv");
        dirac::write_text_file(base + ".json", dirac::matrix_header_json(block, ws.mesh()));
        j["out_csv"] = base + ".csv";
        j["out_header"] = base + ".json";
    }
    if (op == "BT" || op == "BR")
        check_ok = j["symmetry_residual"].get<double>() <= cfg.value("tol", 1e-12);
    return j;
}

json run_solve(const dirac::SurfaceMesh& mesh, const json& cfg, bool& check_ok) {
    dirac::BemWorkspace ws(mesh, options_from(cfg));
    const std::string problem = cfg.value("problem", "R");
    const std::string case_name = cfg.value("case", "constant-field");
    const bool via_xi = cfg.value("via_xi", false);
    const dirac::ManufacturedCase mc = dirac::manufactured_case(case_name);

    dirac::BvpSolution sol;
    double err = -1.0;
    if (problem == "R") {
        const dirac::TraceR a = dirac::interp_traceR(ws.spaces(), mc.field);
        sol = dirac::solve_bvp_R(ws, a);
        err = dirac::trace_error_T(
            ws.spaces(), dirac::TraceT::from_stacked(ws.spaces(), sol.unknown), mc.field);
    } else if (problem == "T") {
        const dirac::TraceT b = dirac::interp_traceT(ws.spaces(), mc.field);
        sol = dirac::solve_bvp_T(ws, b, via_xi);
        err = dirac::trace_error_R(
            ws.spaces(), dirac::TraceR::from_stacked(ws.spaces(), sol.unknown), mc.field);
    } else {
        throw std::invalid_argument("solve: problem must be R or T");
    }

    json j;
    j["problem"] = problem;
    j["case"] = case_name;
    j["via_xi"] = via_xi;
    j["dims"] = {{"unknown", sol.unknown.size()}, {"kernel", sol.kernel_dim}};
    j["kernel_dim"] = sol.kernel_dim;
    const double un = sol.unknown.norm();
    j["residuals"] = {{"linear_system", sol.res_linear},
                      {"consistency", sol.res_consistency},
                      {"multiplier_rel", un > 0 ? sol.multiplier.norm() / un : 0.0}};
    j["error_vs_exact"] = err;
    check_ok = err >= 0 && err < cfg.value("tol", 0.05);
    return j;
}

json run_calderon(const dirac::SurfaceMesh& mesh, const json& cfg, bool& check_ok) {
    dirac::BemWorkspace ws(mesh, options_from(cfg));
    const std::string case_name = cfg.value("case", "constant-field");
    const dirac::ManufacturedCase mc = dirac::manufactured_case(case_name);
    const dirac::TraceR a = dirac::interp_traceR(ws.spaces(), mc.field);
    const dirac::TraceT b = dirac::interp_traceT(ws.spaces(), mc.field);
    const bool with_proj = cfg.value("projector", true);
    const dirac::CalderonReport rep = dirac::calderon_check(ws, &a, &b, with_proj);

    json j;
    j["case"] = case_name;
    j["id_residual"] = rep.id_residual;
    if (with_proj) {
        j["projector_residual"] = rep.projector_residual;
        j["projector_residual_matrix"] = rep.projector_residual_matrix;
    }
    j["cauchy_residual"] = rep.cauchy_residual;
    check_ok = rep.cauchy_residual < cfg.value("tol", 5e-2);
    return j;
}

json run_jump_test(const dirac::SurfaceMesh& mesh, const json& cfg, bool& check_ok) {
    dirac::BemWorkspace ws(mesh, options_from(cfg));
    const std::string kind = cfg.value("kind", "LT");
    const int samples = cfg.value("samples", 40);
    const dirac::PotentialEvaluator ev(ws.spaces());
    const dirac::TraceR a = dirac::smooth_trace_R(ws.spaces());
    const dirac::TraceT b = dirac::smooth_trace_T(ws.spaces());
    const dirac::JumpReport rep =
        dirac::jump_probe(ev, kind == "LT" ? dirac::PotentialKind::LT : dirac::PotentialKind::LR,
                          a, b, samples);

    json j;
    j["kind"] = kind;
    j["dev_gamma_T"] = rep.dev_gamma_T;
    j["dev_gamma_R"] = rep.dev_gamma_R;
    j["observed_order"] = rep.observed_order;
    j["converged"] = rep.converged;
    double zero_dev = 0, id_dev = 0;
    for (int k = 0; k < 3; ++k) {
        if (kind == "LT") {
            zero_dev = std::max(zero_dev, rep.dev_gamma_T[k]);
            id_dev = std::max(id_dev, rep.dev_gamma_R[k]);
        } else {
            zero_dev = std::max(zero_dev, rep.dev_gamma_R[k]);
            id_dev = std::max(id_dev, rep.dev_gamma_T[k]);
        }
    }
    j["vanishing_jump_dev"] = zero_dev;
    j["identity_jump_dev"] = id_dev;
    check_ok = zero_dev < cfg.value("tol_zero", 2e-2) && id_dev < cfg.value("tol_id", 5e-2);
    return j;
}

json run_decay_test(const dirac::SurfaceMesh& mesh, const json& cfg, bool& check_ok) {
    dirac::BemWorkspace ws(mesh, options_from(cfg));
    const std::string kind = cfg.value("kind", "LT");
    std::vector<double> radii = cfg.value("radii", std::vector<double>{});
    if (radii.empty()) {
        const double r0 = 2.0 * ws.mesh().bbox_diagonal();
        radii = {r0, 2 * r0, 4 * r0, 8 * r0};
    }
    const dirac::PotentialEvaluator ev(ws.spaces());
    const dirac::TraceR a = dirac::smooth_trace_R(ws.spaces());
    const dirac::TraceT b = dirac::smooth_trace_T(ws.spaces());
    const dirac::DecayReport rep =
        dirac::decay_probe(ev, kind == "LT" ? dirac::PotentialKind::LT : dirac::PotentialKind::LR,
                           a, b, radii);
    json j;
    j["kind"] = kind;
    j["radii"] = rep.radii;
    j["norms"] = rep.norms;
    j["exponent"] = rep.exponent;
    j["zero_field"] = rep.zero_field;
    check_ok = !rep.zero_field && std::abs(rep.exponent + 2.0) < cfg.value("tol", 0.2);
    return j;
}

}  // namespace

extern "C" {

const char* db_version(void) { return dirac::version(); }

const char* db_last_error(void) { return g_last_error.c_str(); }

void db_string_free(char* s) { std::free(s); }

int db_mesh_create(const char* spec, db_mesh** out) {
    if (!spec || !out) {
        g_last_error = "null argument";
        return DB_ERR_INVALID;
    }
    return guarded([&] {
        *out = new db_mesh{dirac::mesh_from_spec(spec)};
        return DB_OK;
    });
}

int db_mesh_load(const char* path, const char* format, db_mesh** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return DB_ERR_INVALID;
    }
    return guarded([&] {
        if (!format) {
            *out = new db_mesh{dirac::load_mesh(path)};
        } else {
            const std::string f(format);
            dirac::MeshFormat mf;
            if (f == "off")
                mf = dirac::MeshFormat::Off;
            else if (f == "gmsh")
                mf = dirac::MeshFormat::GmshAscii;
            else {
                g_last_error = "unknown format: " + f;
                return DB_ERR_INVALID;
            }
            *out = new db_mesh{dirac::load_mesh(path, mf)};
        }
        return DB_OK;
    });
}

void db_mesh_free(db_mesh* mesh) { delete mesh; }

int db_mesh_refine(const db_mesh* mesh, db_mesh** out) {
    if (!mesh || !out) {
        g_last_error = "null argument";
        return DB_ERR_INVALID;
    }
    return guarded([&] {
        *out = new db_mesh{dirac::refine(mesh->mesh)};
        return DB_OK;
    });
}

int db_mesh_counts(const db_mesh* mesh, int* vertices, int* edges, int* triangles) {
    if (!mesh) {
        g_last_error = "null mesh";
        return DB_ERR_INVALID;
    }
    if (vertices) *vertices = mesh->mesh.num_vertices();
    if (edges) *edges = mesh->mesh.num_edges();
    if (triangles) *triangles = mesh->mesh.num_triangles();
    return DB_OK;
}

int db_mesh_write_off(const db_mesh* mesh, const char* path) {
    if (!mesh || !path) {
        g_last_error = "null argument";
        return DB_ERR_INVALID;
    }
    return guarded([&] {
        dirac::write_off(mesh->mesh, path);
        return DB_OK;
    });
}

int db_mesh_topology_json(const db_mesh* mesh, char** json_out) {
    if (!mesh || !json_out) {
        g_last_error = "null argument";
        return DB_ERR_INVALID;
    }
    return guarded([&] {
        json j = topology_json(mesh->mesh);
        j["mesh_hash"] = mesh->mesh.hash();
        j["library_version"] = dirac::version();
        *json_out = dup_string(j.dump(2));
        return DB_OK;
    });
}

int db_run(const db_mesh* mesh, const char* config_json, char** json_out) {
    if (!mesh || !config_json || !json_out) {
        g_last_error = "null argument";
        return DB_ERR_INVALID;
    }
    return guarded([&]() -> int {
        json cfg;
        try {
            cfg = json::parse(config_json);
        } catch (const json::exception& e) {
            g_last_error = std::string("config parse error: ") + e.what();
            return DB_ERR_INVALID;
        }
        const std::string cmd = cfg.value("command", "");
        bool check_ok = true;
        json j;
        if (cmd == "topology")
            j = topology_json(mesh->mesh);
        else if (cmd == "kernel-dim")
            j = run_kernel_dim(mesh->mesh, cfg, check_ok);
        else if (cmd == "assemble")
            j = run_assemble(mesh->mesh, cfg, check_ok);
        else if (cmd == "solve")
            j = run_solve(mesh->mesh, cfg, check_ok);
        else if (cmd == "calderon")
            j = run_calderon(mesh->mesh, cfg, check_ok);
        else if (cmd == "jump-test")
            j = run_jump_test(mesh->mesh, cfg, check_ok);
        else if (cmd == "decay-test")
            j = run_decay_test(mesh->mesh, cfg, check_ok);
        else {
            g_last_error = "unknown command: " + cmd;
            return DB_ERR_INVALID;
        }
        j["config"] = cfg;
        j["mesh_hash"] = mesh->mesh.hash();
        j["library_version"] = dirac::version();
        const bool do_check = cfg.value("check", false);
        if (do_check) j["check_passed"] = check_ok;
        *json_out = dup_string(j.dump(2));
        if (do_check && !check_ok) {
            g_last_error = "check failed for command " + cmd;
            return DB_ERR_CHECK;
        }
        return DB_OK;
    });
}

}  // extern "C"
