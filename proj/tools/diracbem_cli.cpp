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

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "diracbem.h"

using nlohmann::json;

namespace {

struct MeshHandle {
    db_mesh* m = nullptr;
    ~MeshHandle() { db_mesh_free(m); }
};

int fail(const std::string& what) {
    std::cerr << "error: " << what << " (" << db_last_error() << ")\n";
    return 1;
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        f << text;
    }
}

// Runs one db_run command and emits its report. Returns the process exit
// code: 0 ok, 1 usage/runtime error, 2 failed --check.
int run_command(const std::string& mesh_spec, json cfg, const std::string& out_path) {
    MeshHandle mesh;
    if (db_mesh_create(mesh_spec.c_str(), &mesh.m) != DB_OK) return fail("mesh " + mesh_spec);
    char* text = nullptr;
    const int rc = db_run(mesh.m, cfg.dump().c_str(), &text);
    if (rc != DB_OK && rc != DB_ERR_CHECK) return fail(cfg["command"].get<std::string>());
    json report = json::parse(text);
    db_string_free(text);
    emit(report, out_path);
    return rc == DB_ERR_CHECK ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin boundary elements for first-kind Hodge-Dirac integral operators"};
    app.require_subcommand(1);

    std::string mesh_spec = "sphere:1";
    std::string out_path;
    std::string op = "BR";
    std::string case_name = "constant-field";
    std::string kind = "LT";
    std::string problem = "R";
    std::string levels = "1..3";
    int order = 4;
    double tol = -1.0;
    bool check = false;
    bool via_xi = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--mesh", mesh_spec,
                        "mesh spec: sphere:<s>, torus:<nu>x<nv>[:R:r], twospheres:<s>[:gap], "
                        "icosa, or a mesh file path");
        sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
        sub->add_option("--order", order, "quadrature points per transformed coordinate");
        sub->add_option("--tol", tol, "check threshold override");
        sub->add_flag("--check", check, "exit 2 when the report fails its acceptance threshold");
    };

    auto* topo = app.add_subcommand("topology", "Betti numbers and Euler characteristic");
    add_common(topo);

    auto* asm_cmd = app.add_subcommand("assemble", "assemble an operator and export CSV");
    add_common(asm_cmd);
    asm_cmd->add_option("--operator", op, "BT|BR|slp-p0|slp-rwg-T|slp-rwg-R|duality");

    auto* kdim = app.add_subcommand("kernel-dim", "kernel dimension vs. Betti sum");
    add_common(kdim);
    kdim->add_option("--operator", op, "BT|BR");

    auto* cal = app.add_subcommand("calderon", "Calderon projector residuals");
    add_common(cal);
    cal->add_option("--case", case_name, "manufactured Cauchy data");

    auto* solve = app.add_subcommand("solve", "first-kind boundary value problem solve");
    add_common(solve);
    solve->add_option("--problem", problem, "R|T");
    solve->add_option("--case", case_name, "manufactured data case");
    solve->add_flag("--via-xi", via_xi, "solve the T problem through the Xi-conjugated R problem");

    auto* conv = app.add_subcommand("convergence", "error vs. refinement level");
    add_common(conv);
    conv->add_option("--levels", levels, "level range lo..hi (sphere subdivisions)");
    conv->add_option("--case", case_name, "manufactured data case");
    conv->add_option("--problem", problem, "R|T");

    auto* jump = app.add_subcommand("jump-test", "jump relation probe");
    add_common(jump);
    jump->add_option("--kind", kind, "LT|LR");

    auto* decay = app.add_subcommand("decay-test", "far-field decay exponent");
    add_common(decay);
    decay->add_option("--kind", kind, "LT|LR");

    CLI11_PARSE(app, argc, argv);

    json cfg;
    cfg["order"] = order;
    if (check) cfg["check"] = true;
    if (tol > 0) cfg["tol"] = tol;

    if (topo->parsed()) {
        cfg["command"] = "topology";
        return run_command(mesh_spec, cfg, out_path);
    }
    if (asm_cmd->parsed()) {
        cfg["command"] = "assemble";
        cfg["operator"] = op;
        if (!out_path.empty()) cfg["out"] = out_path + ".matrix";
        return run_command(mesh_spec, cfg, out_path);
    }
    if (kdim->parsed()) {
        cfg["command"] = "kernel-dim";
        cfg["operator"] = op;
        if (tol > 0) cfg["tol"] = tol;
        return run_command(mesh_spec, cfg, out_path);
    }
    if (cal->parsed()) {
        cfg["command"] = "calderon";
        cfg["case"] = case_name;
        return run_command(mesh_spec, cfg, out_path);
    }
    if (solve->parsed()) {
        cfg["command"] = "solve";
        cfg["problem"] = problem;
        cfg["case"] = case_name;
        cfg["via_xi"] = via_xi;
        return run_command(mesh_spec, cfg, out_path);
    }
    if (jump->parsed()) {
        cfg["command"] = "jump-test";
        cfg["kind"] = kind;
        return run_command(mesh_spec, cfg, out_path);
    }
    if (decay->parsed()) {
        cfg["command"] = "decay-test";
        cfg["kind"] = kind;
        return run_command(mesh_spec, cfg, out_path);
    }

    if (conv->parsed()) {
        // Level loop: generator specs get the level substituted, file meshes
        // are refined uniformly.
        int lo = 1, hi = 3;
        if (sscanf(levels.c_str(), "%d..%d", &lo, &hi) != 2 || lo > hi) {
            std::cerr << "error: bad --levels range '" << levels << "'\n";
            return 1;
        }
        json report;
        report["command"] = "convergence";
        report["case"] = case_name;
        report["levels"] = json::array();
        const std::string base = mesh_spec.substr(0, mesh_spec.find(':'));
        const bool generated = (base == "sphere" || base == "twospheres");
        double prev = -1.0;
        bool monotone = true;
        for (int l = lo; l <= hi; ++l) {
            const std::string spec = generated ? base + ":" + std::to_string(l) : mesh_spec;
            MeshHandle mesh;
            if (db_mesh_create(spec.c_str(), &mesh.m) != DB_OK) return fail("mesh " + spec);
            if (!generated) {
                for (int r = lo; r < l; ++r) {
                    db_mesh* refined = nullptr;
                    if (db_mesh_refine(mesh.m, &refined) != DB_OK) return fail("refine");
                    db_mesh_free(mesh.m);
                    mesh.m = refined;
                }
            }
            json sub;
            sub["command"] = "solve";
            sub["problem"] = problem;
            sub["case"] = case_name;
            sub["order"] = order;
            char* text = nullptr;
            if (db_run(mesh.m, sub.dump().c_str(), &text) != DB_OK) return fail("solve");
            json r = json::parse(text);
            db_string_free(text);
            const double err = r["error_vs_exact"].get<double>();
            if (prev >= 0 && err >= prev) monotone = false;
            prev = err;
            report["levels"].push_back({{"level", l},
                                        {"error", err},
                                        {"kernel_dim", r["kernel_dim"]},
                                        {"mesh_hash", r["mesh_hash"]}});
        }
        report["monotone_decreasing"] = monotone;
        report["library_version"] = db_version();
        if (check) report["check_passed"] = monotone;
        emit(report, out_path);
        return (check && !monotone) ? 2 : 0;
    }

    return 1;
}
