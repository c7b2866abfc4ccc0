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

#include "dirac/report.hpp"

#include <fstream>

#include <json.hpp>

namespace dirac {

const char* version() { return "0.1.0"; }

void export_matrix_csv(const MatrixXd& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << m(i, j);
        }
        out << "\n";
    }
}

std::string matrix_header_json(const OperatorBlock& block, const SurfaceMesh& mesh) {
    nlohmann::json j;
    j["kind"] = block.kind;
    j["row_space"] = space_name(block.row_space);
    j["col_space"] = space_name(block.col_space);
    j["rows"] = block.matrix.rows();
    j["cols"] = block.matrix.cols();
    j["mesh_hash"] = mesh.hash();
    j["library_version"] = version();
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

}  // namespace dirac
