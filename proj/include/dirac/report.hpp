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

#include <string>

#include "dirac/operators.hpp"

namespace dirac {

const char* version();

/// Row-major CSV dump of a dense matrix.
void export_matrix_csv(const MatrixXd& m, const std::string& path);

/// JSON header describing an exported operator block (spaces, dims, mesh
/// hash) for cross-implementation comparison.
std::string matrix_header_json(const OperatorBlock& block, const SurfaceMesh& mesh);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dirac
