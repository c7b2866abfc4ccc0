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

#include "dirac/geometry.hpp"

namespace dirac::testing {

/// Unit cube surface, 12 right triangles with legs 1 and sqrt(2) diagonals.
inline SurfaceMesh cube_mesh() {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                           {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    std::vector<std::array<int, 3>> t = {
        {0, 2, 1}, {0, 3, 2},  // bottom (z=0)
        {4, 5, 6}, {4, 6, 7},  // top (z=1)
        {0, 1, 5}, {0, 5, 4},  // front (y=0)
        {2, 3, 7}, {2, 7, 6},  // back (y=1)
        {1, 2, 6}, {1, 6, 5},  // right (x=1)
        {3, 0, 4}, {3, 4, 7},  // left (x=0)
    };
    return SurfaceMesh(std::move(v), std::move(t));
}

}  // namespace dirac::testing
