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

/* C interface of the diracbem shared library. All functions return DB_OK on
 * success or a nonzero error code; db_last_error() describes the most recent
 * failure on the calling thread. Strings returned through output parameters
 * are owned by the caller and released with db_string_free(). */

#ifndef DIRACBEM_H
#define DIRACBEM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct db_mesh db_mesh;

enum {
    DB_OK = 0,
    DB_ERR_INVALID = 1, /* bad arguments / config */
    DB_ERR_MESH = 2,    /* parse failure or mesh invariant violation */
    DB_ERR_RUNTIME = 3, /* internal failure */
    DB_ERR_CHECK = 4    /* a requested acceptance check did not pass */
};

const char* db_version(void);
const char* db_last_error(void);
void db_string_free(char* s);

/* Mesh construction. `spec` is either a generator spec
 * ("sphere:<subdiv>", "torus:<nu>x<nv>[:R:r]", "twospheres:<subdiv>[:gap]",
 * "icosa") or a path to an OFF / Gmsh MSH 2.2 ASCII file. */
int db_mesh_create(const char* spec, db_mesh** out);
/* Explicit-format load; format is "off" or "gmsh". */
int db_mesh_load(const char* path, const char* format, db_mesh** out);
void db_mesh_free(db_mesh* mesh);

int db_mesh_refine(const db_mesh* mesh, db_mesh** out);
int db_mesh_counts(const db_mesh* mesh, int* vertices, int* edges, int* triangles);
int db_mesh_write_off(const db_mesh* mesh, const char* path);
/* {"beta":[b0,b1,b2],"chi":...,"betti_sum":...,"genus":[...]} */
int db_mesh_topology_json(const db_mesh* mesh, char** json_out);

/* Runs one pipeline on the mesh. `config_json` is a JSON object with a
 * "command" key in {topology, assemble, kernel-dim, calderon, solve,
 * jump-test, decay-test} plus command-specific options (see README).
 * The report (JSON) always echoes the effective config, the mesh hash and
 * the library version. If the config sets "check": true and a threshold
 * fails, DB_ERR_CHECK is returned and the report is still produced. */
int db_run(const db_mesh* mesh, const char* config_json, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* DIRACBEM_H */
