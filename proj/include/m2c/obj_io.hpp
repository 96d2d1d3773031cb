#ifndef M2C_OBJ_IO_HPP
#define M2C_OBJ_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "m2c/geom.hpp"

namespace m2c {

struct ObjParseStats {
    std::size_t ignored_records = 0; // vt, o, g, usemtl, ...
};

// Wavefront-style subset: `v x y z`, optional `vn x y z`,
// `f i[/t][/n] ...` with 1-based and negative relative indices.
// Polygons with more than three vertices are fan-triangulated from the
// first vertex. Faces without normal references get the winding normal.
// Throws ParseError (with line number), IndexOutOfRange, EmptyMesh.
std::vector<Triangle> parse_mesh(std::istream& source, ObjParseStats* stats = nullptr);
std::vector<Triangle> parse_mesh_file(const std::string& path, ObjParseStats* stats = nullptr);

// Writes one `v` line per vertex and one triangular `f` line per
// triangle, with coordinates printed round-trip exact.
void serialize_mesh(const std::vector<Triangle>& triangles, std::ostream& sink);
void serialize_mesh_file(const std::vector<Triangle>& triangles, const std::string& path);

} // namespace m2c

#endif
