#ifndef M2C_TESTS_TESTMESH_HPP
#define M2C_TESTS_TESTMESH_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "m2c/cloud.hpp"
#include "m2c/geom.hpp"

namespace testmesh {

// Axis-aligned box as 12 outward-wound triangles.
std::vector<m2c::Triangle> box(const m2c::Vec3& lo, const m2c::Vec3& hi);

// Unit cube centered at origin.
std::vector<m2c::Triangle> unit_cube();

// Unit cube with one face (two triangles) removed: 10 triangles, open.
std::vector<m2c::Triangle> open_cube();

// Watertight UV sphere with 2*slices*(stacks-1) triangles (stacks=51,
// slices=100 gives 10000). Vertex radii are displaced by
// U(-amplitude, amplitude) from `radius`.
std::vector<m2c::Triangle> bumpy_sphere(std::uint32_t stacks, std::uint32_t slices,
                                        double radius, double amplitude,
                                        std::uint64_t seed);

// Random cloud with valid colors, intensities and labels for IO tests.
m2c::LabeledCloud random_cloud(std::size_t n, m2c::TaxonomyId taxonomy,
                               std::mt19937_64& rng);

} // namespace testmesh

#endif
