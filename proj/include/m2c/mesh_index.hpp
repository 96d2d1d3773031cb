#ifndef M2C_MESH_INDEX_HPP
#define M2C_MESH_INDEX_HPP

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "m2c/geom.hpp"

namespace m2c {

struct DistanceResult {
    double distance;   // unsigned, meters
    Vec3 nearest;      // realizing closest point on the mesh
    std::uint32_t triangle; // index of the realizing triangle (lowest on ties)
};

// Immutable triangle-mesh acceleration structure: a bounding-volume
// hierarchy for exact closest-point queries plus angle-weighted
// pseudonormals for the inside/outside test on watertight meshes.
// Safe for concurrent queries once built.
class MeshIndex {
public:
    // Throws EmptyMesh if no non-degenerate triangle remains.
    // Triangles with area <= 1e-12 m^2 are dropped and counted.
    static MeshIndex build(const std::vector<Triangle>& triangles);

    const std::vector<Triangle>& triangles() const { return tris_; }
    std::size_t degenerate_dropped() const { return degenerate_dropped_; }

    // Watertight: every edge shared by exactly two triangles with
    // consistent winding.
    bool closed() const { return closed_; }

    const Aabb& bounds() const { return bounds_; }

    // Exact minimum distance over all triangles (accelerated; equal to
    // brute force). Ties between equidistant triangles resolve to the
    // lowest triangle index, so results are reproducible.
    DistanceResult unsigned_distance(const Vec3& p) const;

    // Negative inside (closed meshes only; open meshes return the
    // unsigned distance). |d| < 1e-12 m collapses to exactly 0.
    double signed_distance(const Vec3& p) const;

    // Linear-scan twins of the two queries above: every triangle is
    // visited, no hierarchy involved. Same tie rule, same sign logic.
    DistanceResult unsigned_distance_linear(const Vec3& p) const;
    double signed_distance_linear(const Vec3& p) const;

private:
    struct Node {
        Aabb box;
        std::uint32_t left = 0;   // child index, or first triangle if leaf
        std::uint32_t count = 0;  // 0 for inner nodes, triangle count for leaves
        std::uint32_t right = 0;  // second child (inner nodes)
    };

    void build_bvh();
    std::uint32_t build_node(std::uint32_t begin, std::uint32_t end, int depth);
    void build_topology();

    // Pseudonormal of the feature realizing the closest point.
    Vec3 feature_pseudonormal(std::uint32_t tri, TriFeature feature) const;

    std::vector<Triangle> tris_;
    std::vector<std::uint32_t> order_; // triangle ids in BVH leaf order
    std::vector<Node> nodes_;
    Aabb bounds_;
    bool closed_ = false;
    std::size_t degenerate_dropped_ = 0;

    // Welded topology (positions compared bit-exactly).
    std::vector<std::array<std::uint32_t, 3>> tri_verts_;
    std::vector<Vec3> vertex_normals_;                      // angle-weighted
    std::unordered_map<std::uint64_t, Vec3> edge_normals_;  // keyed by vertex pair
    std::vector<Vec3> face_normals_;                        // from winding

    static std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
        std::uint32_t lo = a < b ? a : b;
        std::uint32_t hi = a < b ? b : a;
        return (std::uint64_t(lo) << 32) | hi;
    }
};

inline Aabb mesh_aabb(const MeshIndex& index) { return index.bounds(); }

} // namespace m2c

#endif
