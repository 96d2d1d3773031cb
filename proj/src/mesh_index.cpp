#include "m2c/mesh_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include "m2c/errors.hpp"

namespace m2c {

namespace {

constexpr double kDegenerateArea = 1e-12; // m^2
constexpr double kOnSurface = 1e-12;      // m
constexpr std::uint32_t kLeafSize = 4;

struct VecKey {
    double x, y, z;
    bool operator==(const VecKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct VecKeyHash {
    std::size_t operator()(const VecKey& k) const {
        auto mix = [](std::uint64_t h, double v) {
            std::uint64_t b;
            static_assert(sizeof(b) == sizeof(v));
            std::memcpy(&b, &v, sizeof(b));
            h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            return h;
        };
        std::uint64_t h = 0;
        h = mix(h, k.x);
        h = mix(h, k.y);
        h = mix(h, k.z);
        return static_cast<std::size_t>(h);
    }
};

// Angle at vertex `v` of triangle (v, p, q), clamped into [0, pi].
double corner_angle(const Vec3& v, const Vec3& p, const Vec3& q) {
    Vec3 e1 = normalized(p - v);
    Vec3 e2 = normalized(q - v);
    double c = std::clamp(dot(e1, e2), -1.0, 1.0);
    return std::acos(c);
}

struct BestHit {
    double d2 = std::numeric_limits<double>::infinity();
    Vec3 point{};
    std::uint32_t tri = 0;
    TriFeature feature = TriFeature::Face;

    void consider(const Triangle& t, std::uint32_t id, const Vec3& p) {
        ClosestPointResult r = closest_point_on_triangle(t, p);
        if (r.dist2 < d2 || (r.dist2 == d2 && id < tri)) {
            d2 = r.dist2;
            point = r.point;
            tri = id;
            feature = r.feature;
        }
    }
};

} // namespace

MeshIndex MeshIndex::build(const std::vector<Triangle>& triangles) {
    MeshIndex index;
    index.tris_.reserve(triangles.size());
    for (const Triangle& t : triangles) {
        if (!(t.area() > kDegenerateArea)) {
            ++index.degenerate_dropped_;
            continue;
        }
        Triangle kept = t;
        kept.normal = kept.geometric_normal();
        index.tris_.push_back(kept);
    }
    if (index.tris_.empty())
        throw EmptyMesh("no non-degenerate triangles (dropped " +
                        std::to_string(index.degenerate_dropped_) + ")");

    for (const Triangle& t : index.tris_) {
        index.bounds_.expand(t.a);
        index.bounds_.expand(t.b);
        index.bounds_.expand(t.c);
    }

    index.build_topology();
    index.build_bvh();
    return index;
}

void MeshIndex::build_topology() {
    // Weld bit-identical vertex positions to recover shared edges.
    std::unordered_map<VecKey, std::uint32_t, VecKeyHash> weld;
    std::vector<Vec3> positions;
    tri_verts_.resize(tris_.size());
    face_normals_.resize(tris_.size());

    auto weld_id = [&](const Vec3& v) -> std::uint32_t {
        // +0.0 so that -0.0 and 0.0 share a key (hash is bit-based).
        VecKey key{v.x + 0.0, v.y + 0.0, v.z + 0.0};
        auto it = weld.find(key);
        if (it != weld.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(positions.size());
        weld.emplace(key, id);
        positions.push_back(v);
        return id;
    };

    for (std::size_t t = 0; t < tris_.size(); ++t) {
        tri_verts_[t] = {weld_id(tris_[t].a), weld_id(tris_[t].b), weld_id(tris_[t].c)};
        face_normals_[t] = tris_[t].normal;
    }

    // Edge census. Watertight with consistent winding means every
    // undirected edge occurs exactly once in each direction.
    struct EdgeUse { std::uint32_t forward = 0, backward = 0; Vec3 normal_sum{}; };
    std::unordered_map<std::uint64_t, EdgeUse> edges;
    edges.reserve(tris_.size() * 3);
    bool collapsed = false;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const auto& v = tri_verts_[t];
        for (int i = 0; i < 3; ++i) {
            std::uint32_t a = v[i], b = v[(i + 1) % 3];
            if (a == b) { // zero-length edge after welding
                collapsed = true;
                continue;
            }
            EdgeUse& use = edges[edge_key(a, b)];
            if (a < b) ++use.forward;
            else ++use.backward;
            use.normal_sum += face_normals_[t];
        }
    }

    closed_ = !collapsed;
    for (const auto& [key, use] : edges) {
        if (use.forward != 1 || use.backward != 1) {
            closed_ = false;
            break;
        }
    }

    if (!closed_) return; // pseudonormals only needed for the sign test

    edge_normals_.reserve(edges.size());
    for (const auto& [key, use] : edges)
        edge_normals_.emplace(key, normalized(use.normal_sum));

    vertex_normals_.assign(positions.size(), Vec3{});
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const auto& v = tri_verts_[t];
        const Vec3 p0 = tris_[t].a, p1 = tris_[t].b, p2 = tris_[t].c;
        vertex_normals_[v[0]] += corner_angle(p0, p1, p2) * face_normals_[t];
        vertex_normals_[v[1]] += corner_angle(p1, p2, p0) * face_normals_[t];
        vertex_normals_[v[2]] += corner_angle(p2, p0, p1) * face_normals_[t];
    }
    for (Vec3& n : vertex_normals_) n = normalized(n);
}

void MeshIndex::build_bvh() {
    order_.resize(tris_.size());
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.clear();
    nodes_.reserve(2 * tris_.size());
    build_node(0, static_cast<std::uint32_t>(order_.size()), 0);
}

std::uint32_t MeshIndex::build_node(std::uint32_t begin, std::uint32_t end, int depth) {
    std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});

    Aabb box;
    Aabb centroid_box;
    for (std::uint32_t i = begin; i < end; ++i) {
        const Triangle& t = tris_[order_[i]];
        box.expand(triangle_bounds(t));
        centroid_box.expand((t.a + t.b + t.c) / 3.0);
    }
    nodes_[self].box = box;

    std::uint32_t count = end - begin;
    if (count <= kLeafSize || depth > 60) {
        // Keep leaf triangles in ascending id order so equidistant ties
        // resolve identically to a full scan.
        std::sort(order_.begin() + begin, order_.begin() + end);
        nodes_[self].left = begin;
        nodes_[self].count = count;
        return self;
    }

    Vec3 ext = centroid_box.extent();
    int axis = 0;
    if (ext.y > ext[axis]) axis = 1;
    if (ext.z > ext[axis]) axis = 2;

    std::uint32_t mid = begin + count / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t lhs, std::uint32_t rhs) {
                         const Triangle& a = tris_[lhs];
                         const Triangle& b = tris_[rhs];
                         double ca = (a.a[axis] + a.b[axis] + a.c[axis]);
                         double cb = (b.a[axis] + b.b[axis] + b.c[axis]);
                         if (ca != cb) return ca < cb;
                         return lhs < rhs;
                     });

    std::uint32_t left = build_node(begin, mid, depth + 1);
    std::uint32_t right = build_node(mid, end, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    nodes_[self].count = 0;
    return self;
}

namespace {

template <typename Nodes, typename Order, typename Tris>
void traverse_nearest(const Nodes& nodes, const Order& order, const Tris& tris,
                      const Vec3& p, BestHit& best) {
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const auto& node = nodes[stack[--top]];
        if (aabb_distance2(node.box, p) > best.d2) continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.left; i < node.left + node.count; ++i) {
                std::uint32_t tri = order[i];
                best.consider(tris[tri], tri, p);
            }
        } else {
            double dl = aabb_distance2(nodes[node.left].box, p);
            double dr = aabb_distance2(nodes[node.right].box, p);
            // Push the farther child first so the nearer is processed next.
            if (dl <= dr) {
                stack[top++] = node.right;
                stack[top++] = node.left;
            } else {
                stack[top++] = node.left;
                stack[top++] = node.right;
            }
        }
    }
}

} // namespace

DistanceResult MeshIndex::unsigned_distance(const Vec3& p) const {
    BestHit best;
    traverse_nearest(nodes_, order_, tris_, p, best);
    return {std::sqrt(best.d2), best.point, best.tri};
}

DistanceResult MeshIndex::unsigned_distance_linear(const Vec3& p) const {
    BestHit best;
    for (std::uint32_t t = 0; t < tris_.size(); ++t) best.consider(tris_[t], t, p);
    return {std::sqrt(best.d2), best.point, best.tri};
}

Vec3 MeshIndex::feature_pseudonormal(std::uint32_t tri, TriFeature feature) const {
    const auto& v = tri_verts_[tri];
    switch (feature) {
    case TriFeature::VertA: return vertex_normals_[v[0]];
    case TriFeature::VertB: return vertex_normals_[v[1]];
    case TriFeature::VertC: return vertex_normals_[v[2]];
    case TriFeature::EdgeAB: return edge_normals_.at(edge_key(v[0], v[1]));
    case TriFeature::EdgeBC: return edge_normals_.at(edge_key(v[1], v[2]));
    case TriFeature::EdgeCA: return edge_normals_.at(edge_key(v[2], v[0]));
    case TriFeature::Face: return face_normals_[tri];
    }
    return face_normals_[tri];
}

double MeshIndex::signed_distance(const Vec3& p) const {
    BestHit best;
    traverse_nearest(nodes_, order_, tris_, p, best);

    double d = std::sqrt(best.d2);
    if (d < kOnSurface) return 0.0;
    if (!closed_) return d;

    Vec3 n = feature_pseudonormal(best.tri, best.feature);
    return dot(p - best.point, n) < 0.0 ? -d : d;
}

double MeshIndex::signed_distance_linear(const Vec3& p) const {
    BestHit best;
    for (std::uint32_t t = 0; t < tris_.size(); ++t) best.consider(tris_[t], t, p);

    double d = std::sqrt(best.d2);
    if (d < kOnSurface) return 0.0;
    if (!closed_) return d;

    Vec3 n = feature_pseudonormal(best.tri, best.feature);
    return dot(p - best.point, n) < 0.0 ? -d : d;
}

} // namespace m2c
