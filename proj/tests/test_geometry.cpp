#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "m2c/errors.hpp"
#include "m2c/mesh_index.hpp"
#include "support/oracles.hpp"
#include "support/testmesh.hpp"

using m2c::Aabb;
using m2c::MeshIndex;
using m2c::Triangle;
using m2c::Vec3;

namespace {

Vec3 random_point(std::mt19937_64& rng, double span) {
    std::uniform_real_distribution<double> u(-span, span);
    return {u(rng), u(rng), u(rng)};
}

} // namespace

TEST_CASE("closest point on triangle against independent oracle") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int iter = 0; iter < 5000; ++iter) {
        Triangle t = m2c::make_triangle({u(rng), u(rng), u(rng)},
                                        {u(rng), u(rng), u(rng)},
                                        {u(rng), u(rng), u(rng)});
        if (t.area() < 1e-9) continue;
        Vec3 p = random_point(rng, 3.0);
        double got = std::sqrt(m2c::closest_point_on_triangle(t, p).dist2);
        double want = oracle::point_triangle_distance(p, t.a, t.b, t.c);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("build_index watertightness detection") {
    CHECK(MeshIndex::build(testmesh::unit_cube()).closed());

    std::vector<Triangle> single{m2c::make_triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0})};
    CHECK_FALSE(MeshIndex::build(single).closed());

    // Removing one face leaves 10 triangles and 4 boundary edges.
    std::vector<Triangle> open = testmesh::open_cube();
    CHECK(open.size() == 10);
    CHECK_FALSE(MeshIndex::build(open).closed());
}

TEST_CASE("build_index rejects fully degenerate input") {
    Vec3 a{0, 0, 0}, b{1, 0, 0};
    std::vector<Triangle> bad{m2c::make_triangle(a, b, a)};
    CHECK_THROWS_AS(MeshIndex::build(bad), m2c::EmptyMesh);

    // degenerate triangles are dropped, the rest survive
    std::vector<Triangle> mixed = testmesh::unit_cube();
    mixed.push_back(m2c::make_triangle(a, b, a));
    MeshIndex index = MeshIndex::build(mixed);
    CHECK(index.triangles().size() == 12);
    CHECK(index.degenerate_dropped() == 1);
    CHECK(index.closed());
}

TEST_CASE("unsigned distance basics on the unit cube") {
    MeshIndex cube = MeshIndex::build(testmesh::unit_cube());

    CHECK(cube.unsigned_distance({0.25, 0.1, 0.5}).distance == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cube.unsigned_distance({1.0, 0.0, 0.0}).distance == doctest::Approx(0.5));
    CHECK(cube.unsigned_distance({0.5, 0.5, 0.5}).distance == doctest::Approx(0.0).epsilon(1e-12));

    auto far = cube.unsigned_distance({2.0, 0.0, 0.0});
    CHECK(far.distance == doctest::Approx(1.5));
    CHECK(far.nearest.x == doctest::Approx(0.5));
}

TEST_CASE("signed distance convention on the unit cube") {
    MeshIndex cube = MeshIndex::build(testmesh::unit_cube());

    CHECK(cube.signed_distance({0.0, 0.0, 0.0}) == doctest::Approx(-0.5));
    CHECK(cube.signed_distance({0.5, 0.0, 0.0}) == 0.0);
    CHECK(cube.signed_distance({0.0, 0.0, 0.53}) == doctest::Approx(0.03));
    CHECK(cube.signed_distance({0.0, 0.0, -0.53}) == doctest::Approx(0.03));
    CHECK(cube.signed_distance({0.49, 0.49, 0.49}) == doctest::Approx(-0.01));
}

TEST_CASE("open meshes fall back to unsigned distance") {
    MeshIndex open = MeshIndex::build(testmesh::open_cube());
    // center would be inside were the cube closed
    CHECK(open.signed_distance({0.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(open.signed_distance({0.0, 0.0, 2.0}) == doctest::Approx(1.5));
}

TEST_CASE("indexed distance equals brute force on random soups") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int round = 0; round < 5; ++round) {
        std::vector<Triangle> tris;
        for (int i = 0; i < 200; ++i)
            tris.push_back(m2c::make_triangle({u(rng), u(rng), u(rng)},
                                              {u(rng), u(rng), u(rng)},
                                              {u(rng), u(rng), u(rng)}));
        MeshIndex index = MeshIndex::build(tris);
        for (int q = 0; q < 500; ++q) {
            Vec3 p = random_point(rng, 1.5);
            double got = index.unsigned_distance(p).distance;
            double lin = index.unsigned_distance_linear(p).distance;
            double want = oracle::mesh_distance(index.triangles(), p);
            CHECK(got == lin);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("signed distance sign agrees with ray parity on closed meshes") {
    std::mt19937_64 rng(7);

    auto check_mesh = [&](const std::vector<Triangle>& tris, double span) {
        MeshIndex index = MeshIndex::build(tris);
        REQUIRE(index.closed());
        int checked = 0;
        for (int q = 0; q < 5000; ++q) {
            Vec3 p = random_point(rng, span);
            double d = index.signed_distance(p);
            if (d == 0.0) continue; // on-surface points have no parity
            bool inside = oracle::inside_by_ray_parity(index.triangles(), p, rng);
            CHECK((d < 0.0) == inside);
            ++checked;
        }
        CHECK(checked > 4500);
    };

    // 1e4 sampled points across the two closed meshes
    check_mesh(testmesh::unit_cube(), 1.0);
    check_mesh(testmesh::bumpy_sphere(11, 20, 1.0, 0.08, 99), 1.4);
}

TEST_CASE("signed distance continuity across a face") {
    MeshIndex cube = MeshIndex::build(testmesh::unit_cube());
    double prev = cube.signed_distance({0.3, -0.2, 0.4});
    for (int i = 1; i <= 200; ++i) {
        double z = 0.4 + 0.2 * i / 200.0; // crosses the z=0.5 face
        double d = cube.signed_distance({0.3, -0.2, z});
        CHECK(std::abs(d - prev) < 0.0015);
        prev = d;
    }
    CHECK(prev == doctest::Approx(0.1));
}

TEST_CASE("aabb helpers") {
    MeshIndex cube = MeshIndex::build(testmesh::unit_cube());
    Aabb box = m2c::mesh_aabb(cube);
    CHECK(box.min.x == doctest::Approx(-0.5));
    CHECK(box.max.z == doctest::Approx(0.5));

    Aabb grown = m2c::dilate(box, 0.04);
    CHECK(grown.min.x == doctest::Approx(-0.54));
    CHECK(grown.max.y == doctest::Approx(0.54));

    CHECK(m2c::contains(box, {0.5, 0.5, 0.5}));   // closed interval
    CHECK(m2c::contains(box, {-0.5, 0.0, 0.0}));
    CHECK_FALSE(m2c::contains(box, {0.5001, 0.0, 0.0}));

    // dilate(box, r) contains every point within r of the box
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        Vec3 p{u(rng), u(rng), u(rng)};
        double r = 0.25;
        if (std::sqrt(m2c::aabb_distance2(box, p)) <= r)
            CHECK(m2c::contains(m2c::dilate(box, r), p));
    }
}

TEST_CASE("pseudonormal sign is robust near edges and vertices") {
    MeshIndex cube = MeshIndex::build(testmesh::unit_cube());
    // diagonal directions probe vertex and edge pseudonormals
    CHECK(cube.signed_distance({0.6, 0.6, 0.6}) > 0.0);
    CHECK(cube.signed_distance({0.6, 0.6, 0.0}) > 0.0);
    CHECK(cube.signed_distance({0.499999, 0.499999, 0.499999}) < 0.0);
    CHECK(cube.signed_distance({0.499999, 0.499999, 0.0}) < 0.0);
}
