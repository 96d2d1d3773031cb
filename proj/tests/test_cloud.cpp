#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "m2c/cloud.hpp"
#include "m2c/cloud_io.hpp"
#include "m2c/errors.hpp"
#include "m2c/point_grid.hpp"
#include "support/oracles.hpp"
#include "support/testmesh.hpp"

using m2c::LabeledCloud;
using m2c::PointRecord;
using m2c::Vec3;

namespace {

std::string to_bytes(const LabeledCloud& cloud) {
    std::ostringstream out(std::ios::binary);
    m2c::write_cloud(cloud, out);
    return out.str();
}

LabeledCloud from_bytes(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return m2c::read_cloud(in);
}

bool identical(const LabeledCloud& a, const LabeledCloud& b) {
    return a.taxonomy_id == b.taxonomy_id && a.x == b.x && a.y == b.y && a.z == b.z &&
           a.r == b.r && a.g == b.g && a.b == b.b &&
           [&] {
               if (a.intensity.size() != b.intensity.size()) return false;
               for (std::size_t i = 0; i < a.intensity.size(); ++i) {
                   float fa = a.intensity[i], fb = b.intensity[i];
                   if (std::memcmp(&fa, &fb, sizeof(float)) != 0) return false;
               }
               return true;
           }() &&
           a.real_label == b.real_label && a.pseudo_label == b.pseudo_label;
}

} // namespace

TEST_CASE("empty cloud writes a header-only file") {
    LabeledCloud empty;
    std::string bytes = to_bytes(empty);
    CHECK(bytes.size() == m2c::kCloudHeaderSize);
    LabeledCloud back = from_bytes(bytes);
    CHECK(back.size() == 0);
    CHECK(back.taxonomy_id == m2c::TaxonomyId::Gold);
}

TEST_CASE("single point round-trips bit-exactly") {
    LabeledCloud cloud;
    cloud.push_back({{0.0, 0.0, 0.0}, 255, 0, 0, 1.0f, 17, 17});
    std::string bytes = to_bytes(cloud);
    CHECK(bytes.size() == m2c::kCloudHeaderSize + 33);
    CHECK(identical(cloud, from_bytes(bytes)));
    CHECK(to_bytes(from_bytes(bytes)) == bytes);
}

TEST_CASE("random clouds round-trip bit-exactly") {
    std::mt19937_64 rng(88);
    for (int round = 0; round < 50; ++round) {
        auto tax = round % 2 ? m2c::TaxonomyId::Gold : m2c::TaxonomyId::Silver;
        LabeledCloud cloud = testmesh::random_cloud(rng() % 300, tax, rng);
        std::string bytes = to_bytes(cloud);
        CHECK(identical(cloud, from_bytes(bytes)));
        CHECK(to_bytes(from_bytes(bytes)) == bytes);
    }
}

TEST_CASE("header corruption is rejected") {
    LabeledCloud cloud;
    cloud.push_back({{1, 2, 3}, 9, 9, 9, 0.5f, 0, 1});
    std::string good = to_bytes(cloud);

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(from_bytes(bad_magic), m2c::BadMagic);

    std::string bad_version = good;
    bad_version[8] = 9;
    CHECK_THROWS_AS(from_bytes(bad_version), m2c::BadVersion);

    std::string bad_taxonomy = good;
    bad_taxonomy[10] = 7;
    CHECK_THROWS_AS(from_bytes(bad_taxonomy), m2c::BadVersion);

    CHECK_THROWS_AS(from_bytes(good.substr(0, 16)), m2c::TruncatedFile);
    CHECK_THROWS_AS(from_bytes(good.substr(0, good.size() - 1)), m2c::TruncatedFile);

    // count larger than payload
    std::string short_payload = good;
    short_payload[12] = 5;
    CHECK_THROWS_AS(from_bytes(short_payload), m2c::TruncatedFile);
}

TEST_CASE("out-of-range intensity and labels are rejected") {
    LabeledCloud cloud;
    cloud.push_back({{0, 0, 0}, 0, 0, 0, 0.25f, 0, 0});
    std::string bytes = to_bytes(cloud);

    // intensity block starts after header + 24 (xyz) + 3 (rgb)
    std::size_t off = m2c::kCloudHeaderSize + 27;
    float bad = 1.5f;
    std::string corrupt = bytes;
    std::memcpy(corrupt.data() + off, &bad, sizeof(bad));
    CHECK_THROWS_AS(from_bytes(corrupt), m2c::IntensityOutOfRange);

    std::string bad_label = bytes;
    bad_label[off + 4] = 42; // real label slot, Gold has 18 classes
    CHECK_THROWS_AS(from_bytes(bad_label), m2c::LabelOutOfRange);

    LabeledCloud hot;
    CHECK_THROWS_AS(to_bytes([&] {
        LabeledCloud c;
        c.push_back({{0, 0, 0}, 0, 0, 0, 1.5f, 0, 0});
        return c;
    }()), m2c::IntensityOutOfRange);
}

TEST_CASE("ascii interchange") {
    std::mt19937_64 rng(3);
    LabeledCloud cloud = testmesh::random_cloud(64, m2c::TaxonomyId::Silver, rng);
    std::ostringstream text;
    m2c::write_cloud_ascii(cloud, text);

    std::istringstream in(text.str());
    LabeledCloud back = m2c::read_cloud_ascii(in, m2c::TaxonomyId::Silver);
    CHECK(identical(cloud, back));

    std::istringstream bad("1 2 3 4 5\n");
    CHECK_THROWS_AS(m2c::read_cloud_ascii(bad, m2c::TaxonomyId::Gold), m2c::ParseError);

    std::istringstream hot("0 0 0 1 2 3 1.5 0 0\n");
    CHECK_THROWS_AS(m2c::read_cloud_ascii(hot, m2c::TaxonomyId::Gold),
                    m2c::IntensityOutOfRange);
}

TEST_CASE("class_histogram counts and unlabeled") {
    LabeledCloud cloud;
    cloud.taxonomy_id = m2c::TaxonomyId::Gold;
    for (int i = 0; i < 5; ++i)
        cloud.push_back({{double(i), 0, 0}, 0, 0, 0, 0.1f, m2c::gold_class::Clutter, m2c::UNLABELED});
    auto hist = m2c::class_histogram(cloud, m2c::LabelColumn::Real);
    CHECK(hist.counts[m2c::gold_class::Clutter] == 5);
    CHECK(hist.labeled_total() == 5);
    CHECK(hist.unlabeled == 0);

    auto pseudo = m2c::class_histogram(cloud, m2c::LabelColumn::Pseudo);
    CHECK(pseudo.labeled_total() == 0);
    CHECK(pseudo.unlabeled == 5);

    LabeledCloud empty;
    auto none = m2c::class_histogram(empty, m2c::LabelColumn::Real);
    CHECK(none.labeled_total() == 0);
    CHECK(none.unlabeled == 0);

    // synthetic mixed cloud matches generator bookkeeping
    std::mt19937_64 rng(55);
    std::vector<std::uint64_t> emitted(18, 0);
    LabeledCloud mixed;
    for (int i = 0; i < 2000; ++i) {
        std::uint8_t c = static_cast<std::uint8_t>(rng() % 18);
        ++emitted[c];
        mixed.push_back({{0, 0, 0}, 0, 0, 0, 0.0f, c, m2c::UNLABELED});
    }
    auto got = m2c::class_histogram(mixed, m2c::LabelColumn::Real);
    CHECK(got.counts == emitted);

    LabeledCloud bad;
    bad.push_back({{0, 0, 0}, 0, 0, 0, 0.0f, 30, m2c::UNLABELED});
    CHECK_THROWS_AS(m2c::class_histogram(bad, m2c::LabelColumn::Real),
                    m2c::LabelOutOfRange);
}

TEST_CASE("voxel_subsample basics") {
    LabeledCloud cloud;
    cloud.push_back({{0.001, 0.001, 0.001}, 0, 0, 0, 0.0f, 0, 0});
    cloud.push_back({{0.001, 0.001, 0.001}, 0, 0, 0, 0.0f, 1, 0});
    LabeledCloud out = m2c::voxel_subsample(cloud, 0.01);
    REQUIRE(out.size() == 1);
    CHECK(out.real_label[0] == 0); // tie resolves to the lowest input index

    LabeledCloud spread;
    spread.push_back({{0, 0, 0}, 0, 0, 0, 0.0f, 0, 0});
    spread.push_back({{1, 1, 1}, 0, 0, 0, 0.0f, 0, 0});
    CHECK(m2c::voxel_subsample(spread, 0.01).size() == 2);
}

TEST_CASE("voxel_subsample keeps the member nearest the centroid") {
    LabeledCloud cloud;
    // one voxel at cell 0.1: centroid pulled toward the cluster
    cloud.push_back({{0.010, 0.010, 0.010}, 0, 0, 0, 0.0f, 0, 0});
    cloud.push_back({{0.090, 0.090, 0.090}, 0, 0, 0, 0.0f, 1, 0});
    cloud.push_back({{0.080, 0.080, 0.080}, 0, 0, 0, 0.0f, 2, 0});
    // centroid = (0.06, 0.06, 0.06); nearest member is #2 at 0.08
    LabeledCloud out = m2c::voxel_subsample(cloud, 0.1);
    REQUIRE(out.size() == 1);
    CHECK(out.real_label[0] == 2);
}

TEST_CASE("voxel_subsample census and idempotence") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    LabeledCloud cloud;
    for (int i = 0; i < 1000; ++i)
        cloud.push_back({{u(rng), u(rng), u(rng)}, 0, 0, 0, 0.0f, 0, 0});

    LabeledCloud out = m2c::voxel_subsample(cloud, 0.05);
    CHECK(out.size() == oracle::voxel_census(cloud, 0.05));

    // no two survivors share a voxel
    CHECK(out.size() == oracle::voxel_census(out, 0.05));

    // idempotent
    LabeledCloud again = m2c::voxel_subsample(out, 0.05);
    CHECK(identical(out, again));

    // order preserved
    LabeledCloud tiny = m2c::voxel_subsample(cloud, 1.0);
    CHECK(tiny.size() == 1);
}

TEST_CASE("point grid query_box equals linear scan") {
    std::mt19937_64 rng(31);
    LabeledCloud cloud = testmesh::random_cloud(10000, m2c::TaxonomyId::Gold, rng);
    m2c::PointGrid grid = m2c::build_point_grid(cloud, 7.0);
    CHECK(grid.indexed_points() == cloud.size());

    std::uniform_real_distribution<double> u(-60.0, 60.0);
    for (int round = 0; round < 100; ++round) {
        m2c::Aabb box;
        box.expand({u(rng), u(rng), u(rng)});
        box.expand({u(rng), u(rng), u(rng)});
        auto got = m2c::query_box(grid, box);
        auto want = oracle::box_scan(cloud, box);
        CHECK(got == want);
    }

    // covering box returns everything, empty box nothing
    m2c::Aabb all;
    all.expand({-100, -100, -100});
    all.expand({100, 100, 100});
    CHECK(m2c::query_box(grid, all).size() == cloud.size());

    m2c::Aabb nothing;
    nothing.expand({500, 500, 500});
    nothing.expand({501, 501, 501});
    CHECK(m2c::query_box(grid, nothing).empty());
}

TEST_CASE("grid nearest labeled distance matches brute force") {
    std::mt19937_64 rng(77);
    LabeledCloud cloud = testmesh::random_cloud(2000, m2c::TaxonomyId::Gold, rng);
    m2c::PointGrid grid = m2c::build_point_grid(cloud, 5.0);

    std::uniform_real_distribution<double> u(-80.0, 80.0);
    for (int round = 0; round < 200; ++round) {
        Vec3 q{u(rng), u(rng), u(rng)};
        std::uint8_t want = static_cast<std::uint8_t>(rng() % 18);
        double got = grid.nearest_labeled_distance2(q, cloud.real_label, want);
        double brute = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cloud.size(); ++i)
            if (cloud.real_label[i] == want)
                brute = std::min(brute, m2c::norm2(cloud.position(i) - q));
        CHECK(got == brute);
    }

    // absent class → +infinity
    std::vector<std::uint8_t> all_zero(cloud.size(), 0);
    CHECK(grid.nearest_labeled_distance2({0, 0, 0}, all_zero, 5) ==
          std::numeric_limits<double>::infinity());
}
