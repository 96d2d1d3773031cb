#include "m2c/scenegen.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "m2c/errors.hpp"

namespace m2c {

namespace {

// 12 triangles, outward winding, welded corner coordinates.
std::vector<Triangle> box_mesh(const Aabb& box) {
    const Vec3& lo = box.min;
    const Vec3& hi = box.max;
    Vec3 v[8] = {
        {lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
        {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
    };
    static const int faces[6][4] = {
        {0, 3, 2, 1}, // bottom (z-)
        {4, 5, 6, 7}, // top (z+)
        {0, 1, 5, 4}, // y-
        {2, 3, 7, 6}, // y+
        {1, 2, 6, 5}, // x+
        {3, 0, 4, 7}, // x-
    };
    std::vector<Triangle> tris;
    tris.reserve(12);
    for (const auto& f : faces) {
        tris.push_back(make_triangle(v[f[0]], v[f[1]], v[f[2]]));
        tris.push_back(make_triangle(v[f[0]], v[f[2]], v[f[3]]));
    }
    return tris;
}

std::string class_slug(const std::string& name) {
    std::string slug;
    for (char c : name)
        slug.push_back(std::isalnum(static_cast<unsigned char>(c))
                           ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                           : '-');
    return slug;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t h = seed ^ (salt * 0x9e3779b97f4a7c15ull);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 33;
    return h;
}

} // namespace

float class_intensity(std::uint8_t class_id) {
    // Arbitrary distinct reflectances, one per class slot.
    static const float table[18] = {
        0.62f, 0.35f, 0.88f, 0.47f, 0.53f, 0.96f, 0.41f, 0.29f, 0.74f,
        0.91f, 0.58f, 0.66f, 0.80f, 0.70f, 0.44f, 0.84f, 0.23f, 0.15f,
    };
    return table[class_id % 18];
}

void class_color(std::uint8_t class_id, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
    static const std::uint8_t palette[18][3] = {
        {130, 10, 117},  {41, 143, 8},    {181, 250, 158}, {5, 255, 242},
        {56, 153, 148},  {31, 5, 252},    {166, 245, 242}, {36, 23, 150},
        {138, 125, 240}, {117, 186, 204}, {237, 186, 232}, {247, 18, 8},
        {255, 227, 0},   {247, 168, 163}, {191, 48, 41},   {201, 196, 176},
        {255, 245, 176}, {255, 3, 0},
    };
    const auto& c = palette[class_id % 18];
    r = c[0];
    g = c[1];
    b = c[2];
}

RoomSpec RoomSpec::parse(std::istream& source) {
    RoomSpec spec;
    spec.objects.clear();
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<std::string, Aabb>> placements;

    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;

        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto bad = [&](const std::string& why) {
            return ParseError("room spec line " + std::to_string(line_no) + ": " + why);
        };
        auto expect_eq = [&] {
            std::string eq;
            if (!(ls >> eq) || eq != "=") throw bad("expected '=' after " + key);
        };

        if (key == "object") {
            std::string class_name;
            if (!(ls >> class_name)) throw bad("expected class name");
            std::replace(class_name.begin(), class_name.end(), '_', ' ');
            Aabb box;
            if (!(ls >> box.min.x >> box.min.y >> box.min.z >> box.max.x >> box.max.y >> box.max.z))
                throw bad("expected six box coordinates");
            placements.emplace_back(class_name, box);
        } else if (key == "taxonomy") {
            expect_eq();
            std::string value;
            ls >> value;
            if (value == "gold") spec.taxonomy = TaxonomyId::Gold;
            else if (value == "silver") spec.taxonomy = TaxonomyId::Silver;
            else throw bad("taxonomy must be gold or silver");
        } else if (key == "extent") {
            expect_eq();
            if (!(ls >> spec.extent.x >> spec.extent.y >> spec.extent.z))
                throw bad("expected three extents");
        } else {
            expect_eq();
            double value;
            if (!(ls >> value)) throw bad("expected a number for " + key);
            if (key == "wall_thickness") spec.wall_thickness = value;
            else if (key == "shell_gap") spec.shell_gap = value;
            else if (key == "density") spec.density = value;
            else if (key == "sigma") spec.sigma = value;
            else if (key == "outliers") spec.outliers = static_cast<std::uint64_t>(value);
            else if (key == "seed") spec.seed = static_cast<std::uint64_t>(value);
            else throw bad("unknown key '" + key + "'");
        }
    }

    const Taxonomy& tax = taxonomy_for(spec.taxonomy);
    for (auto& [class_name, box] : placements) {
        auto id = tax.find(class_name);
        if (!id) throw ClassUnknown("room spec object class '" + class_name + "'");
        spec.objects.push_back({*id, box});
    }

    if (!(spec.extent.x > 0 && spec.extent.y > 0 && spec.extent.z > 0))
        throw ParseError("room extents must be positive");
    if (!(spec.density > 0)) throw ParseError("density must be positive");
    if (spec.sigma < 0) throw ParseError("sigma must be non-negative");
    if (!(spec.wall_thickness > 0)) throw ParseError("wall thickness must be positive");
    return spec;
}

RoomSpec RoomSpec::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open room spec '" + path + "'");
    return parse(in);
}

void RoomSpec::serialize(std::ostream& sink) const {
    const Taxonomy& tax = taxonomy_for(taxonomy);
    sink << "taxonomy = " << (taxonomy == TaxonomyId::Gold ? "gold" : "silver") << '\n'
         << "extent = " << extent.x << ' ' << extent.y << ' ' << extent.z << '\n'
         << "wall_thickness = " << wall_thickness << '\n'
         << "shell_gap = " << shell_gap << '\n'
         << "density = " << density << '\n'
         << "sigma = " << sigma << '\n'
         << "outliers = " << outliers << '\n'
         << "seed = " << seed << '\n';
    for (const Placement& p : objects) {
        std::string name = tax.names[p.class_id];
        std::replace(name.begin(), name.end(), ' ', '_');
        sink << "object " << name << ' ' << p.box.min.x << ' ' << p.box.min.y << ' '
             << p.box.min.z << ' ' << p.box.max.x << ' ' << p.box.max.y << ' '
             << p.box.max.z << '\n';
    }
}

SceneModel build_scene(const RoomSpec& spec) {
    const Taxonomy& tax = taxonomy_for(spec.taxonomy);
    const double t = spec.wall_thickness;
    const double gap = spec.shell_gap;
    const Vec3 e = spec.extent;

    auto wall_class = [&] {
        return spec.taxonomy == TaxonomyId::Gold ? gold_class::Wall : silver_class::Wall;
    }();
    auto slab_class = [&] {
        return spec.taxonomy == TaxonomyId::Gold ? gold_class::Slab : silver_class::Slab;
    }();
    auto covering_class = [&] {
        return spec.taxonomy == TaxonomyId::Gold ? gold_class::Covering
                                                 : silver_class::Covering;
    }();

    struct Draft {
        std::string name;
        std::uint8_t class_id;
        Aabb box;
    };
    std::vector<Draft> drafts;

    // Slab below, covering above, walls in between. The shell gap keeps
    // contact faces from being coplanar, so a surface point is interior
    // to exactly one object.
    drafts.push_back({"slab", slab_class,
                      {{-t, -t, -t}, {e.x + t, e.y + t, 0.0}}});
    drafts.push_back({"covering", covering_class,
                      {{-t, -t, e.z}, {e.x + t, e.y + t, e.z + t}}});
    const double z0 = gap, z1 = e.z - gap;
    drafts.push_back({"wall_xlo", wall_class, {{-t, -t, z0}, {0.0, e.y + t, z1}}});
    drafts.push_back({"wall_xhi", wall_class, {{e.x, -t, z0}, {e.x + t, e.y + t, z1}}});
    drafts.push_back({"wall_ylo", wall_class, {{0.0, -t, z0}, {e.x, 0.0, z1}}});
    drafts.push_back({"wall_yhi", wall_class, {{0.0, e.y, z0}, {e.x, e.y + t, z1}}});

    Aabb interior{{0.0, 0.0, 0.0}, {e.x, e.y, e.z}};
    std::vector<std::size_t> per_class_counter(tax.size(), 0);
    for (const RoomSpec::Placement& p : spec.objects) {
        if (!(contains(interior, p.box.min) && contains(interior, p.box.max)))
            throw OverlapError("object of class '" + tax.names[p.class_id] +
                               "' leaves the room interior");
        if (p.box.empty() || !(p.box.min.x < p.box.max.x && p.box.min.y < p.box.max.y &&
                               p.box.min.z < p.box.max.z))
            throw OverlapError("object of class '" + tax.names[p.class_id] +
                               "' has an empty box");
        char suffix[8];
        std::snprintf(suffix, sizeof(suffix), "_%02zu",
                      per_class_counter[p.class_id]++);
        drafts.push_back({class_slug(tax.names[p.class_id]) + suffix, p.class_id, p.box});
    }

    std::sort(drafts.begin(), drafts.end(),
              [](const Draft& a, const Draft& b) { return a.name < b.name; });

    SceneModel scene;
    scene.taxonomy_id = spec.taxonomy;
    scene.objects.reserve(drafts.size());
    for (Draft& d : drafts) {
        ClassedMesh mesh{static_cast<std::uint32_t>(scene.objects.size()), d.name,
                         d.class_id, MeshIndex::build(box_mesh(d.box)), {}};
        mesh.box = mesh.index.bounds();
        scene.objects.push_back(std::move(mesh));
    }
    return scene;
}

LabeledCloud sample_cloud(const SceneModel& scene, const RoomSpec& spec) {
    LabeledCloud cloud;
    cloud.taxonomy_id = scene.taxonomy_id;
    cloud.scan_id = "synthetic";

    for (const ClassedMesh& object : scene.objects) {
        std::mt19937_64 rng(mix_seed(spec.seed, object.object_id));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, spec.sigma);

        std::uint8_t cr, cg, cb;
        class_color(object.class_id, cr, cg, cb);
        const float intensity = class_intensity(object.class_id);

        for (const Triangle& tri : object.index.triangles()) {
            const double expected = spec.density * tri.area();
            auto count = static_cast<std::uint64_t>(expected);
            if (uni(rng) < expected - static_cast<double>(count)) ++count;

            for (std::uint64_t s = 0; s < count; ++s) {
                // Area-uniform barycentric draw.
                double su = std::sqrt(uni(rng));
                double v = uni(rng);
                Vec3 p = tri.a * (1.0 - su) + tri.b * (su * (1.0 - v)) + tri.c * (su * v);
                if (spec.sigma > 0.0) p += Vec3{gauss(rng), gauss(rng), gauss(rng)};

                PointRecord rec;
                rec.position = p;
                rec.r = cr;
                rec.g = cg;
                rec.b = cb;
                rec.intensity = intensity;
                rec.real_label = object.class_id;
                rec.pseudo_label = UNLABELED;
                cloud.push_back(rec);
            }
        }
    }

    if (spec.outliers > 0) {
        const std::uint8_t clutter = taxonomy_for(scene.taxonomy_id).clutter_id();
        std::mt19937_64 rng(mix_seed(spec.seed, 0xc1a77e5ull));
        std::uniform_real_distribution<double> ux(0.0, spec.extent.x);
        std::uniform_real_distribution<double> uy(0.0, spec.extent.y);
        std::uniform_real_distribution<double> uz(0.0, spec.extent.z);
        std::uint8_t cr, cg, cb;
        class_color(clutter, cr, cg, cb);
        for (std::uint64_t s = 0; s < spec.outliers; ++s) {
            PointRecord rec;
            rec.position = {ux(rng), uy(rng), uz(rng)};
            rec.r = cr;
            rec.g = cg;
            rec.b = cb;
            rec.intensity = class_intensity(clutter);
            rec.real_label = clutter;
            rec.pseudo_label = UNLABELED;
            cloud.push_back(rec);
        }
    }
    return cloud;
}

} // namespace m2c
