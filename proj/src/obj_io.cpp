#include "m2c/obj_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <istream>
#include <ostream>
#include <sstream>

#include "m2c/errors.hpp"

namespace m2c {

namespace {

struct FaceRef {
    long vertex = 0;
    long normal = 0; // 0 = absent
    bool has_normal = false;
};

// "7", "7/2", "7//3", "7/2/3", "-1//-2"
FaceRef parse_face_ref(const std::string& token, std::size_t line_no) {
    FaceRef ref;
    std::size_t first = token.find('/');
    auto to_long = [&](std::string_view s) -> long {
        long value = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw ParseError("line " + std::to_string(line_no) +
                             ": bad face index '" + std::string(s) + "'");
        return value;
    };
    if (first == std::string::npos) {
        ref.vertex = to_long(token);
        return ref;
    }
    ref.vertex = to_long(std::string_view(token).substr(0, first));
    std::size_t second = token.find('/', first + 1);
    if (second == std::string::npos) return ref; // v/t
    std::string_view ntok = std::string_view(token).substr(second + 1);
    if (!ntok.empty()) {
        ref.normal = to_long(ntok);
        ref.has_normal = true;
    }
    return ref;
}

std::size_t resolve_index(long raw, std::size_t count, std::size_t line_no,
                          const char* what) {
    if (raw > 0) {
        std::size_t idx = static_cast<std::size_t>(raw);
        if (idx > count)
            throw IndexOutOfRange("line " + std::to_string(line_no) + ": " + what +
                                  " index " + std::to_string(raw) + " exceeds " +
                                  std::to_string(count));
        return idx - 1;
    }
    if (raw < 0) {
        std::size_t back = static_cast<std::size_t>(-raw);
        if (back > count)
            throw IndexOutOfRange("line " + std::to_string(line_no) + ": relative " +
                                  std::string(what) + " index " + std::to_string(raw) +
                                  " exceeds " + std::to_string(count));
        return count - back;
    }
    throw IndexOutOfRange("line " + std::to_string(line_no) + ": " + what +
                          " indices are 1-based, got 0");
}

double parse_real(const std::string& token, std::size_t line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
    }
}

} // namespace

std::vector<Triangle> parse_mesh(std::istream& source, ObjParseStats* stats) {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<Triangle> out;
    ObjParseStats local;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue; // blank
        if (tag[0] == '#') continue;

        if (tag == "v" || tag == "vn") {
            std::string sx, sy, sz;
            if (!(ls >> sx >> sy >> sz))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected three coordinates after '" + tag + "'");
            Vec3 v{parse_real(sx, line_no), parse_real(sy, line_no), parse_real(sz, line_no)};
            if (tag == "v") vertices.push_back(v);
            else normals.push_back(v);
        } else if (tag == "f") {
            std::vector<std::size_t> vi;
            std::vector<Vec3> vn;
            bool all_normals = true;
            std::string token;
            while (ls >> token) {
                FaceRef ref = parse_face_ref(token, line_no);
                vi.push_back(resolve_index(ref.vertex, vertices.size(), line_no, "vertex"));
                if (ref.has_normal)
                    vn.push_back(normals[resolve_index(ref.normal, normals.size(), line_no, "normal")]);
                else
                    all_normals = false;
            }
            if (vi.size() < 3)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": face needs at least 3 vertices");
            for (std::size_t k = 1; k + 1 < vi.size(); ++k) {
                Triangle t;
                t.a = vertices[vi[0]];
                t.b = vertices[vi[k]];
                t.c = vertices[vi[k + 1]];
                Vec3 n;
                if (all_normals) n = normalized(vn[0] + vn[k] + vn[k + 1]);
                if (!all_normals || norm2(n) == 0.0) n = t.geometric_normal();
                t.normal = n;
                out.push_back(t);
            }
        } else {
            ++local.ignored_records;
        }
    }

    if (out.empty()) throw EmptyMesh("no faces in source");
    if (stats) *stats = local;
    return out;
}

std::vector<Triangle> parse_mesh_file(const std::string& path, ObjParseStats* stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file '" + path + "'");
    return parse_mesh(in, stats);
}

void serialize_mesh(const std::vector<Triangle>& triangles, std::ostream& sink) {
    // Weld bit-identical positions so shared edges survive the round trip.
    auto bits = [](double v) {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof(b));
        return b;
    };
    std::map<std::array<std::uint64_t, 3>, std::size_t> weld;
    std::vector<Vec3> verts;
    std::vector<std::array<std::size_t, 3>> faces;
    faces.reserve(triangles.size());
    for (const Triangle& t : triangles) {
        std::array<std::size_t, 3> f{};
        for (int i = 0; i < 3; ++i) {
            Vec3 v = t.vertex(i);
            auto [it, inserted] = weld.try_emplace({bits(v.x), bits(v.y), bits(v.z)}, verts.size());
            if (inserted) verts.push_back(v);
            f[i] = it->second;
        }
        faces.push_back(f);
    }

    char buf[96];
    for (const Vec3& v : verts) {
        std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        sink << buf;
    }
    for (const auto& f : faces)
        sink << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void serialize_mesh_file(const std::vector<Triangle>& triangles, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    serialize_mesh(triangles, out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace m2c
