#include "m2c/scene.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "m2c/errors.hpp"
#include "m2c/obj_io.hpp"

namespace fs = std::filesystem;

namespace m2c {

bool glob_match(const std::string& pattern, const std::string& text) {
    // Iterative * / ? matcher with backtracking to the last star.
    std::size_t p = 0, t = 0;
    std::size_t star = std::string::npos, star_t = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_t = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++star_t;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

ClassManifest ClassManifest::parse(std::istream& source) {
    ClassManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("manifest line " + std::to_string(line_no) +
                             ": expected `pattern = Class`");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t");
            std::size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string pattern = trim(line.substr(0, eq));
        std::string class_name = trim(line.substr(eq + 1));
        if (pattern.empty() || class_name.empty())
            throw ParseError("manifest line " + std::to_string(line_no) +
                             ": empty pattern or class");
        manifest.add(std::move(pattern), std::move(class_name));
    }
    return manifest;
}

ClassManifest ClassManifest::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    return parse(in);
}

void ClassManifest::add(std::string pattern, std::string class_name) {
    for (const Entry& e : entries_)
        if (e.pattern == pattern && e.class_name != class_name)
            throw ParseError("pattern '" + pattern + "' maps to both '" +
                             e.class_name + "' and '" + class_name + "'");
    entries_.push_back({std::move(pattern), std::move(class_name)});
}

std::uint8_t ClassManifest::resolve(const std::string& object_name,
                                    const Taxonomy& tax) const {
    const Entry* matched = nullptr;
    for (const Entry& e : entries_) {
        if (!glob_match(e.pattern, object_name)) continue;
        if (matched && matched->pattern != e.pattern)
            throw AmbiguousObject("object '" + object_name + "' matches both '" +
                                  matched->pattern + "' and '" + e.pattern + "'");
        matched = &e;
    }
    if (!matched) throw UnmatchedObject("object '" + object_name + "' matches no manifest entry");
    auto id = tax.find(matched->class_name);
    if (!id)
        throw ClassUnknown("class '" + matched->class_name + "' not in the " +
                           (tax.id == TaxonomyId::Gold ? "Gold" : "Silver") + " taxonomy");
    return *id;
}

void ClassManifest::serialize(std::ostream& sink) const {
    for (const Entry& e : entries_) sink << e.pattern << " = " << e.class_name << '\n';
}

void ClassManifest::serialize_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    serialize(out);
}

SceneModel load_scene(const std::string& directory, const ClassManifest& manifest,
                      TaxonomyId taxonomy) {
    const Taxonomy& tax = taxonomy_for(taxonomy);

    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(directory, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".obj")
            files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list scene directory '" + directory + "': " + ec.message());
    if (files.empty()) throw EmptyMesh("no .obj files in '" + directory + "'");
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    SceneModel scene;
    scene.taxonomy_id = taxonomy;
    scene.objects.reserve(files.size());
    for (const fs::path& file : files) {
        std::string name = file.stem().string();
        std::uint8_t class_id = manifest.resolve(name, tax);
        std::vector<Triangle> tris = parse_mesh_file(file.string());
        ClassedMesh mesh{static_cast<std::uint32_t>(scene.objects.size()),
                         std::move(name), class_id, MeshIndex::build(tris), {}};
        mesh.box = mesh.index.bounds();
        scene.objects.push_back(std::move(mesh));
    }
    return scene;
}

void save_scene(const SceneModel& scene, const std::string& directory) {
    const Taxonomy& tax = taxonomy_for(scene.taxonomy_id);
    fs::create_directories(directory);

    // One manifest pattern per distinct name stem. Object names generated
    // by the room builder are `<slug>_<nn>` or a bare structural slug, so
    // `<slug>*` patterns stay unambiguous.
    std::map<std::string, std::string> patterns;
    for (const ClassedMesh& object : scene.objects) {
        std::string slug = object.name.substr(0, object.name.find('_'));
        auto [it, inserted] = patterns.emplace(slug + "*", tax.names[object.class_id]);
        if (!inserted && it->second != tax.names[object.class_id])
            throw std::logic_error("objects sharing slug '" + slug +
                                   "' have different classes");
        serialize_mesh_file(object.index.triangles(),
                            (fs::path(directory) / (object.name + ".obj")).string());
    }

    ClassManifest manifest;
    for (const auto& [pattern, class_name] : patterns) manifest.add(pattern, class_name);
    manifest.serialize_file((fs::path(directory) / "manifest.txt").string());
}

} // namespace m2c
