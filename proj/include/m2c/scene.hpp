#ifndef M2C_SCENE_HPP
#define M2C_SCENE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "m2c/geom.hpp"
#include "m2c/mesh_index.hpp"
#include "m2c/taxonomy.hpp"

namespace m2c {

// Sidecar mapping from object name patterns (glob-style: * and ?) to
// class names. One entry per line: `pattern = Class name`. Blank lines
// and lines starting with # are skipped. Each object must match exactly
// one entry.
class ClassManifest {
public:
    struct Entry {
        std::string pattern;
        std::string class_name;
    };

    static ClassManifest parse(std::istream& source);
    static ClassManifest parse_file(const std::string& path);

    const std::vector<Entry>& entries() const { return entries_; }
    void add(std::string pattern, std::string class_name);

    // Resolves an object name to a class id under the taxonomy. Throws
    // UnmatchedObject, AmbiguousObject, ClassUnknown.
    std::uint8_t resolve(const std::string& object_name, const Taxonomy& tax) const;

    void serialize(std::ostream& sink) const;
    void serialize_file(const std::string& path) const;

private:
    std::vector<Entry> entries_;
};

bool glob_match(const std::string& pattern, const std::string& text);

struct ClassedMesh {
    std::uint32_t object_id = 0;
    std::string name;
    std::uint8_t class_id = 0;
    MeshIndex index;
    Aabb box; // equals mesh_aabb(index)
};

struct SceneModel {
    TaxonomyId taxonomy_id = TaxonomyId::Gold;
    std::vector<ClassedMesh> objects;
};

// Loads every *.obj in the directory, resolves classes through the
// manifest, and assigns object ids in lexicographic filename order.
SceneModel load_scene(const std::string& directory, const ClassManifest& manifest,
                      TaxonomyId taxonomy);

// Writes one `<name>.obj` per object plus `manifest.txt` generated from
// the objects' classes. Inverse of load_scene for generated scenes.
void save_scene(const SceneModel& scene, const std::string& directory);

} // namespace m2c

#endif
