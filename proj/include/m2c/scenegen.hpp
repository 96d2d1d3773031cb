#ifndef M2C_SCENEGEN_HPP
#define M2C_SCENEGEN_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "m2c/cloud.hpp"
#include "m2c/scene.hpp"

namespace m2c {

// Synthetic room description: a floor slab, a ceiling covering and four
// walls are always built; extra boxes are placed inside the interior.
// Everything is deterministic in `seed`.
struct RoomSpec {
    TaxonomyId taxonomy = TaxonomyId::Gold;
    Vec3 extent{6.0, 4.0, 3.0};    // interior size, meters
    double wall_thickness = 0.1;
    double shell_gap = 0.002;      // clearance between structural shells
    double density = 2000.0;       // points per square meter
    double sigma = 0.0;            // isotropic Gaussian noise, meters
    std::uint64_t outliers = 0;    // uniform Clutter points in the volume
    std::uint64_t seed = 1;

    struct Placement {
        std::uint8_t class_id = 0;
        Aabb box;
    };
    std::vector<Placement> objects;

    // `key = value` lines plus `object <Class> x0 y0 z0 x1 y1 z1` lines;
    // `#` comments. Unknown keys are errors.
    static RoomSpec parse(std::istream& source);
    static RoomSpec parse_file(const std::string& path);
    void serialize(std::ostream& sink) const;
};

// Builds the structural shell plus placed objects as watertight box
// meshes. Object names sort into deterministic ids. Throws OverlapError
// when a placed box leaves the room interior.
SceneModel build_scene(const RoomSpec& spec);

// Area-uniform surface sampling with per-class intensity and color from
// fixed tables, Gaussian position noise, and uniform Clutter outliers.
// real_label carries the emitting object's class; pseudo_label starts
// UNLABELED. Bit-identical output for identical spec.
LabeledCloud sample_cloud(const SceneModel& scene, const RoomSpec& spec);

// Per-class intensity in (0,1] and RGB used by sample_cloud.
float class_intensity(std::uint8_t class_id);
void class_color(std::uint8_t class_id, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

} // namespace m2c

#endif
