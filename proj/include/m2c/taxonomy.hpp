#ifndef M2C_TAXONOMY_HPP
#define M2C_TAXONOMY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace m2c {

enum class TaxonomyId : std::uint8_t { Gold = 0, Silver = 1 };

// Ordered class registry. Gold has 18 classes, Silver 12; Clutter is the
// last index in both.
struct Taxonomy {
    TaxonomyId id;
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }
    std::uint8_t clutter_id() const { return static_cast<std::uint8_t>(names.size() - 1); }

    std::optional<std::uint8_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<std::uint8_t>(i);
        return std::nullopt;
    }
};

const Taxonomy& gold();
const Taxonomy& silver();
const Taxonomy& taxonomy_for(TaxonomyId id);

namespace gold_class {
inline constexpr std::uint8_t Column = 0, Components = 1, Covering = 2, Damper = 3,
    Door = 4, ExitSign = 5, FireTerminal = 6, Furniture = 7, Heater = 8, Lamp = 9,
    Outlet = 10, Railing = 11, Slab = 12, Stair = 13, Switch = 14, Wall = 15,
    Window = 16, Clutter = 17;
}

namespace silver_class {
inline constexpr std::uint8_t Column = 0, Covering = 1, Door = 2, ExitSign = 3,
    Heater = 4, Lamp = 5, Railing = 6, Slab = 7, Stair = 8, Wall = 9, Window = 10,
    Clutter = 11;
}

// How one Gold class lands in Silver: either a fixed target class, or the
// nearer of two candidate classes measured point-to-point in the cloud.
struct SimplifyRule {
    bool fixed = true;
    std::uint8_t target = 0;                  // when fixed
    std::uint8_t candidate_a = 0, candidate_b = 0; // when !fixed (b is the tie winner)
};

// Rule table indexed by Gold class id.
const std::vector<SimplifyRule>& gold_to_silver_rules();

} // namespace m2c

#endif
