#include "m2c/taxonomy.hpp"

namespace m2c {

const Taxonomy& gold() {
    static const Taxonomy t{
        TaxonomyId::Gold,
        {"Column", "Components", "Covering", "Damper", "Door", "Exit sign",
         "Fire terminal", "Furniture", "Heater", "Lamp", "Outlet", "Railing",
         "Slab", "Stair", "Switch", "Wall", "Window", "Clutter"},
    };
    return t;
}

const Taxonomy& silver() {
    static const Taxonomy t{
        TaxonomyId::Silver,
        {"Column", "Covering", "Door", "Exit sign", "Heater", "Lamp",
         "Railing", "Slab", "Stair", "Wall", "Window", "Clutter"},
    };
    return t;
}

const Taxonomy& taxonomy_for(TaxonomyId id) {
    return id == TaxonomyId::Gold ? gold() : silver();
}

const std::vector<SimplifyRule>& gold_to_silver_rules() {
    using namespace silver_class;
    auto fixed = [](std::uint8_t target) {
        SimplifyRule r;
        r.fixed = true;
        r.target = target;
        return r;
    };
    auto nearest_of = [](std::uint8_t a, std::uint8_t b) {
        SimplifyRule r;
        r.fixed = false;
        r.candidate_a = a;
        r.candidate_b = b; // wins ties
        return r;
    };
    static const std::vector<SimplifyRule> rules = {
        /* Column        */ fixed(Column),
        /* Components    */ fixed(Clutter),
        /* Covering      */ fixed(Covering),
        /* Damper        */ nearest_of(Covering, Clutter),
        /* Door          */ fixed(Door),
        /* Exit sign     */ fixed(ExitSign),
        /* Fire terminal */ nearest_of(Wall, Clutter),
        /* Furniture     */ fixed(Clutter),
        /* Heater        */ fixed(Heater),
        /* Lamp          */ fixed(Lamp),
        /* Outlet        */ fixed(Wall),
        /* Railing       */ fixed(Railing),
        /* Slab          */ fixed(Slab),
        /* Stair         */ fixed(Stair),
        /* Switch        */ fixed(Wall),
        /* Wall          */ fixed(Wall),
        /* Window        */ fixed(Window),
        /* Clutter       */ fixed(Clutter),
    };
    return rules;
}

} // namespace m2c
