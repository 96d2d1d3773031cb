#include "m2c/simplify.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "m2c/errors.hpp"
#include "m2c/point_grid.hpp"

namespace m2c {

std::vector<std::uint8_t> simplify_column(const LabeledCloud& cloud, LabelColumn which) {
    if (cloud.taxonomy_id != TaxonomyId::Gold)
        throw TaxonomyMismatch("simplification starts from Gold labels");

    const auto& rules = gold_to_silver_rules();
    const auto& labels = label_column(cloud, which);
    const std::size_t n = labels.size();

    // Pass 1: table remaps. Geometry-dependent classes stay UNLABELED so
    // the nearest-point search below only sees settled points.
    std::vector<std::uint8_t> out(n, UNLABELED);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t g = labels[i];
        if (g == UNLABELED)
            throw UnlabeledPoint("point " + std::to_string(i) + " is UNLABELED");
        if (g >= rules.size())
            throw LabelOutOfRange("point " + std::to_string(i) + " has label " +
                                  std::to_string(g) + " outside the Gold taxonomy");
        const SimplifyRule& rule = rules[g];
        if (rule.fixed) out[i] = rule.target;
        else pending.push_back(i);
    }

    if (!pending.empty()) {
        // Resolve every pending point against the pass-1 snapshot; a
        // point settled here must not influence its neighbors.
        PointGrid grid = PointGrid::build(cloud, 0.5);
        std::vector<std::uint8_t> resolved(pending.size());
        for (std::size_t j = 0; j < pending.size(); ++j) {
            const std::size_t i = pending[j];
            const SimplifyRule& rule = rules[labels[i]];
            Vec3 p = cloud.position(i);
            double da = grid.nearest_labeled_distance2(p, out, rule.candidate_a);
            double db = grid.nearest_labeled_distance2(p, out, rule.candidate_b);
            // candidate_b (Clutter) wins ties, including the all-infinite case
            resolved[j] = da < db ? rule.candidate_a : rule.candidate_b;
        }
        for (std::size_t j = 0; j < pending.size(); ++j) out[pending[j]] = resolved[j];
    }
    return out;
}

LabeledCloud simplify_labels(const LabeledCloud& cloud, LabelColumn which) {
    std::vector<std::uint8_t> mapped = simplify_column(cloud, which);
    LabeledCloud out = cloud;
    out.taxonomy_id = TaxonomyId::Silver;
    label_column(out, which) = std::move(mapped);
    auto& other = label_column(out, which == LabelColumn::Real ? LabelColumn::Pseudo
                                                               : LabelColumn::Real);
    std::fill(other.begin(), other.end(), UNLABELED);
    return out;
}

} // namespace m2c
