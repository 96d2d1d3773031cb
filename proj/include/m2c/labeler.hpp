#ifndef M2C_LABELER_HPP
#define M2C_LABELER_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "m2c/cloud.hpp"
#include "m2c/scene.hpp"
#include "m2c/taxonomy.hpp"

namespace m2c {

// Per-class alignment distance threshold tau, meters.
struct ThresholdPolicy {
    double default_tau = 0.04;
    std::vector<double> overrides; // indexed by class id; <0 = no override

    double tau(std::uint8_t class_id) const {
        if (class_id < overrides.size() && overrides[class_id] >= 0.0)
            return overrides[class_id];
        return default_tau;
    }

    void set(std::uint8_t class_id, double tau_m) {
        if (overrides.size() <= class_id) overrides.resize(class_id + 1, -1.0);
        overrides[class_id] = tau_m;
    }
};

// 4 cm everywhere except Door, Furniture and Window at 10 cm.
ThresholdPolicy gold_policy();
// 4 cm everywhere except Door at 10 cm and Window at 15 cm.
ThresholdPolicy silver_policy();
ThresholdPolicy policy_for(TaxonomyId id);

// Best claim an object holds on a point. Interior claims (d <= 0) beat
// exterior ones (0 < d <= tau); within a branch the smaller signed
// distance wins, then the lower object id. This makes the labeling
// independent of object visit order even when objects overlap.
struct LabelCandidate {
    double signed_distance = std::numeric_limits<double>::infinity();
    std::uint32_t object_id = UINT32_MAX;
    std::uint8_t class_id = UNLABELED;

    bool valid() const { return object_id != UINT32_MAX; }
    bool interior() const { return signed_distance <= 0.0; }

    bool beats(const LabelCandidate& other) const {
        if (!other.valid()) return valid();
        if (!valid()) return false;
        if (interior() != other.interior()) return interior();
        if (signed_distance != other.signed_distance)
            return signed_distance < other.signed_distance;
        return object_id < other.object_id;
    }
};

struct ObjectReport {
    std::uint32_t object_id = 0;
    std::uint8_t class_id = 0;
    double elapsed_seconds = 0.0;
    std::uint64_t points_claimed = 0; // points whose final label this object won
};

struct LabelReport {
    std::vector<ObjectReport> objects;
    std::vector<std::uint64_t> class_counts; // of the output pseudo column
    std::uint64_t clutter_fallback = 0;      // points no object claimed
    std::uint64_t non_finite = 0;            // forced to Clutter

    // Per-class elapsed seconds, summed over the class's objects.
    std::vector<double> class_seconds(std::size_t k) const {
        std::vector<double> out(k, 0.0);
        for (const ObjectReport& o : objects)
            if (o.class_id < k) out[o.class_id] += o.elapsed_seconds;
        return out;
    }
};

// Assigns a pseudo label to every point: object-major sweep with
// tau-dilated bounding-box culling through a point grid and BVH distance
// queries per candidate. Unclaimed points become Clutter. Output is
// identical for any thread count.
// Throws TaxonomyMismatch when cloud and scene taxonomies differ.
LabeledCloud pseudo_label(const LabeledCloud& cloud, const SceneModel& scene,
                          const ThresholdPolicy& policy, LabelReport* report = nullptr,
                          unsigned threads = 0);

// Testing oracle: no culling, no hierarchy; a straight scan of every
// triangle of every object per point, sharing only the candidate
// ordering. Intended for small instances.
LabeledCloud brute_force_label(const LabeledCloud& cloud, const SceneModel& scene,
                               const ThresholdPolicy& policy);

} // namespace m2c

#endif
