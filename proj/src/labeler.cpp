#include "m2c/labeler.hpp"

#include <chrono>
#include <cmath>

#include "m2c/errors.hpp"
#include "m2c/parallel.hpp"
#include "m2c/point_grid.hpp"

namespace m2c {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Exterior claims must clear the object's class threshold; interior
// claims always qualify.
bool qualifies(double d, double tau) { return d <= 0.0 || d <= tau; }

} // namespace

ThresholdPolicy gold_policy() {
    ThresholdPolicy p;
    p.default_tau = 0.04;
    p.set(gold_class::Door, 0.10);
    p.set(gold_class::Furniture, 0.10);
    p.set(gold_class::Window, 0.10);
    return p;
}

ThresholdPolicy silver_policy() {
    ThresholdPolicy p;
    p.default_tau = 0.04;
    p.set(silver_class::Door, 0.10);
    p.set(silver_class::Window, 0.15);
    return p;
}

ThresholdPolicy policy_for(TaxonomyId id) {
    return id == TaxonomyId::Gold ? gold_policy() : silver_policy();
}

LabeledCloud pseudo_label(const LabeledCloud& cloud, const SceneModel& scene,
                          const ThresholdPolicy& policy, LabelReport* report,
                          unsigned threads) {
    if (cloud.taxonomy_id != scene.taxonomy_id)
        throw TaxonomyMismatch("cloud and scene use different taxonomies");
    if (threads == 0) threads = default_thread_count();

    const Taxonomy& tax = taxonomy_for(cloud.taxonomy_id);
    const std::uint8_t clutter = tax.clutter_id();

    LabeledCloud out = cloud;
    LabelReport rep;
    rep.objects.resize(scene.objects.size());
    for (const ClassedMesh& object : scene.objects) {
        rep.objects[object.object_id].object_id = object.object_id;
        rep.objects[object.object_id].class_id = object.class_id;
    }
    rep.class_counts.assign(tax.size(), 0);

    // Grid cell sized to the cloud span keeps the per-object cell walk
    // short; clamped so pathological extents stay sane.
    Aabb cloud_box = cloud.bounds();
    double cell = 0.5;
    if (!cloud_box.empty()) {
        Vec3 ext = cloud_box.extent();
        double span = std::max({ext.x, ext.y, ext.z});
        cell = std::clamp(span / 64.0, 0.05, 4.0);
    }
    PointGrid grid = PointGrid::build(cloud, cell);

    std::vector<LabelCandidate> best(cloud.size());

    // Object-major sweep, one culling box per object. Candidate points
    // are partitioned across threads, so each best[] slot has exactly
    // one writer per object; the merge itself is a pure minimum under
    // the candidate ordering, which makes the result independent of both
    // the thread count and the object visit order.
    for (const ClassedMesh& object : scene.objects) {
        Clock::time_point start = Clock::now();
        const double tau = policy.tau(object.class_id);
        const Aabb culling_box = dilate(object.box, tau);
        std::vector<std::uint32_t> candidates = grid.query_box(culling_box);

        parallel_chunks(candidates.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                std::uint32_t i = candidates[k];
                double d = object.index.signed_distance(cloud.position(i));
                if (!qualifies(d, tau)) continue;
                LabelCandidate cand{d, object.object_id, object.class_id};
                if (cand.beats(best[i])) best[i] = cand;
            }
        });

        rep.objects[object.object_id].elapsed_seconds = seconds_since(start);
    }

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!cloud.position(i).finite()) {
            best[i] = {}; // forced Clutter
            ++rep.non_finite;
        }
        std::uint8_t label;
        if (best[i].valid()) {
            label = best[i].class_id;
            ++rep.objects[best[i].object_id].points_claimed;
        } else {
            label = clutter;
            ++rep.clutter_fallback;
        }
        out.pseudo_label[i] = label;
        ++rep.class_counts[label];
    }

    if (report) *report = std::move(rep);
    return out;
}

LabeledCloud brute_force_label(const LabeledCloud& cloud, const SceneModel& scene,
                               const ThresholdPolicy& policy) {
    if (cloud.taxonomy_id != scene.taxonomy_id)
        throw TaxonomyMismatch("cloud and scene use different taxonomies");

    LabeledCloud out = cloud;
    const std::uint8_t clutter = taxonomy_for(cloud.taxonomy_id).clutter_id();

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        Vec3 p = cloud.position(i);
        if (!p.finite()) {
            out.pseudo_label[i] = clutter;
            continue;
        }
        LabelCandidate best;
        for (const ClassedMesh& object : scene.objects) {
            double d = object.index.signed_distance_linear(p);
            if (!qualifies(d, policy.tau(object.class_id))) continue;
            LabelCandidate cand{d, object.object_id, object.class_id};
            if (cand.beats(best)) best = cand;
        }
        out.pseudo_label[i] = best.valid() ? best.class_id : clutter;
    }
    return out;
}

} // namespace m2c
