#include "m2c/cloud.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "m2c/errors.hpp"

namespace m2c {

ClassHistogram class_histogram(const LabeledCloud& cloud, LabelColumn which) {
    const Taxonomy& tax = taxonomy_for(cloud.taxonomy_id);
    ClassHistogram hist;
    hist.counts.assign(tax.size(), 0);
    const auto& labels = label_column(cloud, which);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::uint8_t label = labels[i];
        if (label == UNLABELED) {
            ++hist.unlabeled;
        } else if (label < tax.size()) {
            ++hist.counts[label];
        } else {
            throw LabelOutOfRange("point " + std::to_string(i) + " has label " +
                                  std::to_string(label) + " outside taxonomy of " +
                                  std::to_string(tax.size()) + " classes");
        }
    }
    return hist;
}

namespace {

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ull;
        h ^= static_cast<std::uint64_t>(k.y) * 0xc2b2ae3d27d4eb4full + (h << 6);
        h ^= static_cast<std::uint64_t>(k.z) * 0x165667b19e3779f9ull + (h >> 3);
        return static_cast<std::size_t>(h);
    }
};

CellKey cell_of(const Vec3& p, double cell) {
    return {static_cast<std::int64_t>(std::floor(p.x / cell)),
            static_cast<std::int64_t>(std::floor(p.y / cell)),
            static_cast<std::int64_t>(std::floor(p.z / cell))};
}

} // namespace

LabeledCloud voxel_subsample(const LabeledCloud& cloud, double cell) {
    if (!(cell > 0.0)) throw std::invalid_argument("voxel cell size must be positive");
    struct VoxelAcc {
        Vec3 sum{};
        std::uint64_t count = 0;
        std::size_t best = 0;
        double best_d2 = 0.0;
    };

    // Pass 1: per-voxel centroid of member points.
    std::unordered_map<CellKey, VoxelAcc, CellKeyHash> voxels;
    voxels.reserve(cloud.size());
    std::vector<std::size_t> nonfinite;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        Vec3 p = cloud.position(i);
        if (!p.finite()) {
            nonfinite.push_back(i);
            continue;
        }
        VoxelAcc& acc = voxels[cell_of(p, cell)];
        acc.sum += p;
        acc.count += 1;
    }

    // Pass 2: member nearest the centroid, ties to the lowest index.
    std::vector<char> keep(cloud.size(), 0);
    for (std::size_t i : nonfinite) keep[i] = 1;
    for (auto& [key, acc] : voxels) acc.best = cloud.size();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        Vec3 p = cloud.position(i);
        if (!p.finite()) continue;
        VoxelAcc& acc = voxels[cell_of(p, cell)];
        Vec3 centroid = acc.sum / static_cast<double>(acc.count);
        double d2 = norm2(p - centroid);
        if (acc.best == cloud.size() || d2 < acc.best_d2) {
            acc.best = i;
            acc.best_d2 = d2;
        }
    }
    for (const auto& [key, acc] : voxels)
        if (acc.best != cloud.size()) keep[acc.best] = 1;

    LabeledCloud out;
    out.taxonomy_id = cloud.taxonomy_id;
    out.scan_id = cloud.scan_id;
    std::size_t survivors = 0;
    for (char k : keep) survivors += k;
    out.reserve(survivors);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (keep[i]) out.push_back(cloud.record(i));
    return out;
}

} // namespace m2c
