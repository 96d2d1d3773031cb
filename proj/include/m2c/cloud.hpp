#ifndef M2C_CLOUD_HPP
#define M2C_CLOUD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "m2c/geom.hpp"
#include "m2c/taxonomy.hpp"

namespace m2c {

inline constexpr std::uint8_t UNLABELED = 255;

struct PointRecord {
    Vec3 position;
    std::uint8_t r = 0, g = 0, b = 0;
    float intensity = 0.0f;               // [0, 1]
    std::uint8_t real_label = UNLABELED;
    std::uint8_t pseudo_label = UNLABELED;
};

// Columnar point set in the 9-column record layout:
// x, y, z, r, g, b, intensity, real label, pseudo label.
struct LabeledCloud {
    TaxonomyId taxonomy_id = TaxonomyId::Gold;
    std::string scan_id;

    std::vector<double> x, y, z;
    std::vector<std::uint8_t> r, g, b;
    std::vector<float> intensity;
    std::vector<std::uint8_t> real_label;
    std::vector<std::uint8_t> pseudo_label;

    std::size_t size() const { return x.size(); }
    bool empty() const { return x.empty(); }

    Vec3 position(std::size_t i) const { return {x[i], y[i], z[i]}; }

    PointRecord record(std::size_t i) const {
        return {position(i), r[i], g[i], b[i], intensity[i], real_label[i], pseudo_label[i]};
    }

    void push_back(const PointRecord& p) {
        x.push_back(p.position.x);
        y.push_back(p.position.y);
        z.push_back(p.position.z);
        r.push_back(p.r);
        g.push_back(p.g);
        b.push_back(p.b);
        intensity.push_back(p.intensity);
        real_label.push_back(p.real_label);
        pseudo_label.push_back(p.pseudo_label);
    }

    void reserve(std::size_t n) {
        x.reserve(n); y.reserve(n); z.reserve(n);
        r.reserve(n); g.reserve(n); b.reserve(n);
        intensity.reserve(n);
        real_label.reserve(n);
        pseudo_label.reserve(n);
    }

    Aabb bounds() const {
        Aabb box;
        for (std::size_t i = 0; i < size(); ++i) {
            Vec3 p = position(i);
            if (p.finite()) box.expand(p);
        }
        return box;
    }
};

enum class LabelColumn { Real, Pseudo };

inline const std::vector<std::uint8_t>& label_column(const LabeledCloud& cloud, LabelColumn which) {
    return which == LabelColumn::Real ? cloud.real_label : cloud.pseudo_label;
}

inline std::vector<std::uint8_t>& label_column(LabeledCloud& cloud, LabelColumn which) {
    return which == LabelColumn::Real ? cloud.real_label : cloud.pseudo_label;
}

struct ClassHistogram {
    std::vector<std::uint64_t> counts; // one per taxonomy class
    std::uint64_t unlabeled = 0;

    std::uint64_t labeled_total() const {
        std::uint64_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
};

// Throws LabelOutOfRange on a label that is neither a valid class nor
// UNLABELED.
ClassHistogram class_histogram(const LabeledCloud& cloud, LabelColumn which);

// Keeps at most one point per occupied voxel of size `cell`: the member
// nearest the voxel's point centroid, ties to the lowest input index.
// Survivors keep their input order. Non-finite points always survive.
LabeledCloud voxel_subsample(const LabeledCloud& cloud, double cell);

} // namespace m2c

#endif
