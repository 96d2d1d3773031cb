#ifndef M2C_POINT_GRID_HPP
#define M2C_POINT_GRID_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "m2c/cloud.hpp"
#include "m2c/geom.hpp"

namespace m2c {

// Uniform hash grid over point positions for box culling. Immutable
// after build; concurrent queries are safe. Keeps a reference to the
// cloud it was built from, which must outlive the grid. Non-finite
// points are left out of the grid (no cell can hold them).
class PointGrid {
public:
    static PointGrid build(const LabeledCloud& cloud, double cell);

    double cell() const { return cell_; }
    std::size_t indexed_points() const { return ids_.size(); }

    // Indices of points inside the closed box, ascending.
    std::vector<std::uint32_t> query_box(const Aabb& box) const;

    // Streaming variant used by the labeler to avoid the intermediate
    // vector: calls fn(index) for every point in the box; visit order is
    // not guaranteed.
    template <typename Fn>
    void for_each_in_box(const Aabb& box, Fn&& fn) const;

    // Squared distance from q to the nearest indexed point whose label in
    // `labels` equals `want`; +infinity when no such point exists.
    double nearest_labeled_distance2(const Vec3& q,
                                     const std::vector<std::uint8_t>& labels,
                                     std::uint8_t want) const;

private:
    struct CellRange { std::uint32_t begin = 0, end = 0; };

    std::int64_t coord(double v) const;
    static std::uint64_t pack(std::int64_t cx, std::int64_t cy, std::int64_t cz);

    double cell_ = 1.0;
    const LabeledCloud* cloud_ = nullptr;
    std::vector<std::uint32_t> ids_;                       // grouped by cell
    std::unordered_map<std::uint64_t, CellRange> cells_;
    std::int64_t min_cx_ = 0, min_cy_ = 0, min_cz_ = 0;
    std::int64_t max_cx_ = 0, max_cy_ = 0, max_cz_ = 0;
};

PointGrid build_point_grid(const LabeledCloud& cloud, double cell);

std::vector<std::uint32_t> query_box(const PointGrid& grid, const Aabb& box);

template <typename Fn>
void PointGrid::for_each_in_box(const Aabb& box, Fn&& fn) const {
    if (cells_.empty()) return;
    std::int64_t cx0 = std::max(min_cx_, coord(box.min.x));
    std::int64_t cy0 = std::max(min_cy_, coord(box.min.y));
    std::int64_t cz0 = std::max(min_cz_, coord(box.min.z));
    std::int64_t cx1 = std::min(max_cx_, coord(box.max.x));
    std::int64_t cy1 = std::min(max_cy_, coord(box.max.y));
    std::int64_t cz1 = std::min(max_cz_, coord(box.max.z));
    for (std::int64_t cx = cx0; cx <= cx1; ++cx)
        for (std::int64_t cy = cy0; cy <= cy1; ++cy)
            for (std::int64_t cz = cz0; cz <= cz1; ++cz) {
                auto it = cells_.find(pack(cx, cy, cz));
                if (it == cells_.end()) continue;
                for (std::uint32_t k = it->second.begin; k < it->second.end; ++k) {
                    std::uint32_t idx = ids_[k];
                    if (contains(box, cloud_->position(idx))) fn(idx);
                }
            }
}

} // namespace m2c

#endif
