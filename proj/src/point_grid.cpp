#include "m2c/point_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace m2c {

std::int64_t PointGrid::coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
}

std::uint64_t PointGrid::pack(std::int64_t cx, std::int64_t cy, std::int64_t cz) {
    // 21 bits per axis, offset into the positive range.
    constexpr std::int64_t bias = 1ll << 20;
    std::uint64_t ux = static_cast<std::uint64_t>(cx + bias) & 0x1fffff;
    std::uint64_t uy = static_cast<std::uint64_t>(cy + bias) & 0x1fffff;
    std::uint64_t uz = static_cast<std::uint64_t>(cz + bias) & 0x1fffff;
    return (ux << 42) | (uy << 21) | uz;
}

PointGrid PointGrid::build(const LabeledCloud& cloud, double cell) {
    if (!(cell > 0.0)) throw std::invalid_argument("grid cell size must be positive");

    PointGrid grid;
    grid.cell_ = cell;
    grid.cloud_ = &cloud;

    const std::size_t n = cloud.size();
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
    keyed.reserve(n);
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 p = cloud.position(i);
        if (!p.finite()) continue;
        std::int64_t cx = grid.coord(p.x), cy = grid.coord(p.y), cz = grid.coord(p.z);
        if (first) {
            grid.min_cx_ = grid.max_cx_ = cx;
            grid.min_cy_ = grid.max_cy_ = cy;
            grid.min_cz_ = grid.max_cz_ = cz;
            first = false;
        } else {
            grid.min_cx_ = std::min(grid.min_cx_, cx);
            grid.max_cx_ = std::max(grid.max_cx_, cx);
            grid.min_cy_ = std::min(grid.min_cy_, cy);
            grid.max_cy_ = std::max(grid.max_cy_, cy);
            grid.min_cz_ = std::min(grid.min_cz_, cz);
            grid.max_cz_ = std::max(grid.max_cz_, cz);
        }
        keyed.emplace_back(pack(cx, cy, cz), static_cast<std::uint32_t>(i));
    }

    std::sort(keyed.begin(), keyed.end());
    grid.ids_.resize(keyed.size());
    grid.cells_.reserve(keyed.size() / 2 + 1);
    for (std::size_t k = 0; k < keyed.size(); ++k) {
        grid.ids_[k] = keyed[k].second;
        if (k == 0 || keyed[k].first != keyed[k - 1].first)
            grid.cells_[keyed[k].first].begin = static_cast<std::uint32_t>(k);
        grid.cells_[keyed[k].first].end = static_cast<std::uint32_t>(k + 1);
    }
    return grid;
}

std::vector<std::uint32_t> PointGrid::query_box(const Aabb& box) const {
    std::vector<std::uint32_t> out;
    for_each_in_box(box, [&](std::uint32_t idx) { out.push_back(idx); });
    std::sort(out.begin(), out.end());
    return out;
}

double PointGrid::nearest_labeled_distance2(const Vec3& q,
                                            const std::vector<std::uint8_t>& labels,
                                            std::uint8_t want) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (cells_.empty() || !q.finite()) return inf;

    const std::int64_t qx = coord(q.x), qy = coord(q.y), qz = coord(q.z);
    double best = inf;

    // Expanding shells of cells around q. A shell at ring r holds points
    // no nearer than (r-1)*cell, so once best <= ((r-1)*cell)^2 we stop.
    // The last ring is the Chebyshev distance from q's cell to the
    // farthest occupied cell.
    auto axis_reach = [](std::int64_t qc, std::int64_t lo, std::int64_t hi) {
        return std::max(std::abs(qc - lo), std::abs(hi - qc));
    };
    std::int64_t max_ring = std::max({axis_reach(qx, min_cx_, max_cx_),
                                      axis_reach(qy, min_cy_, max_cy_),
                                      axis_reach(qz, min_cz_, max_cz_)});
    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
        if (best < inf) {
            double safe = (static_cast<double>(ring) - 1.0) * cell_;
            if (safe > 0.0 && best <= safe * safe) break;
        }
        std::int64_t x0 = qx - ring, x1 = qx + ring;
        std::int64_t y0 = qy - ring, y1 = qy + ring;
        std::int64_t z0 = qz - ring, z1 = qz + ring;
        for (std::int64_t cx = x0; cx <= x1; ++cx)
            for (std::int64_t cy = y0; cy <= y1; ++cy)
                for (std::int64_t cz = z0; cz <= z1; ++cz) {
                    // shell only
                    if (cx != x0 && cx != x1 && cy != y0 && cy != y1 &&
                        cz != z0 && cz != z1)
                        continue;
                    if (cx < min_cx_ || cx > max_cx_ || cy < min_cy_ || cy > max_cy_ ||
                        cz < min_cz_ || cz > max_cz_)
                        continue;
                    auto it = cells_.find(pack(cx, cy, cz));
                    if (it == cells_.end()) continue;
                    for (std::uint32_t k = it->second.begin; k < it->second.end; ++k) {
                        std::uint32_t idx = ids_[k];
                        if (labels[idx] != want) continue;
                        best = std::min(best, norm2(cloud_->position(idx) - q));
                    }
                }
    }
    return best;
}

PointGrid build_point_grid(const LabeledCloud& cloud, double cell) {
    return PointGrid::build(cloud, cell);
}

std::vector<std::uint32_t> query_box(const PointGrid& grid, const Aabb& box) {
    return grid.query_box(box);
}

} // namespace m2c
