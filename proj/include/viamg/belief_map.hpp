#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "viamg/depth.hpp"
#include "viamg/geometry.hpp"
#include "viamg/robot.hpp"

namespace viamg {

struct BeliefMapParams {
    double voxel = 0.03;          // merge/dedup resolution
    double carve_delta = 0.03;    // free-space carving tolerance
    double ground_z = 0.3;        // points below this height are discarded
    double crop_radius = 2.5;     // keep points within this radius of the camera
};

/// Point-set world estimate with a fine voxel index for dedup/occlusion and a
/// coarse cell index for range queries. Single writer; planners read snapshots.
class BeliefMap {
  public:
    explicit BeliefMap(BeliefMapParams params = {}) : params_(params) {}

    const std::vector<Vec3>& points() const { return points_; }
    const BeliefMapParams& params() const { return params_; }
    size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    int64_t voxel_key(const Vec3& p) const;
    bool voxel_occupied(int64_t key) const { return voxels_.count(key) > 0; }
    bool voxel_occupied(const Vec3& p) const { return voxel_occupied(voxel_key(p)); }

    /// Inserts a point unless its voxel is already occupied. Returns true on insert.
    bool insert(const Vec3& p);

    /// True when any stored point lies strictly inside the sphere. Points
    /// within exclude_radius of exclude_center are ignored (exclude_radius <= 0
    /// disables the exclusion).
    bool sphere_occupied(const Vec3& center, double radius,
                         const Vec3& exclude_center = Vec3::Zero(),
                         double exclude_radius = 0.0) const;

    /// True when the open segment (a, b) passes through an occupied voxel
    /// other than b's own voxel. Voxel-exact DDA traversal.
    bool segment_occluded(const Vec3& a, const Vec3& b) const;

    /// Visits stored points within the axis-aligned box via the coarse index.
    template <class Fn>
    void for_points_in_aabb(const Vec3& lo, const Vec3& hi, Fn&& fn) const;

    /// Removes all points for which pred returns true, preserving order.
    template <class Pred>
    size_t remove_if(Pred&& pred);

  private:
    int64_t coarse_key(const Vec3& p) const;
    void rebuild_index();

    BeliefMapParams params_;
    std::vector<Vec3> points_;
    std::unordered_set<int64_t> voxels_;
    std::unordered_map<int64_t, std::vector<int32_t>> cells_;
    static constexpr double kCoarseCell = 0.24;
};

struct MapUpdateStats {
    size_t carved = 0;
    size_t self_filtered = 0;
    size_t inserted = 0;
};

/// Ray-cast map update: carve stored points proven free by the depth image,
/// drop points inside the robot, then merge new surface points after ground
/// removal, self-filtering, crop, and voxel dedup. New points never enter a
/// voxel carved in this update.
MapUpdateStats update_map(BeliefMap& map, const DepthImage& depth, const Pose3& camera_pose,
                          const CameraModel& camera, const std::vector<Sphere>& robot_spheres);

// --- inline template bodies ---

inline int64_t pack_cell_key(int x, int y, int z) {
    return ((int64_t)(x & 0x1fffff) << 42) | ((int64_t)(y & 0x1fffff) << 21) |
           (int64_t)(z & 0x1fffff);
}

template <class Fn>
void BeliefMap::for_points_in_aabb(const Vec3& lo, const Vec3& hi, Fn&& fn) const {
    int x0 = (int)std::floor(lo.x() / kCoarseCell), x1 = (int)std::floor(hi.x() / kCoarseCell);
    int y0 = (int)std::floor(lo.y() / kCoarseCell), y1 = (int)std::floor(hi.y() / kCoarseCell);
    int z0 = (int)std::floor(lo.z() / kCoarseCell), z1 = (int)std::floor(hi.z() / kCoarseCell);
    for (int x = x0; x <= x1; ++x) {
        for (int y = y0; y <= y1; ++y) {
            for (int z = z0; z <= z1; ++z) {
                auto it = cells_.find(pack_cell_key(x, y, z));
                if (it == cells_.end()) continue;
                for (int32_t idx : it->second) fn(points_[idx]);
            }
        }
    }
}

template <class Pred>
size_t BeliefMap::remove_if(Pred&& pred) {
    std::vector<Vec3> kept;
    kept.reserve(points_.size());
    for (const auto& p : points_) {
        if (!pred(p)) kept.push_back(p);
    }
    size_t removed = points_.size() - kept.size();
    if (removed > 0) {
        points_ = std::move(kept);
        rebuild_index();
    }
    return removed;
}

}  // namespace viamg
