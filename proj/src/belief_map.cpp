#include "viamg/belief_map.hpp"

namespace viamg {

int64_t BeliefMap::voxel_key(const Vec3& p) const {
    int x = (int)std::floor(p.x() / params_.voxel);
    int y = (int)std::floor(p.y() / params_.voxel);
    int z = (int)std::floor(p.z() / params_.voxel);
    return pack_cell_key(x, y, z);
}

int64_t BeliefMap::coarse_key(const Vec3& p) const {
    int x = (int)std::floor(p.x() / kCoarseCell);
    int y = (int)std::floor(p.y() / kCoarseCell);
    int z = (int)std::floor(p.z() / kCoarseCell);
    return pack_cell_key(x, y, z);
}

bool BeliefMap::insert(const Vec3& p) {
    int64_t key = voxel_key(p);
    if (!voxels_.insert(key).second) return false;
    points_.push_back(p);
    cells_[coarse_key(p)].push_back((int32_t)points_.size() - 1);
    return true;
}

void BeliefMap::rebuild_index() {
    voxels_.clear();
    cells_.clear();
    for (size_t i = 0; i < points_.size(); ++i) {
        voxels_.insert(voxel_key(points_[i]));
        cells_[coarse_key(points_[i])].push_back((int32_t)i);
    }
}

bool BeliefMap::sphere_occupied(const Vec3& center, double radius, const Vec3& exclude_center,
                                double exclude_radius) const {
    bool hit = false;
    const double r2 = radius * radius;
    const double ex2 = exclude_radius * exclude_radius;
    Vec3 lo = center.array() - radius;
    Vec3 hi = center.array() + radius;
    for_points_in_aabb(lo, hi, [&](const Vec3& p) {
        if (hit) return;
        if ((p - center).squaredNorm() < r2) {
            if (exclude_radius > 0.0 && (p - exclude_center).squaredNorm() <= ex2) return;
            hit = true;
        }
    });
    return hit;
}

bool BeliefMap::segment_occluded(const Vec3& a, const Vec3& b) const {
    const double res = params_.voxel;
    const int64_t end_key = voxel_key(b);
    Vec3 d = b - a;
    double len = d.norm();
    if (len < 1e-12) return false;

    // Amanatides-Woo traversal from a toward b
    int ix = (int)std::floor(a.x() / res);
    int iy = (int)std::floor(a.y() / res);
    int iz = (int)std::floor(a.z() / res);
    const int ex = (int)std::floor(b.x() / res);
    const int ey = (int)std::floor(b.y() / res);
    const int ez = (int)std::floor(b.z() / res);

    int step[3];
    double t_max[3], t_delta[3];
    const double dir[3] = {d.x(), d.y(), d.z()};
    const double org[3] = {a.x(), a.y(), a.z()};
    int idx[3] = {ix, iy, iz};
    for (int i = 0; i < 3; ++i) {
        if (dir[i] > 1e-15) {
            step[i] = 1;
            t_max[i] = ((idx[i] + 1) * res - org[i]) / dir[i];
            t_delta[i] = res / dir[i];
        } else if (dir[i] < -1e-15) {
            step[i] = -1;
            t_max[i] = (idx[i] * res - org[i]) / dir[i];
            t_delta[i] = -res / dir[i];
        } else {
            step[i] = 0;
            t_max[i] = std::numeric_limits<double>::max();
            t_delta[i] = std::numeric_limits<double>::max();
        }
    }

    // skip the starting voxel (camera origin), stop before the endpoint voxel
    int guard = 0;
    const int max_steps = (int)(len / res) * 3 + 16;
    while (guard++ < max_steps) {
        int axis = 0;
        if (t_max[1] < t_max[axis]) axis = 1;
        if (t_max[2] < t_max[axis]) axis = 2;
        if (t_max[axis] >= 1.0) break;  // next crossing is beyond b
        idx[axis] += step[axis];
        t_max[axis] += t_delta[axis];
        int64_t key = pack_cell_key(idx[0], idx[1], idx[2]);
        if (key == end_key) break;
        if (idx[0] == ex && idx[1] == ey && idx[2] == ez) break;
        if (voxels_.count(key)) return true;
    }
    return false;
}

MapUpdateStats update_map(BeliefMap& map, const DepthImage& depth, const Pose3& camera_pose,
                          const CameraModel& camera, const std::vector<Sphere>& robot_spheres) {
    MapUpdateStats stats;
    const Pose3 world_to_cam = camera_pose.inverse();
    const Vec3 cam_origin = camera_pose.translation();
    const double delta = map.params().carve_delta;

    auto inside_robot = [&](const Vec3& p) {
        for (const auto& s : robot_spheres) {
            if ((p - s.center).squaredNorm() < s.radius * s.radius) return true;
        }
        return false;
    };

    // pass 1: carve stored points proven free, drop points inside the robot
    std::unordered_set<int64_t> carved;
    size_t removed = map.remove_if([&](const Vec3& p) {
        if (inside_robot(p)) {
            ++stats.self_filtered;
            return true;
        }
        Vec3 p_cam = world_to_cam * p;
        int u, v;
        if (!camera.project(p_cam, u, v)) return false;
        float z_obs = depth.at(u, v);
        if (z_obs <= 0.0f) return false;  // invalid pixels carve nothing
        if (p_cam.z() < (double)z_obs - delta) {
            carved.insert(map.voxel_key(p));
            ++stats.carved;
            return true;
        }
        return false;
    });
    (void)removed;

    // pass 2: merge new surface points
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            float z = depth.at(u, v);
            if (z <= 0.0f) continue;
            Vec3 p = camera_pose * (camera.pixel_ray(u, v) * (double)z);
            if (p.z() < map.params().ground_z) continue;
            if ((p - cam_origin).norm() > map.params().crop_radius) continue;
            if (inside_robot(p)) continue;
            if (carved.count(map.voxel_key(p))) continue;
            if (map.insert(p)) ++stats.inserted;
        }
    }
    return stats;
}

}  // namespace viamg
