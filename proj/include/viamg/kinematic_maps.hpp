#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "viamg/robot.hpp"

namespace viamg {

/// Shared 6D grid geometry for the reachability and capability maps:
/// position voxels around the base frame, intrinsic yaw-pitch-roll boxes.
struct PoseGrid {
    double pos_res = 0.05;
    double ori_res = M_PI / 8;
    double xy_extent = 1.2;  // |x|, |y| <= extent
    double z_min = 0.0;
    double z_max = 1.8;

    int nx() const { return (int)std::ceil(2 * xy_extent / pos_res); }
    int nz() const { return (int)std::ceil((z_max - z_min) / pos_res); }
    int n_yaw() const { return (int)std::round(2 * M_PI / ori_res); }
    int n_pitch() const { return (int)std::round(M_PI / ori_res); }
    int n_roll() const { return n_yaw(); }

    /// 6D voxel key of the pose, or nullopt outside the grid.
    std::optional<uint64_t> key_of(const Pose3& pose) const;

    /// Center of the position cell addressed by the key.
    Vec3 position_center_of(uint64_t key) const;

    bool operator==(const PoseGrid& o) const {
        return pos_res == o.pos_res && ori_res == o.ori_res && xy_extent == o.xy_extent &&
               z_min == o.z_min && z_max == o.z_max;
    }
};

struct ReachEntry {
    uint32_t count = 0;
    float max_manipulability = 0.0f;
};

/// Monte Carlo reachability map: end-effector poses in the base frame,
/// visitation counts and the best Yoshikawa manipulability per voxel.
struct ReachabilityMap {
    PoseGrid grid;
    uint64_t samples_used = 0;
    std::unordered_map<uint64_t, ReachEntry> voxels;

    uint32_t count(const Pose3& ee_in_base) const {
        auto k = grid.key_of(ee_in_base);
        if (!k) return 0;
        auto it = voxels.find(*k);
        return it == voxels.end() ? 0 : it->second.count;
    }

    float max_manipulability(const Pose3& ee_in_base) const {
        auto k = grid.key_of(ee_in_base);
        if (!k) return 0.0f;
        auto it = voxels.find(*k);
        return it == voxels.end() ? 0.0f : it->second.max_manipulability;
    }
};

/// Inverse view of the reachability map: answers whether an end-effector pose
/// relative to the base is attainable at all (strictly positive visitation).
struct CapabilityMap {
    PoseGrid grid;
    std::unordered_set<uint64_t> reachable_voxels;

    bool reachable(const Pose3& ee_in_base) const {
        auto k = grid.key_of(ee_in_base);
        return k && reachable_voxels.count(*k) > 0;
    }

    static CapabilityMap from_reachability(const ReachabilityMap& reach);
};

/// Best torso height per end-effector position bin (base frame). The stored
/// height maximizes the feasible-configuration count; ties break low.
struct TorsoHeightMap {
    double pos_res = 0.02;
    double torso_bin = 0.05;
    double xy_extent = 1.2;
    double z_min = 0.0;
    double z_max = 1.8;
    double torso_min = 0.0;
    double torso_max = 0.4;
    uint64_t samples_used = 0;
    std::vector<int8_t> best_bin;  // -1 for never-visited bins

    int nx() const { return (int)std::ceil(2 * xy_extent / pos_res); }
    int nz() const { return (int)std::ceil((z_max - z_min) / pos_res); }
    int n_torso() const { return (int)std::round((torso_max - torso_min) / torso_bin); }

    std::optional<size_t> bin_of(const Vec3& ee_pos_in_base) const;
    std::optional<double> query(const Vec3& ee_pos_in_base) const;
};

/// Draws one uniform sample of (torso, arm) within limits. Exposed so tests
/// can reproduce the exact sample stream of the builders.
Configuration sample_torso_arm(const RobotModel& model, Rng& rng);

ReachabilityMap build_reachability(const RobotModel& model, uint64_t n_samples, uint64_t seed,
                                   PoseGrid grid = {});
TorsoHeightMap build_torso_map(const RobotModel& model, uint64_t n_samples, uint64_t seed,
                               TorsoHeightMap proto = {});

/// Binary cache, magic "VKMP": save/load round-trips byte-identically.
void save_reachability(const ReachabilityMap& map, const std::string& path);
ReachabilityMap load_reachability(const std::string& path);
void save_torso_map(const TorsoHeightMap& map, const std::string& path);
TorsoHeightMap load_torso_map(const std::string& path);

struct KinematicMaps {
    ReachabilityMap reach;
    CapabilityMap capability;
    TorsoHeightMap torso;
};

struct KinematicMapsParams {
    uint64_t reachability_samples = 1000000;
    uint64_t torso_samples = 3000000;
    uint64_t seed = 1;
};

/// Builds all three maps, or loads them from cache_dir when present (empty
/// cache_dir disables caching).
KinematicMaps build_kinematic_maps(const RobotModel& model, const KinematicMapsParams& params,
                                   const std::string& cache_dir = "");

}  // namespace viamg
