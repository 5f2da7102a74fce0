#pragma once

#include <optional>
#include <span>
#include <vector>

#include "viamg/belief_map.hpp"
#include "viamg/trajectory.hpp"

namespace viamg {

struct GazeAction {
    int pan_index = 0;
    int tilt_index = 0;
    double pan = 0.0;
    double tilt = 0.0;
};

/// Discretized pan-tilt action set, row-major over (pan, tilt).
struct GazeGrid {
    int n_pan = 8;
    int n_tilt = 5;
    double pan_min = -M_PI_2, pan_max = M_PI_2;
    double tilt_min = -M_PI_4, tilt_max = M_PI_2;

    GazeAction action(int pan_index, int tilt_index) const {
        GazeAction a;
        a.pan_index = pan_index;
        a.tilt_index = tilt_index;
        a.pan = pan_min + (pan_max - pan_min) * pan_index / (n_pan - 1);
        a.tilt = tilt_min + (tilt_max - tilt_min) * tilt_index / (n_tilt - 1);
        return a;
    }

    /// Grid action whose direction best centers the given world point from the
    /// camera position (smallest pan+tilt aiming error).
    GazeAction aim_at(const Vec3& target, const Vec3& cam_pos, double base_theta) const;
};

struct PerceptionParams {
    double gamma = 0.999;
    double d_mid = 0.8;
    int lookahead = 20;     // waypoint window N
    double epsilon = 0.3;   // target ball radius
    double inflation = 0.05;  // swept-volume sphere inflation
    GazeGrid grid;

    double sigma() const { return std::max(1.0, 0.25 * lookahead); }
};

struct ImportanceSample {
    Vec3 x = Vec3::Zero();
    double weight = 0.0;
};

/// Visibility indicator: inside the camera frustum at gaze a, within the valid
/// depth interval, and not occluded by any map voxel along the sight line.
bool visible(const Vec3& x, const GazeAction& a, const Configuration& q, const BeliefMap& map,
             const RobotModel& model, const CameraModel& camera);

/// Distance from a point to the robot body surface (sphere decomposition).
double distance_to_robot(const Vec3& x, const std::vector<Sphere>& spheres);

/// Velocity-aware safety weight over a waypoint window:
/// sum_i gamma^i * exp(-((d(x, q_i) - d_mid) / sigma)^2 / 2) * speed_i.
/// wp_spheres and speeds run from the current waypoint; only the first
/// lookahead+1 entries contribute.
double safety_weight(const Vec3& x, std::span<const std::vector<Sphere>> wp_spheres,
                     std::span<const double> speeds, const PerceptionParams& params);

/// Convenience overload evaluating FK per waypoint of the trajectory suffix
/// starting at from_index.
double safety_weight(const Vec3& x, const Trajectory& traj, size_t from_index,
                     const PerceptionParams& params, const RobotModel& model);

/// Execution-phase importance field: sphere centers of every remaining
/// waypoint, weighted by the velocity-aware safety weight.
std::vector<ImportanceSample> execution_importance(const Trajectory& traj, size_t from_index,
                                                   const PerceptionParams& params,
                                                   const RobotModel& model);

/// Planning-phase importance field: deterministic samples of the ball around
/// the target, unit weights.
std::vector<ImportanceSample> planning_importance(const Vec3& target,
                                                  const PerceptionParams& params);

/// Gaze argmax of sum Phi(x) * V(x, a) over the grid; ties break toward the
/// lowest (pan_index, tilt_index).
GazeAction select_gaze(const std::vector<ImportanceSample>& samples, const Configuration& q,
                       const BeliefMap& map, const RobotModel& model, const CameraModel& camera,
                       const PerceptionParams& params);

/// Phase-dependent policy: with a trajectory the execution field, otherwise
/// the target ball.
GazeAction select_gaze_policy(const BeliefMap& map, const Configuration& q,
                              const Trajectory* traj, size_t from_index, const Vec3& target,
                              const PerceptionParams& params, const RobotModel& model,
                              const CameraModel& camera);

}  // namespace viamg
