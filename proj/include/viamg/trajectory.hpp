#pragma once

#include <string>
#include <vector>

#include "viamg/robot.hpp"

namespace viamg {

struct VelocityLimits {
    double linear = 1.5;   // m/s
    double angular = 1.0;  // rad/s
    double torso = 0.1;    // m/s
    double arm = 1.0;      // rad/s per joint
};

/// Timed whole-body waypoint sequence. Velocities are forward finite
/// differences of the waypoints over the timestamps; the last entry is zero.
struct Trajectory {
    std::vector<Configuration> waypoints;
    std::vector<double> times;
    std::vector<Vec11> velocities;

    size_t size() const { return waypoints.size(); }
    bool empty() const { return waypoints.empty(); }
    double duration() const { return times.empty() ? 0.0 : times.back(); }
};

/// Assigns timestamps with a trapezoidal speed profile bounded by the limits,
/// then recomputes velocities from the waypoints.
void finalize_timing(Trajectory& traj, const VelocityLimits& limits);

/// Total path length in the mixed metric (meters and radians 1:1).
double mixed_length(const Trajectory& traj);
double mixed_length(const std::vector<Configuration>& waypoints);

/// Debug dump: one row per waypoint, "t x y theta h a1..a7".
void dump_trajectory(const Trajectory& traj, const std::string& path);

}  // namespace viamg
