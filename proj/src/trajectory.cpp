#include "viamg/trajectory.hpp"

#include <fstream>
#include <stdexcept>

namespace viamg {

void finalize_timing(Trajectory& traj, const VelocityLimits& limits) {
    const size_t n = traj.waypoints.size();
    traj.times.assign(n, 0.0);
    traj.velocities.assign(n, Vec11::Zero());
    if (n == 0) return;

    for (size_t k = 0; k + 1 < n; ++k) {
        Vec11 d = config_delta(traj.waypoints[k], traj.waypoints[k + 1]);
        double dt = d.head<2>().norm() / limits.linear;
        dt = std::max(dt, std::abs(d[2]) / limits.angular);
        dt = std::max(dt, std::abs(d[3]) / limits.torso);
        dt = std::max(dt, d.tail<7>().cwiseAbs().maxCoeff() / limits.arm);
        // trapezoid: slow ramps near both ends
        double u = (n > 2) ? (k + 0.5) / (double)(n - 1) : 0.5;
        double scale = std::clamp(std::min(u, 1.0 - u) / 0.15, 0.3, 1.0);
        dt = std::max(dt / scale, 1e-3);
        traj.times[k + 1] = traj.times[k] + dt;
        traj.velocities[k] = d / dt;
    }
}

double mixed_length(const std::vector<Configuration>& waypoints) {
    double len = 0.0;
    for (size_t k = 0; k + 1 < waypoints.size(); ++k) {
        len += config_delta(waypoints[k], waypoints[k + 1]).norm();
    }
    return len;
}

double mixed_length(const Trajectory& traj) { return mixed_length(traj.waypoints); }

void dump_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trajectory dump: " + path);
    out.precision(12);
    for (size_t k = 0; k < traj.waypoints.size(); ++k) {
        Vec11 v = traj.waypoints[k].to_vector();
        out << traj.times[k];
        for (int i = 0; i < kWholeBodyDof; ++i) out << " " << v[i];
        out << "\n";
    }
}

}  // namespace viamg
