#include "viamg/perception.hpp"

namespace viamg {

GazeAction GazeGrid::aim_at(const Vec3& target, const Vec3& cam_pos, double base_theta) const {
    Vec3 d = target - cam_pos;
    double want_pan = wrap_angle(std::atan2(d.y(), d.x()) - base_theta);
    double want_tilt = std::atan2(-d.z(), d.head<2>().norm());
    GazeAction best = action(0, 0);
    double best_err = std::numeric_limits<double>::max();
    for (int i = 0; i < n_pan; ++i) {
        for (int j = 0; j < n_tilt; ++j) {
            GazeAction a = action(i, j);
            double err = std::abs(wrap_angle(a.pan - want_pan)) + std::abs(a.tilt - want_tilt);
            if (err < best_err) {
                best_err = err;
                best = a;
            }
        }
    }
    return best;
}

bool visible(const Vec3& x, const GazeAction& a, const Configuration& q, const BeliefMap& map,
             const RobotModel& model, const CameraModel& camera) {
    Pose3 cam = camera_pose(model, q, a.pan, a.tilt);
    Vec3 p_cam = cam.inverse() * x;
    if (!camera.depth_valid(p_cam.z())) return false;
    int u, v;
    if (!camera.project(p_cam, u, v)) return false;
    return !map.segment_occluded(cam.translation(), x);
}

double distance_to_robot(const Vec3& x, const std::vector<Sphere>& spheres) {
    double best = std::numeric_limits<double>::max();
    for (const auto& s : spheres) {
        best = std::min(best, (x - s.center).norm() - s.radius);
    }
    return std::max(best, 0.0);
}

double safety_weight(const Vec3& x, std::span<const std::vector<Sphere>> wp_spheres,
                     std::span<const double> speeds, const PerceptionParams& params) {
    const size_t terms = std::min(wp_spheres.size(), (size_t)params.lookahead + 1);
    const double sigma = params.sigma();
    double w = 0.0;
    double gamma_i = 1.0;
    for (size_t i = 0; i < terms; ++i) {
        double d = distance_to_robot(x, wp_spheres[i]);
        double z = (d - params.d_mid) / sigma;
        w += gamma_i * std::exp(-0.5 * z * z) * speeds[i];
        gamma_i *= params.gamma;
    }
    return w;
}

double safety_weight(const Vec3& x, const Trajectory& traj, size_t from_index,
                     const PerceptionParams& params, const RobotModel& model) {
    std::vector<std::vector<Sphere>> wp_spheres;
    std::vector<double> speeds;
    const size_t end = std::min(traj.size(), from_index + params.lookahead + 1);
    for (size_t i = from_index; i < end; ++i) {
        wp_spheres.push_back(forward_kinematics(model, traj.waypoints[i]).spheres);
        speeds.push_back(traj.velocities[i].norm());
    }
    return safety_weight(x, wp_spheres, speeds, params);
}

std::vector<ImportanceSample> execution_importance(const Trajectory& traj, size_t from_index,
                                                   const PerceptionParams& params,
                                                   const RobotModel& model) {
    std::vector<std::vector<Sphere>> wp_spheres;
    std::vector<double> speeds;
    for (size_t i = from_index; i < traj.size(); ++i) {
        wp_spheres.push_back(forward_kinematics(model, traj.waypoints[i]).spheres);
        speeds.push_back(traj.velocities[i].norm());
    }
    std::vector<ImportanceSample> samples;
    samples.reserve(wp_spheres.size() * (wp_spheres.empty() ? 0 : wp_spheres[0].size()));
    std::span<const std::vector<Sphere>> window(wp_spheres);
    std::span<const double> speed_window(speeds);
    for (const auto& spheres : wp_spheres) {
        for (const auto& s : spheres) {
            double w = safety_weight(s.center, window, speed_window, params);
            if (w > 0.0) samples.push_back({s.center, w});
        }
    }
    return samples;
}

std::vector<ImportanceSample> planning_importance(const Vec3& target,
                                                  const PerceptionParams& params) {
    std::vector<ImportanceSample> samples;
    samples.push_back({target, 1.0});
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    const int n = 32;
    for (double radius : {0.5 * params.epsilon, params.epsilon}) {
        for (int i = 0; i < n; ++i) {
            double z = 1.0 - 2.0 * (i + 0.5) / n;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double ang = golden * i;
            samples.push_back(
                {target + radius * Vec3(r * std::cos(ang), r * std::sin(ang), z), 1.0});
        }
    }
    return samples;
}

GazeAction select_gaze(const std::vector<ImportanceSample>& samples, const Configuration& q,
                       const BeliefMap& map, const RobotModel& model, const CameraModel& camera,
                       const PerceptionParams& params) {
    GazeAction best = params.grid.action(0, 0);
    double best_score = -1.0;
    for (int i = 0; i < params.grid.n_pan; ++i) {
        for (int j = 0; j < params.grid.n_tilt; ++j) {
            GazeAction a = params.grid.action(i, j);
            double score = 0.0;
            for (const auto& s : samples) {
                if (s.weight <= 0.0) continue;
                if (visible(s.x, a, q, map, model, camera)) score += s.weight;
            }
            if (score > best_score) {  // strict: ties keep the lowest indices
                best_score = score;
                best = a;
            }
        }
    }
    return best;
}

GazeAction select_gaze_policy(const BeliefMap& map, const Configuration& q,
                              const Trajectory* traj, size_t from_index, const Vec3& target,
                              const PerceptionParams& params, const RobotModel& model,
                              const CameraModel& camera) {
    std::vector<ImportanceSample> samples;
    if (traj != nullptr && from_index < traj->size()) {
        samples = execution_importance(*traj, from_index, params, model);
    } else {
        samples = planning_importance(target, params);
    }
    return select_gaze(samples, q, map, model, camera, params);
}

}  // namespace viamg
