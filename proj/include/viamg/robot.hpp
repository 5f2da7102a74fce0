#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "viamg/geometry.hpp"

namespace viamg {

inline constexpr int kArmDof = 7;
inline constexpr int kWholeBodyDof = 11;  // x, y, theta, torso, 7 arm joints

/// Whole-body configuration: planar base pose, prismatic torso, 7-R arm.
struct Configuration {
    double base_x = 0.0;
    double base_y = 0.0;
    double base_theta = 0.0;  // wrapped to (-pi, pi]
    double torso_h = 0.0;
    Vec7 arm = Vec7::Zero();

    Vec11 to_vector() const {
        Vec11 v;
        v << base_x, base_y, base_theta, torso_h, arm;
        return v;
    }

    static Configuration from_vector(const Vec11& v) {
        Configuration q;
        q.base_x = v[0];
        q.base_y = v[1];
        q.base_theta = wrap_angle(v[2]);
        q.torso_h = v[3];
        q.arm = v.tail<7>();
        return q;
    }

    Vec2 base_xy() const { return Vec2(base_x, base_y); }

    bool operator==(const Configuration& o) const {
        return base_x == o.base_x && base_y == o.base_y && base_theta == o.base_theta &&
               torso_h == o.torso_h && arm == o.arm;
    }
};

/// Difference b - a with the heading component wrapped.
Vec11 config_delta(const Configuration& a, const Configuration& b);

/// Mixed-metric length of the delta (meters and radians weighted 1:1).
inline double config_distance(const Configuration& a, const Configuration& b) {
    return config_delta(a, b).norm();
}

enum class JointAxis { X, Y, Z };

struct ArmJoint {
    JointAxis axis = JointAxis::X;
    double link_length = 0.0;  // translation along local x after the rotation
    double lower = 0.0;
    double upper = 0.0;
};

/// Collision sphere attached to a robot frame.
/// Frames: 0 = base, 1 = torso, 2..8 = arm links 1..7.
struct CollisionSphere {
    int frame = 0;
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
};

/// Modeled collision segment of a link, as fractions [begin, end] of the link
/// length measured from the proximal joint. Used by sphere-cover checks.
struct LinkSegment {
    double begin = 0.0;
    double end = 1.0;
};

struct RobotModel {
    std::string name;
    double torso_min = 0.0;
    double torso_max = 0.4;
    Vec3 torso_lift_origin = Vec3(0, 0, 0.30);  // torso frame at h = 0, in base frame
    Vec3 arm_mount = Vec3(0.12, 0, 0);          // shoulder offset in torso frame
    std::array<ArmJoint, kArmDof> joints;
    std::array<LinkSegment, kArmDof> link_segments;
    std::vector<CollisionSphere> spheres;
    double footprint_radius = 0.29;
    Vec3 head_mount = Vec3(0.02, 0, 0.60);  // pan-tilt pivot in torso frame
    double pan_min = -M_PI_2, pan_max = M_PI_2;
    double tilt_min = -M_PI_4, tilt_max = M_PI_2;

    Configuration home() const { return Configuration{}; }

    bool within_limits(const Configuration& q, double tol = 1e-9) const;
    void clamp_to_limits(Configuration& q) const;
    double total_arm_reach() const;

    /// Shoulder position in world frame.
    Vec3 shoulder_position(const Configuration& q) const;
};

struct Sphere {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
};

struct FkResult {
    Pose3 ee;
    std::vector<Sphere> spheres;  // world frame, same order as model.spheres
};

/// Base pose lifted to SE(3).
Pose3 base_pose(const Configuration& q);

/// Forward kinematics: end-effector pose and all collision spheres in world frame.
FkResult forward_kinematics(const RobotModel& model, const Configuration& q);

/// End-effector pose only (no sphere placement).
Pose3 ee_pose(const RobotModel& model, const Configuration& q);

/// All frames of the kinematic chain: [base, torso, link1..link7], world frame.
std::array<Pose3, 9> chain_frames(const RobotModel& model, const Configuration& q);

/// 6x7 geometric Jacobian of the end-effector w.r.t. the arm joints,
/// expressed in world frame (linear rows first, angular rows last).
Eigen::Matrix<double, 6, 7> arm_jacobian(const RobotModel& model, const Configuration& q);

/// Yoshikawa manipulability sqrt(det(J J^T)) of the arm Jacobian.
double manipulability(const RobotModel& model, const Configuration& q);

struct IkOptions {
    bool lock_base_torso = true;  // when false the torso joint participates too
    int max_restarts = 8;
    int max_iterations = 200;
    double damping = 1e-2;
    double pos_tolerance = 1e-4;
    double rot_tolerance = 1e-3;
    uint64_t seed = 0x1c03d5u;
};

/// Damped-least-squares IK for the arm (optionally torso). Returns the solved
/// configuration (base always taken from the seed) or nullopt on non-convergence.
std::optional<Configuration> solve_ik(const RobotModel& model, const Pose3& target,
                                      const Configuration& seed, const IkOptions& opts = {});

/// World pose of the head camera at gaze (pan, tilt). The optical axis is +z
/// of the returned frame; pan = 0, tilt = 0 looks along the base +x axis,
/// positive tilt looks down.
Pose3 camera_pose(const RobotModel& model, const Configuration& q, double pan, double tilt);

/// Camera position only (gaze-independent).
Vec3 camera_position(const RobotModel& model, const Configuration& q);

RobotModel load_robot_model(const std::string& path);
void save_robot_model(const RobotModel& model, const std::string& path);

/// The canonical model shipped with the repo, built in code so tests do not
/// depend on the data file. load_robot_model of the shipped file matches this.
RobotModel default_robot_model();

}  // namespace viamg
