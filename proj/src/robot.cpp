#include "viamg/robot.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace viamg {

Vec11 config_delta(const Configuration& a, const Configuration& b) {
    Vec11 d = b.to_vector() - a.to_vector();
    d[2] = wrap_angle(b.base_theta - a.base_theta);
    return d;
}

bool RobotModel::within_limits(const Configuration& q, double tol) const {
    if (q.torso_h < torso_min - tol || q.torso_h > torso_max + tol) return false;
    for (int i = 0; i < kArmDof; ++i) {
        if (q.arm[i] < joints[i].lower - tol || q.arm[i] > joints[i].upper + tol) return false;
    }
    return true;
}

void RobotModel::clamp_to_limits(Configuration& q) const {
    q.torso_h = std::clamp(q.torso_h, torso_min, torso_max);
    for (int i = 0; i < kArmDof; ++i) {
        q.arm[i] = std::clamp(q.arm[i], joints[i].lower, joints[i].upper);
    }
    q.base_theta = wrap_angle(q.base_theta);
}

double RobotModel::total_arm_reach() const {
    double r = 0.0;
    for (const auto& j : joints) r += j.link_length;
    return r;
}

Pose3 base_pose(const Configuration& q) {
    return make_pose(Vec3(q.base_x, q.base_y, 0.0), rot_z(q.base_theta));
}

static Mat3 axis_rotation(JointAxis axis, double angle) {
    switch (axis) {
        case JointAxis::X: return rot_x(angle);
        case JointAxis::Y: return rot_y(angle);
        case JointAxis::Z: return rot_z(angle);
    }
    return Mat3::Identity();
}

static Vec3 axis_vector(JointAxis axis) {
    switch (axis) {
        case JointAxis::X: return Vec3::UnitX();
        case JointAxis::Y: return Vec3::UnitY();
        case JointAxis::Z: return Vec3::UnitZ();
    }
    return Vec3::UnitX();
}

std::array<Pose3, 9> chain_frames(const RobotModel& model, const Configuration& q) {
    std::array<Pose3, 9> frames;
    frames[0] = base_pose(q);
    frames[1] = frames[0] * Eigen::Translation3d(model.torso_lift_origin + Vec3(0, 0, q.torso_h));
    Pose3 cur = frames[1] * Eigen::Translation3d(model.arm_mount);
    for (int i = 0; i < kArmDof; ++i) {
        cur = cur * make_pose(Vec3::Zero(), axis_rotation(model.joints[i].axis, q.arm[i])) *
              Eigen::Translation3d(Vec3(model.joints[i].link_length, 0, 0));
        frames[2 + i] = cur;
    }
    return frames;
}

Vec3 RobotModel::shoulder_position(const Configuration& q) const {
    return base_pose(q) * (torso_lift_origin + Vec3(0, 0, q.torso_h) + arm_mount);
}

FkResult forward_kinematics(const RobotModel& model, const Configuration& q) {
    auto frames = chain_frames(model, q);
    FkResult out;
    out.ee = frames[8];
    out.spheres.reserve(model.spheres.size());
    for (const auto& s : model.spheres) {
        out.spheres.push_back({frames[s.frame] * s.center, s.radius});
    }
    return out;
}

Pose3 ee_pose(const RobotModel& model, const Configuration& q) {
    return chain_frames(model, q)[8];
}

Eigen::Matrix<double, 6, 7> arm_jacobian(const RobotModel& model, const Configuration& q) {
    auto frames = chain_frames(model, q);
    Vec3 p_ee = frames[8].translation();
    Eigen::Matrix<double, 6, 7> jac;
    Pose3 parent = frames[1] * Eigen::Translation3d(model.arm_mount);
    for (int i = 0; i < kArmDof; ++i) {
        // joint i rotates about its local axis at the parent frame origin
        Vec3 z = parent.linear() * axis_vector(model.joints[i].axis);
        Vec3 p = parent.translation();
        jac.block<3, 1>(0, i) = z.cross(p_ee - p);
        jac.block<3, 1>(3, i) = z;
        parent = frames[2 + i];
    }
    return jac;
}

double manipulability(const RobotModel& model, const Configuration& q) {
    auto jac = arm_jacobian(model, q);
    Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
    double det = jjt.determinant();
    return det > 0.0 ? std::sqrt(det) : 0.0;
}

std::optional<Configuration> solve_ik(const RobotModel& model, const Pose3& target,
                                      const Configuration& seed, const IkOptions& opts) {
    if (!model.within_limits(seed)) return std::nullopt;

    // quick reject: target farther from the shoulder than the arm can reach
    // for every admissible torso height
    {
        Vec3 p = target.translation();
        double best = std::numeric_limits<double>::max();
        for (double h : {model.torso_min, model.torso_max, seed.torso_h}) {
            Configuration qh = seed;
            qh.torso_h = h;
            best = std::min(best, (p - model.shoulder_position(qh)).norm());
        }
        if (best > model.total_arm_reach() + 1e-6) return std::nullopt;
    }

    const bool lock = opts.lock_base_torso;
    const int n = lock ? kArmDof : kArmDof + 1;
    const double max_step = 0.3;
    Rng rng(opts.seed);

    auto pose_error = [&](const Configuration& q) -> Vec6 {
        Pose3 cur = ee_pose(model, q);
        Vec6 e;
        e.head<3>() = target.translation() - cur.translation();
        e.tail<3>() = rotation_log(target.linear() * cur.linear().transpose());
        return e;
    };

    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        Configuration q = seed;
        if (restart > 0) {
            for (int i = 0; i < kArmDof; ++i) {
                q.arm[i] = rng.uniform(model.joints[i].lower, model.joints[i].upper);
            }
            if (!lock) q.torso_h = rng.uniform(model.torso_min, model.torso_max);
        }

        for (int iter = 0; iter < opts.max_iterations; ++iter) {
            Vec6 e = pose_error(q);
            if (e.head<3>().norm() < opts.pos_tolerance &&
                e.tail<3>().norm() < opts.rot_tolerance) {
                return q;
            }

            Eigen::MatrixXd jac(6, n);
            if (lock) {
                jac = arm_jacobian(model, q);
            } else {
                jac.col(0) << 0, 0, 1, 0, 0, 0;  // prismatic torso shifts the chain along +z
                jac.rightCols(kArmDof) = arm_jacobian(model, q);
            }

            Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
            jjt.diagonal().array() += opts.damping * opts.damping;
            Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(e);
            double step = dq.cwiseAbs().maxCoeff();
            if (step > max_step) dq *= max_step / step;

            if (lock) {
                q.arm += dq;
            } else {
                q.torso_h += dq[0];
                q.arm += dq.tail(kArmDof);
            }
            model.clamp_to_limits(q);
        }
    }
    return std::nullopt;
}

// Fixed rotation mapping the camera frame (+z optical, +x image right, +y image
// down) onto a level forward-looking mount: optical axis along parent +x.
static Mat3 camera_mount_rotation() {
    Mat3 r;
    r.col(0) = Vec3(0, -1, 0);
    r.col(1) = Vec3(0, 0, -1);
    r.col(2) = Vec3(1, 0, 0);
    return r;
}

Pose3 camera_pose(const RobotModel& model, const Configuration& q, double pan, double tilt) {
    Pose3 b = base_pose(q);
    Pose3 head = b * Eigen::Translation3d(model.torso_lift_origin + Vec3(0, 0, q.torso_h) +
                                          model.head_mount);
    return head * make_pose(Vec3::Zero(), rot_z(pan) * rot_y(tilt) * camera_mount_rotation());
}

Vec3 camera_position(const RobotModel& model, const Configuration& q) {
    return base_pose(q) * (model.torso_lift_origin + Vec3(0, 0, q.torso_h) + model.head_mount);
}

// ---------------------------------------------------------------------------
// model definition and file I/O

RobotModel default_robot_model() {
    RobotModel m;
    m.name = "fetchlike_7r";
    m.torso_min = 0.0;
    m.torso_max = 0.4;
    m.torso_lift_origin = Vec3(0, 0, 0.30);
    m.arm_mount = Vec3(0.12, 0, 0);
    m.footprint_radius = 0.29;
    m.head_mount = Vec3(0.02, 0, 0.60);
    m.pan_min = -M_PI_2;
    m.pan_max = M_PI_2;
    m.tilt_min = -M_PI_4;
    m.tilt_max = M_PI_2;

    // 7-R arm, roll (X) / pitch (Y) alternating, Fetch-like proportions
    const double lengths[kArmDof] = {0.12, 0.12, 0.25, 0.12, 0.25, 0.12, 0.14};
    const double pitch_lim = 2.25;
    const double roll_lim = M_PI;
    for (int i = 0; i < kArmDof; ++i) {
        bool roll = (i % 2 == 0);
        m.joints[i].axis = roll ? JointAxis::X : JointAxis::Y;
        m.joints[i].link_length = lengths[i];
        m.joints[i].lower = roll ? -roll_lim : -pitch_lim;
        m.joints[i].upper = roll ? roll_lim : pitch_lim;
        m.link_segments[i] = {0.0, 1.0};
    }
    // distal part of the last link is the gripper and carries no sphere
    m.link_segments[6] = {0.0, 0.6};

    // base body: two stacked spheres, projection within the footprint radius
    m.spheres.push_back({0, Vec3(0, 0, 0.13), 0.28});
    m.spheres.push_back({0, Vec3(0, 0, 0.33), 0.24});
    // torso column (frame 1 sits at the arm-mount height)
    m.spheres.push_back({1, Vec3(0, 0, -0.12), 0.12});
    m.spheres.push_back({1, Vec3(0, 0, 0.06), 0.12});
    m.spheres.push_back({1, Vec3(0, 0, 0.24), 0.12});
    // head
    m.spheres.push_back({1, Vec3(0.02, 0, 0.60), 0.11});
    // arm links: cross-section 0.05 plus 0.01 margin, centers on the segment
    const double arm_r = 0.06;
    const int counts[kArmDof] = {2, 2, 3, 2, 3, 2, 1};
    for (int i = 0; i < kArmDof; ++i) {
        double len = lengths[i];
        double seg_begin = -len + m.link_segments[i].begin * len;
        double seg_len = (m.link_segments[i].end - m.link_segments[i].begin) * len;
        int n = counts[i];
        for (int k = 0; k < n; ++k) {
            double x = seg_begin + seg_len * (k + 0.5) / n;
            m.spheres.push_back({2 + i, Vec3(x, 0, 0), arm_r});
        }
    }
    return m;
}

static JointAxis axis_from_string(const std::string& s) {
    if (s == "x") return JointAxis::X;
    if (s == "y") return JointAxis::Y;
    if (s == "z") return JointAxis::Z;
    throw std::runtime_error("unknown joint axis: " + s);
}

static std::string axis_to_string(JointAxis a) {
    switch (a) {
        case JointAxis::X: return "x";
        case JointAxis::Y: return "y";
        case JointAxis::Z: return "z";
    }
    return "x";
}

static nlohmann::json vec3_to_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

static Vec3 vec3_from_json(const nlohmann::json& j) {
    return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

RobotModel load_robot_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open robot model file: " + path);
    nlohmann::json j;
    in >> j;

    RobotModel m;
    m.name = j.value("name", "robot");
    m.torso_min = j.at("torso").at("min").get<double>();
    m.torso_max = j.at("torso").at("max").get<double>();
    m.torso_lift_origin = vec3_from_json(j.at("torso").at("lift_origin"));
    m.arm_mount = vec3_from_json(j.at("arm_mount"));
    m.footprint_radius = j.at("footprint_radius").get<double>();
    m.head_mount = vec3_from_json(j.at("head").at("mount"));
    m.pan_min = j.at("head").at("pan_range").at(0).get<double>();
    m.pan_max = j.at("head").at("pan_range").at(1).get<double>();
    m.tilt_min = j.at("head").at("tilt_range").at(0).get<double>();
    m.tilt_max = j.at("head").at("tilt_range").at(1).get<double>();

    const auto& joints = j.at("joints");
    if (joints.size() != kArmDof) throw std::runtime_error("expected 7 arm joints");
    for (int i = 0; i < kArmDof; ++i) {
        const auto& jj = joints.at(i);
        m.joints[i].axis = axis_from_string(jj.at("axis").get<std::string>());
        m.joints[i].link_length = jj.at("link_length").get<double>();
        m.joints[i].lower = jj.at("limits").at(0).get<double>();
        m.joints[i].upper = jj.at("limits").at(1).get<double>();
        m.link_segments[i].begin = jj.at("collision_segment").at(0).get<double>();
        m.link_segments[i].end = jj.at("collision_segment").at(1).get<double>();
    }

    m.spheres.clear();
    for (const auto& js : j.at("spheres")) {
        CollisionSphere s;
        s.frame = js.at("frame").get<int>();
        s.center = vec3_from_json(js.at("center"));
        s.radius = js.at("radius").get<double>();
        if (s.frame < 0 || s.frame > 8) throw std::runtime_error("sphere frame out of range");
        m.spheres.push_back(s);
    }
    for (int link = 0; link < kArmDof; ++link) {
        bool any = false;
        for (const auto& s : m.spheres) any = any || s.frame == 2 + link;
        if (!any) throw std::runtime_error("link without collision spheres");
    }
    return m;
}

void save_robot_model(const RobotModel& m, const std::string& path) {
    nlohmann::json j;
    j["name"] = m.name;
    j["torso"] = {{"min", m.torso_min},
                  {"max", m.torso_max},
                  {"lift_origin", vec3_to_json(m.torso_lift_origin)}};
    j["arm_mount"] = vec3_to_json(m.arm_mount);
    j["footprint_radius"] = m.footprint_radius;
    j["head"] = {{"mount", vec3_to_json(m.head_mount)},
                 {"pan_range", {m.pan_min, m.pan_max}},
                 {"tilt_range", {m.tilt_min, m.tilt_max}}};
    j["joints"] = nlohmann::json::array();
    for (int i = 0; i < kArmDof; ++i) {
        j["joints"].push_back({{"axis", axis_to_string(m.joints[i].axis)},
                               {"link_length", m.joints[i].link_length},
                               {"limits", {m.joints[i].lower, m.joints[i].upper}},
                               {"collision_segment",
                                {m.link_segments[i].begin, m.link_segments[i].end}}});
    }
    j["spheres"] = nlohmann::json::array();
    for (const auto& s : m.spheres) {
        j["spheres"].push_back(
            {{"frame", s.frame}, {"center", vec3_to_json(s.center)}, {"radius", s.radius}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write robot model file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace viamg
