#include <cstdio>

#include "doctest.h"
#include "viamg/robot.hpp"

using namespace viamg;

namespace {

Configuration random_config(const RobotModel& m, Rng& rng) {
    Configuration q;
    q.base_x = rng.uniform(-2, 2);
    q.base_y = rng.uniform(-2, 2);
    q.base_theta = rng.uniform(-M_PI, M_PI);
    q.torso_h = rng.uniform(m.torso_min, m.torso_max);
    for (int i = 0; i < kArmDof; ++i) q.arm[i] = rng.uniform(m.joints[i].lower, m.joints[i].upper);
    return q;
}

// independent chain-multiplication oracle: explicit homogeneous 4x4 products
Eigen::Matrix4d fk_oracle(const RobotModel& m, const Configuration& q) {
    auto trans = [](double x, double y, double z) {
        Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
        t(0, 3) = x;
        t(1, 3) = y;
        t(2, 3) = z;
        return t;
    };
    auto rot = [](JointAxis axis, double a) {
        Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
        double c = std::cos(a), s = std::sin(a);
        switch (axis) {
            case JointAxis::X:
                t(1, 1) = c; t(1, 2) = -s; t(2, 1) = s; t(2, 2) = c;
                break;
            case JointAxis::Y:
                t(0, 0) = c; t(0, 2) = s; t(2, 0) = -s; t(2, 2) = c;
                break;
            case JointAxis::Z:
                t(0, 0) = c; t(0, 1) = -s; t(1, 0) = s; t(1, 1) = c;
                break;
        }
        return t;
    };
    Eigen::Matrix4d t = rot(JointAxis::Z, q.base_theta);
    t(0, 3) = q.base_x;
    t(1, 3) = q.base_y;
    Vec3 lift = m.torso_lift_origin + Vec3(0, 0, q.torso_h);
    t = t * trans(lift.x(), lift.y(), lift.z());
    t = t * trans(m.arm_mount.x(), m.arm_mount.y(), m.arm_mount.z());
    for (int i = 0; i < kArmDof; ++i) {
        t = t * rot(m.joints[i].axis, q.arm[i]);
        t = t * trans(m.joints[i].link_length, 0, 0);
    }
    return t;
}

}  // namespace

TEST_CASE("wrap_angle maps to (-pi, pi]") {
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(0.1) == doctest::Approx(0.1));
    CHECK(wrap_angle(2 * M_PI + 0.1) == doctest::Approx(0.1));
    CHECK(wrap_angle(-0.1 - 4 * M_PI) == doctest::Approx(-0.1));
}

TEST_CASE("fk home pose is deterministic and bit-identical") {
    RobotModel m = default_robot_model();
    auto a = forward_kinematics(m, m.home());
    auto b = forward_kinematics(m, m.home());
    CHECK(a.ee.matrix() == b.ee.matrix());
    REQUIRE(a.spheres.size() == b.spheres.size());
    for (size_t i = 0; i < a.spheres.size(); ++i) {
        CHECK(a.spheres[i].center == b.spheres[i].center);
    }
    // home ee: straight arm along +x from the shoulder
    Vec3 expect = m.torso_lift_origin + m.arm_mount + Vec3(m.total_arm_reach(), 0, 0);
    CHECK((a.ee.translation() - expect).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("torso lift shifts torso and arm spheres by exactly (0,0,dh)") {
    RobotModel m = default_robot_model();
    Rng rng(7);
    Configuration q = random_config(m, rng);
    q.torso_h = 0.1;
    Configuration q2 = q;
    q2.torso_h = 0.2;
    auto a = forward_kinematics(m, q);
    auto b = forward_kinematics(m, q2);
    for (size_t i = 0; i < m.spheres.size(); ++i) {
        Vec3 shift = b.spheres[i].center - a.spheres[i].center;
        if (m.spheres[i].frame == 0) {
            CHECK(shift.norm() == doctest::Approx(0.0));
        } else {
            CHECK(shift.x() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(shift.y() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(shift.z() == doctest::Approx(0.1).epsilon(1e-12));
        }
    }
}

TEST_CASE("fk matches chain-multiplication oracle on random configs") {
    RobotModel m = default_robot_model();
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Configuration q = random_config(m, rng);
        Eigen::Matrix4d expect = fk_oracle(m, q);
        Pose3 got = ee_pose(m, q);
        CHECK((got.matrix() - expect).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("ik fixed point returns the seed arm within 1e-6") {
    RobotModel m = default_robot_model();
    Rng rng(23);
    int solved = 0;
    for (int trial = 0; trial < 10; ++trial) {
        Configuration q = random_config(m, rng);
        Pose3 target = ee_pose(m, q);
        auto sol = solve_ik(m, target, q);
        REQUIRE(sol.has_value());
        // the seed already satisfies the tolerance, so it must be returned as-is
        CHECK((sol->arm - q.arm).cwiseAbs().maxCoeff() < 1e-6);
        ++solved;
    }
    CHECK(solved == 10);
}

TEST_CASE("ik solutions pass the fk round-trip tolerance and stay in limits") {
    RobotModel m = default_robot_model();
    Rng rng(31);
    int found = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Configuration truth = random_config(m, rng);
        Pose3 target = ee_pose(m, truth);
        Configuration seed = truth;
        seed.arm.setZero();  // solve from home at the same base/torso
        auto sol = solve_ik(m, target, seed);
        if (!sol) continue;
        ++found;
        CHECK(m.within_limits(*sol));
        Pose3 reached = ee_pose(m, *sol);
        CHECK((reached.translation() - target.translation()).norm() < 1e-3);
        CHECK(rotation_angle_between(reached.linear(), target.linear()) < 1e-2);
        CHECK(sol->base_x == seed.base_x);
        CHECK(sol->torso_h == seed.torso_h);
    }
    CHECK(found > 20);  // DLS with restarts should solve most reachable targets
}

TEST_CASE("ik target beyond total reach returns none") {
    RobotModel m = default_robot_model();
    Configuration seed = m.home();
    Pose3 target = make_pose(Vec3(5.0, 0, 1.0), Mat3::Identity());
    CHECK(!solve_ik(m, target, seed).has_value());
}

TEST_CASE("manipulability vanishes at the fully stretched singular pose") {
    RobotModel m = default_robot_model();
    CHECK(manipulability(m, m.home()) < 1e-6);
}

TEST_CASE("manipulability is invariant to the base pose") {
    RobotModel m = default_robot_model();
    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        Configuration q = random_config(m, rng);
        Configuration q2 = q;
        q2.base_x += 1.3;
        q2.base_y -= 0.7;
        q2.base_theta = wrap_angle(q.base_theta + 1.1);
        CHECK(manipulability(m, q) == doctest::Approx(manipulability(m, q2)).epsilon(1e-9));
    }
}

TEST_CASE("analytic jacobian matches central finite differences") {
    RobotModel m = default_robot_model();
    Rng rng(53);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        Configuration q = random_config(m, rng);
        auto jac = arm_jacobian(m, q);
        for (int i = 0; i < kArmDof; ++i) {
            Configuration qp = q, qm = q;
            qp.arm[i] += h;
            qm.arm[i] -= h;
            Pose3 fp = ee_pose(m, qp), fm = ee_pose(m, qm);
            Vec3 dp = (fp.translation() - fm.translation()) / (2 * h);
            Vec3 dw = rotation_log(fp.linear() * fm.linear().transpose()) / (2 * h);
            for (int r = 0; r < 3; ++r) {
                CHECK(std::abs(jac(r, i) - dp[r]) < 1e-5);
                CHECK(std::abs(jac(3 + r, i) - dw[r]) < 1e-5);
            }
        }
    }
}

TEST_CASE("collision spheres cover the modeled link segments") {
    RobotModel m = default_robot_model();
    Rng rng(61);
    for (int trial = 0; trial < 1000; ++trial) {
        Configuration q = random_config(m, rng);
        auto frames = chain_frames(m, q);
        auto fk = forward_kinematics(m, q);
        for (int link = 0; link < kArmDof; ++link) {
            double len = m.joints[link].link_length;
            for (int k = 0; k <= 4; ++k) {
                double f = m.link_segments[link].begin +
                           (m.link_segments[link].end - m.link_segments[link].begin) * k / 4.0;
                Vec3 p = frames[2 + link] * Vec3(-len + f * len, 0, 0);
                bool covered = false;
                for (const auto& s : fk.spheres) {
                    if ((p - s.center).norm() <= s.radius + 1e-9) {
                        covered = true;
                        break;
                    }
                }
                CHECK(covered);
            }
        }
    }
}

TEST_CASE("footprint radius covers the projection of all base spheres") {
    RobotModel m = default_robot_model();
    for (const auto& s : m.spheres) {
        if (s.frame != 0) continue;
        CHECK(s.center.head<2>().norm() + s.radius <= m.footprint_radius + 1e-9);
    }
}

TEST_CASE("robot model file round-trips through save and load") {
    RobotModel m = default_robot_model();
    std::string path = "robot_roundtrip_test.json";
    save_robot_model(m, path);
    RobotModel loaded = load_robot_model(path);
    std::remove(path.c_str());

    Rng rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        Configuration q = random_config(m, rng);
        CHECK((ee_pose(m, q).matrix() - ee_pose(loaded, q).matrix()).cwiseAbs().maxCoeff() <
              1e-15);
    }
    CHECK(loaded.footprint_radius == m.footprint_radius);
    CHECK(loaded.spheres.size() == m.spheres.size());
}

TEST_CASE("camera pose looks along base +x at zero gaze and tilts down") {
    RobotModel m = default_robot_model();
    Configuration q = m.home();
    Pose3 cam = camera_pose(m, q, 0.0, 0.0);
    Vec3 optical = cam.linear().col(2);
    CHECK((optical - Vec3::UnitX()).norm() < 1e-12);
    Pose3 down = camera_pose(m, q, 0.0, 0.5);
    CHECK(down.linear().col(2).z() < -0.1);
    // pan rotates the optical axis about world z
    Pose3 left = camera_pose(m, q, 0.5, 0.0);
    CHECK(left.linear().col(2).y() > 0.1);
}
