#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "viamg/kinematic_maps.hpp"

using namespace viamg;

namespace {

// planar 2-link toy arm in the x-z plane: pitch-pitch, remaining joints locked
RobotModel toy_two_link(double l1 = 0.25, double l2 = 0.15) {
    RobotModel m = default_robot_model();
    m.name = "toy_two_link";
    m.torso_min = m.torso_max = 0.0;
    m.torso_lift_origin = Vec3::Zero();
    m.arm_mount = Vec3::Zero();
    for (int i = 0; i < kArmDof; ++i) {
        m.joints[i].axis = JointAxis::Y;
        m.joints[i].link_length = 0.0;
        m.joints[i].lower = m.joints[i].upper = 0.0;
    }
    m.joints[0].link_length = l1;
    m.joints[0].lower = -M_PI;
    m.joints[0].upper = M_PI;
    m.joints[1].link_length = l2;
    m.joints[1].lower = -M_PI;
    m.joints[1].upper = M_PI;
    return m;
}

// toy torso fixture: prismatic torso plus one pitch joint
RobotModel toy_prismatic_1r(double l = 0.3) {
    RobotModel m = toy_two_link(l, 0.0);
    m.torso_min = 0.0;
    m.torso_max = 0.4;
    m.torso_lift_origin = Vec3(0, 0, 0.3);
    m.joints[1].lower = m.joints[1].upper = 0.0;
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("pose grid uses 5 cm position cells and pi/8 orientation bins") {
    PoseGrid g;
    CHECK(g.pos_res == 0.05);
    CHECK(g.ori_res == doctest::Approx(M_PI / 8));
    CHECK(g.n_yaw() == 16);
    CHECK(g.n_pitch() == 8);
    CHECK(g.n_roll() == 16);
}

TEST_CASE("reachability: voxels beyond total arm reach stay empty") {
    RobotModel m = default_robot_model();
    auto reach = build_reachability(m, 20000, 3);
    CHECK(reach.voxels.size() > 100);

    // query probe beyond reach for any torso height
    Pose3 probe = make_pose(Vec3(-1.15, 0, 1.7), Mat3::Identity());
    CHECK(reach.count(probe) == 0);

    // global soundness: every occupied voxel position is attainable
    double max_reach = m.total_arm_reach();
    Vec3 diag = Vec3::Constant(reach.grid.pos_res);
    for (const auto& [key, entry] : reach.voxels) {
        Vec3 c = reach.grid.position_center_of(key);
        double best = std::numeric_limits<double>::max();
        for (double h : {m.torso_min, m.torso_max}) {
            Vec3 shoulder = m.torso_lift_origin + Vec3(0, 0, h) + m.arm_mount;
            // nearest shoulder over the torso interval: clamp z
            Vec3 s = shoulder;
            s.z() = std::clamp(c.z(), (m.torso_lift_origin + m.arm_mount).z(),
                               (m.torso_lift_origin + m.arm_mount).z() + m.torso_max);
            best = std::min(best, (c - s).norm());
        }
        CHECK(best <= max_reach + diag.norm());
    }
}

TEST_CASE("toy 2-link annulus matches dense grid enumeration within one voxel") {
    RobotModel m = toy_two_link();
    const double l1 = 0.25, l2 = 0.15;
    PoseGrid grid;
    auto reach = build_reachability(m, 100000, 5, grid);
    REQUIRE(!reach.voxels.empty());

    auto radial = [&](uint64_t key) {
        Vec3 c = grid.position_center_of(key);
        return c.norm();  // shoulder at the origin for this toy
    };
    double mc_min = 1e9, mc_max = 0;
    for (const auto& [key, e] : reach.voxels) {
        mc_min = std::min(mc_min, radial(key));
        mc_max = std::max(mc_max, radial(key));
    }

    // independent oracle: dense (theta1, theta2) enumeration, same z >= 0 rule
    double or_min = 1e9, or_max = 0;
    const int n = 600;
    for (int i = 0; i < n; ++i) {
        double t1 = -M_PI + 2 * M_PI * i / n;
        for (int j = 0; j < n; ++j) {
            double t2 = -M_PI + 2 * M_PI * j / n;
            double x = l1 * std::cos(t1) + l2 * std::cos(t1 + t2);
            double z = -l1 * std::sin(t1) - l2 * std::sin(t1 + t2);
            if (z < 0) continue;
            // voxelize with independent arithmetic
            double cx = (std::floor((x + grid.xy_extent) / grid.pos_res) + 0.5) * grid.pos_res -
                        grid.xy_extent;
            double cz = (std::floor(z / grid.pos_res) + 0.5) * grid.pos_res;
            double cy = (std::floor(grid.xy_extent / grid.pos_res) + 0.5) * grid.pos_res -
                        grid.xy_extent;  // y = 0 voxel center
            double r = std::sqrt(cx * cx + cy * cy + cz * cz);
            or_min = std::min(or_min, r);
            or_max = std::max(or_max, r);
        }
    }
    const double one_voxel = grid.pos_res * std::sqrt(3.0);
    CHECK(std::abs(mc_min - or_min) <= one_voxel);
    CHECK(std::abs(mc_max - or_max) <= one_voxel);
    // and the analytic annulus bounds themselves
    CHECK(mc_min >= std::abs(l1 - l2) - one_voxel);
    CHECK(mc_max <= l1 + l2 + one_voxel);
}

TEST_CASE("capability is closed under construction and rejects far poses") {
    RobotModel m = default_robot_model();
    const uint64_t seed = 9;
    auto reach = build_reachability(m, 20000, seed);
    auto cap = CapabilityMap::from_reachability(reach);

    // replay the builder's sample stream: every in-grid sampled pose must be reachable
    Rng rng(seed);
    int checked = 0;
    for (int k = 0; k < 200 && checked < 50; ++k) {
        Configuration q = sample_torso_arm(m, rng);
        Pose3 ee = ee_pose(m, q);
        if (ee.translation().z() < 0.0) continue;
        if (!cap.grid.key_of(ee)) continue;
        CHECK(cap.reachable(ee));
        ++checked;
    }
    CHECK(checked == 50);

    CHECK(!cap.reachable(make_pose(Vec3(5, 0, 1), Mat3::Identity())));
}

TEST_CASE("capability flag equals direct reachability lookup on random poses") {
    RobotModel m = default_robot_model();
    auto reach = build_reachability(m, 30000, 11);
    auto cap = CapabilityMap::from_reachability(reach);
    Rng rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        // a world ee pose and a world base pose; the query inverts the base
        // transform to express the ee pose in the base frame
        Pose3 base = make_pose(Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), 0),
                               rot_z(rng.uniform(-M_PI, M_PI)));
        Pose3 ee_world = make_pose(
            Vec3(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-0.2, 2.0)),
            (rot_z(rng.uniform(-M_PI, M_PI)) * rot_y(rng.uniform(-1.5, 1.5)) *
             rot_x(rng.uniform(-M_PI, M_PI))));
        Pose3 in_base = base.inverse() * ee_world;
        CHECK(cap.reachable(in_base) == (reach.count(in_base) > 0));
    }
}

TEST_CASE("doubling the sample count never shrinks the reachable set") {
    RobotModel m = toy_two_link();
    auto small = build_reachability(m, 20000, 21);
    auto big = build_reachability(m, 40000, 21);
    for (const auto& [key, e] : small.voxels) {
        auto it = big.voxels.find(key);
        REQUIRE(it != big.voxels.end());
        CHECK(it->second.count >= e.count);
    }
}

TEST_CASE("reachability map serializes and reloads byte-identically") {
    RobotModel m = toy_two_link();
    auto reach = build_reachability(m, 5000, 31);
    save_reachability(reach, "reach_a.vkmp");
    auto loaded = load_reachability("reach_a.vkmp");
    save_reachability(loaded, "reach_b.vkmp");
    CHECK(read_file("reach_a.vkmp") == read_file("reach_b.vkmp"));
    CHECK(loaded.samples_used == reach.samples_used);
    CHECK(loaded.voxels.size() == reach.voxels.size());
    std::remove("reach_a.vkmp");
    std::remove("reach_b.vkmp");
}

TEST_CASE("torso map: never-visited bins yield none, heights stay in limits") {
    RobotModel m = default_robot_model();
    auto torso = build_torso_map(m, 200000, 41);
    CHECK(!torso.query(Vec3(-1.19, -1.19, 1.75)).has_value());  // far corner, unreachable
    int defined = 0;
    for (int ix = 0; ix < torso.nx(); ix += 7) {
        for (int iy = 0; iy < torso.nx(); iy += 7) {
            for (int iz = 0; iz < torso.nz(); iz += 5) {
                Vec3 p(-torso.xy_extent + (ix + 0.5) * torso.pos_res,
                       -torso.xy_extent + (iy + 0.5) * torso.pos_res,
                       torso.z_min + (iz + 0.5) * torso.pos_res);
                auto h = torso.query(p);
                if (h) {
                    ++defined;
                    CHECK(*h >= m.torso_min);
                    CHECK(*h <= m.torso_max);
                }
            }
        }
    }
    CHECK(defined > 20);
}

TEST_CASE("torso map argmax matches an exhaustive count oracle per bin") {
    RobotModel m = toy_prismatic_1r();
    const uint64_t seed = 51, n = 50000;
    auto torso = build_torso_map(m, n, seed);

    // independent re-count of the same sample stream
    const int nh = torso.n_torso();
    std::unordered_map<size_t, std::vector<uint32_t>> counts;
    Rng rng(seed);
    for (uint64_t k = 0; k < n; ++k) {
        Configuration q = sample_torso_arm(m, rng);
        Vec3 p = ee_pose(m, q).translation();
        if (p.x() < -torso.xy_extent || p.x() >= torso.xy_extent) continue;
        if (p.y() < -torso.xy_extent || p.y() >= torso.xy_extent) continue;
        if (p.z() < torso.z_min || p.z() >= torso.z_max) continue;
        int ix = std::min((int)std::floor((p.x() + torso.xy_extent) / torso.pos_res),
                          torso.nx() - 1);
        int iy = std::min((int)std::floor((p.y() + torso.xy_extent) / torso.pos_res),
                          torso.nx() - 1);
        int iz = std::min((int)std::floor((p.z() - torso.z_min) / torso.pos_res), torso.nz() - 1);
        size_t bin = ((size_t)ix * torso.nx() + iy) * torso.nz() + iz;
        auto& v = counts[bin];
        if (v.empty()) v.assign(nh, 0);
        int ih = std::min((int)std::floor((q.torso_h - torso.torso_min) / torso.torso_bin),
                          nh - 1);
        v[ih] += 1;
    }
    REQUIRE(!counts.empty());
    for (const auto& [bin, v] : counts) {
        uint32_t best_count = 0;
        int best = -1;
        for (int ih = 0; ih < nh; ++ih) {
            if (v[ih] > best_count) {
                best_count = v[ih];
                best = ih;
            }
        }
        CHECK((int)torso.best_bin[bin] == best);
    }
    // bins the oracle never saw must be undefined in the map
    size_t n_bins = (size_t)torso.nx() * torso.nx() * torso.nz();
    for (size_t bin = 0; bin < n_bins; bin += 997) {
        if (!counts.count(bin)) CHECK(torso.best_bin[bin] == -1);
    }
}

TEST_CASE("torso map serializes and reloads byte-identically") {
    RobotModel m = toy_prismatic_1r();
    auto torso = build_torso_map(m, 20000, 61);
    save_torso_map(torso, "torso_a.vkmp");
    auto loaded = load_torso_map("torso_a.vkmp");
    save_torso_map(loaded, "torso_b.vkmp");
    CHECK(read_file("torso_a.vkmp") == read_file("torso_b.vkmp"));
    std::remove("torso_a.vkmp");
    std::remove("torso_b.vkmp");
}

TEST_CASE("map builds are deterministic for a fixed seed") {
    RobotModel m = toy_two_link();
    auto a = build_reachability(m, 10000, 71);
    auto b = build_reachability(m, 10000, 71);
    REQUIRE(a.voxels.size() == b.voxels.size());
    for (const auto& [key, e] : a.voxels) {
        auto it = b.voxels.find(key);
        REQUIRE(it != b.voxels.end());
        CHECK(it->second.count == e.count);
        CHECK(it->second.max_manipulability == e.max_manipulability);
    }
}
