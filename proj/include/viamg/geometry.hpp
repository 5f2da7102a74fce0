#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdint>
#include <random>

namespace viamg {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Vec11 = Eigen::Matrix<double, 11, 1>;
using Mat3 = Eigen::Matrix3d;
using Pose3 = Eigen::Isometry3d;

/// Wraps an angle to (-pi, pi]. A result of exactly -pi maps to +pi.
template <class T>
inline T wrap_angle(T a) {
    const T two_pi = T(2) * T(M_PI);
    a = std::fmod(a, two_pi);
    if (a <= -T(M_PI)) a += two_pi;
    if (a > T(M_PI)) a -= two_pi;
    return a;
}

inline Mat3 rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }
inline Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
inline Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

inline Pose3 make_pose(const Vec3& t, const Mat3& r) {
    Pose3 p = Pose3::Identity();
    p.linear() = r;
    p.translation() = t;
    return p;
}

/// Geodesic angle between two rotations, arccos((tr(R1^T R2) - 1) / 2).
inline double rotation_angle_between(const Mat3& r1, const Mat3& r2) {
    double c = ((r1.transpose() * r2).trace() - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Rotation vector (axis * angle) of R, the log map of SO(3).
inline Vec3 rotation_log(const Mat3& r) {
    Eigen::AngleAxisd aa(r);
    return aa.angle() * aa.axis();
}

struct Rect2 {
    Vec2 min = Vec2::Zero();
    Vec2 max = Vec2::Zero();
    bool contains(const Vec2& p) const {
        return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
    }
};

/// Deterministic RNG. All derived draws are hand-rolled from raw mt19937_64
/// output so streams are identical across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed = 0) : gen_(seed), seed_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [0, n). Modulo bias is negligible for n << 2^32.
    uint64_t uniform_int(uint64_t n) { return n == 0 ? 0 : gen_() % n; }

    /// Standard normal via Box-Muller (no cached state).
    double normal() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Child stream decorrelated from this one; distinct tags give distinct streams.
    Rng fork(uint64_t tag) const {
        return Rng(splitmix(seed_ ^ (0x9e3779b97f4a7c15ull * (tag + 1))));
    }

  private:
    static uint64_t splitmix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    uint64_t seed_;
};

}  // namespace viamg
