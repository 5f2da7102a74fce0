#pragma once

#include <optional>
#include <string>
#include <vector>

#include "viamg/geometry.hpp"

namespace viamg {

enum class PrimitiveKind { Box, Cylinder, Sphere, Plane };

/// Solid primitive. Size semantics by kind:
///   Box      - full extents (sx, sy, sz)
///   Cylinder - (radius, height, -), axis along local z, centered
///   Sphere   - (radius, -, -)
///   Plane    - finite rectangle (sx, sy) in the local xy plane, normal +z
struct Primitive {
    PrimitiveKind kind = PrimitiveKind::Box;
    Pose3 pose = Pose3::Identity();
    Vec3 size = Vec3::Ones();
};

struct DynamicObstacle {
    Primitive primitive;
    double trigger_distance = 1.7;  // base proximity that makes it appear
    Vec2 motion_direction = Vec2::Zero();  // unit direction for moving mode
};

struct TargetObject {
    Primitive primitive;
    Vec3 graspable_axis = Vec3::UnitZ();  // in the primitive's local frame
};

struct Scene {
    std::vector<Primitive> statics;
    std::vector<DynamicObstacle> dynamics;
    TargetObject target;

    Vec3 target_position() const { return target.primitive.pose.translation(); }
};

/// Nearest intersection parameter t >= 0 of the ray origin + t * dir with the
/// primitive, or nullopt. dir need not be normalized; t is in units of |dir|.
std::optional<double> ray_primitive(const Vec3& origin, const Vec3& dir, const Primitive& prim);

/// Signed distance from a point to the primitive surface (negative inside).
double point_primitive_distance(const Vec3& p, const Primitive& prim);

/// Deterministic surface point sampling at roughly the given spacing.
void sample_primitive_surface(const Primitive& prim, double spacing, std::vector<Vec3>& out);

/// Horizontal support surface: the top face of a box or cylinder.
struct SupportSurface {
    double z = 0.0;
    Vec2 center = Vec2::Zero();
    Vec2 half_extents = Vec2::Zero();  // axis-aligned bound of the top face
    double yaw = 0.0;                  // box yaw; 0 for cylinders
    bool circular = false;
    double radius = 0.0;

    bool contains(const Vec2& p, double margin) const;
};

/// Detects horizontal top faces in the given height band.
std::vector<SupportSurface> detect_supports(const Scene& scene, double z_min = 0.3,
                                            double z_max = 1.2);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);
std::string scene_to_json_string(const Scene& scene);
Scene scene_from_json_string(const std::string& text);

}  // namespace viamg
