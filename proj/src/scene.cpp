#include "viamg/scene.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace viamg {

static std::optional<double> ray_sphere_local(const Vec3& o, const Vec3& d, double r) {
    double a = d.squaredNorm();
    double b = 2.0 * o.dot(d);
    double c = o.squaredNorm() - r * r;
    double disc = b * b - 4 * a * c;
    if (disc < 0) return std::nullopt;
    double s = std::sqrt(disc);
    double t0 = (-b - s) / (2 * a);
    double t1 = (-b + s) / (2 * a);
    if (t0 >= 0) return t0;
    if (t1 >= 0) return t1;
    return std::nullopt;
}

static std::optional<double> ray_box_local(const Vec3& o, const Vec3& d, const Vec3& half) {
    double tmin = 0.0, tmax = std::numeric_limits<double>::max();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(d[i]) < 1e-15) {
            if (o[i] < -half[i] || o[i] > half[i]) return std::nullopt;
            continue;
        }
        double inv = 1.0 / d[i];
        double t0 = (-half[i] - o[i]) * inv;
        double t1 = (half[i] - o[i]) * inv;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return std::nullopt;
    }
    return tmin;  // tmin == 0 when the origin is inside
}

static std::optional<double> ray_cylinder_local(const Vec3& o, const Vec3& d, double r,
                                                double half_h) {
    double best = std::numeric_limits<double>::max();
    // side surface
    double a = d.x() * d.x() + d.y() * d.y();
    if (a > 1e-15) {
        double b = 2.0 * (o.x() * d.x() + o.y() * d.y());
        double c = o.x() * o.x() + o.y() * o.y() - r * r;
        double disc = b * b - 4 * a * c;
        if (disc >= 0) {
            double s = std::sqrt(disc);
            for (double t : {(-b - s) / (2 * a), (-b + s) / (2 * a)}) {
                if (t >= 0 && t < best && std::abs(o.z() + t * d.z()) <= half_h) best = t;
            }
        }
    }
    // caps
    if (std::abs(d.z()) > 1e-15) {
        for (double zc : {-half_h, half_h}) {
            double t = (zc - o.z()) / d.z();
            if (t >= 0 && t < best) {
                Vec3 p = o + t * d;
                if (p.x() * p.x() + p.y() * p.y() <= r * r) best = t;
            }
        }
    }
    if (best == std::numeric_limits<double>::max()) return std::nullopt;
    return best;
}

static std::optional<double> ray_plane_local(const Vec3& o, const Vec3& d, double hx, double hy) {
    if (std::abs(d.z()) < 1e-15) return std::nullopt;
    double t = -o.z() / d.z();
    if (t < 0) return std::nullopt;
    Vec3 p = o + t * d;
    if (std::abs(p.x()) <= hx && std::abs(p.y()) <= hy) return t;
    return std::nullopt;
}

std::optional<double> ray_primitive(const Vec3& origin, const Vec3& dir, const Primitive& prim) {
    Pose3 inv = prim.pose.inverse();
    Vec3 o = inv * origin;
    Vec3 d = inv.linear() * dir;
    switch (prim.kind) {
        case PrimitiveKind::Sphere: return ray_sphere_local(o, d, prim.size.x());
        case PrimitiveKind::Box: return ray_box_local(o, d, prim.size / 2.0);
        case PrimitiveKind::Cylinder:
            return ray_cylinder_local(o, d, prim.size.x(), prim.size.y() / 2.0);
        case PrimitiveKind::Plane:
            return ray_plane_local(o, d, prim.size.x() / 2.0, prim.size.y() / 2.0);
    }
    return std::nullopt;
}

double point_primitive_distance(const Vec3& p, const Primitive& prim) {
    Vec3 q = prim.pose.inverse() * p;
    switch (prim.kind) {
        case PrimitiveKind::Sphere: return q.norm() - prim.size.x();
        case PrimitiveKind::Box: {
            Vec3 half = prim.size / 2.0;
            Vec3 d = q.cwiseAbs() - half;
            double outside = d.cwiseMax(0.0).norm();
            double inside = std::min(d.maxCoeff(), 0.0);
            return outside + inside;
        }
        case PrimitiveKind::Cylinder: {
            double r = prim.size.x(), half_h = prim.size.y() / 2.0;
            double dr = std::hypot(q.x(), q.y()) - r;
            double dz = std::abs(q.z()) - half_h;
            double outside = std::hypot(std::max(dr, 0.0), std::max(dz, 0.0));
            double inside = std::min(std::max(dr, dz), 0.0);
            return outside + inside;
        }
        case PrimitiveKind::Plane: {
            double hx = prim.size.x() / 2.0, hy = prim.size.y() / 2.0;
            double dx = std::max(std::abs(q.x()) - hx, 0.0);
            double dy = std::max(std::abs(q.y()) - hy, 0.0);
            return std::sqrt(dx * dx + dy * dy + q.z() * q.z());
        }
    }
    return 0.0;
}

static void emit_grid(const Primitive& prim, const Vec3& corner, const Vec3& du, const Vec3& dv,
                      double lu, double lv, double spacing, std::vector<Vec3>& out) {
    int nu = std::max(1, (int)std::ceil(lu / spacing));
    int nv = std::max(1, (int)std::ceil(lv / spacing));
    for (int i = 0; i <= nu; ++i) {
        for (int j = 0; j <= nv; ++j) {
            Vec3 local = corner + du * (lu * i / nu) + dv * (lv * j / nv);
            out.push_back(prim.pose * local);
        }
    }
}

void sample_primitive_surface(const Primitive& prim, double spacing, std::vector<Vec3>& out) {
    switch (prim.kind) {
        case PrimitiveKind::Box: {
            Vec3 h = prim.size / 2.0;
            // six faces
            emit_grid(prim, Vec3(-h.x(), -h.y(), h.z()), Vec3::UnitX(), Vec3::UnitY(),
                      prim.size.x(), prim.size.y(), spacing, out);
            emit_grid(prim, Vec3(-h.x(), -h.y(), -h.z()), Vec3::UnitX(), Vec3::UnitY(),
                      prim.size.x(), prim.size.y(), spacing, out);
            emit_grid(prim, Vec3(-h.x(), -h.y(), -h.z()), Vec3::UnitX(), Vec3::UnitZ(),
                      prim.size.x(), prim.size.z(), spacing, out);
            emit_grid(prim, Vec3(-h.x(), h.y(), -h.z()), Vec3::UnitX(), Vec3::UnitZ(),
                      prim.size.x(), prim.size.z(), spacing, out);
            emit_grid(prim, Vec3(-h.x(), -h.y(), -h.z()), Vec3::UnitY(), Vec3::UnitZ(),
                      prim.size.y(), prim.size.z(), spacing, out);
            emit_grid(prim, Vec3(h.x(), -h.y(), -h.z()), Vec3::UnitY(), Vec3::UnitZ(),
                      prim.size.y(), prim.size.z(), spacing, out);
            break;
        }
        case PrimitiveKind::Cylinder: {
            double r = prim.size.x(), hh = prim.size.y() / 2.0;
            int na = std::max(8, (int)std::ceil(2 * M_PI * r / spacing));
            int nz = std::max(1, (int)std::ceil(prim.size.y() / spacing));
            for (int a = 0; a < na; ++a) {
                double ang = 2 * M_PI * a / na;
                for (int k = 0; k <= nz; ++k) {
                    Vec3 local(r * std::cos(ang), r * std::sin(ang), -hh + prim.size.y() * k / nz);
                    out.push_back(prim.pose * local);
                }
            }
            int nr = std::max(1, (int)std::ceil(r / spacing));
            for (int a = 0; a < na; ++a) {
                double ang = 2 * M_PI * a / na;
                for (int k = 1; k <= nr; ++k) {
                    double rr = r * k / nr;
                    out.push_back(prim.pose * Vec3(rr * std::cos(ang), rr * std::sin(ang), hh));
                    out.push_back(prim.pose * Vec3(rr * std::cos(ang), rr * std::sin(ang), -hh));
                }
            }
            break;
        }
        case PrimitiveKind::Sphere: {
            double r = prim.size.x();
            int n = std::max(16, (int)std::ceil(4 * M_PI * r * r / (spacing * spacing)));
            // Fibonacci sphere
            const double golden = M_PI * (3.0 - std::sqrt(5.0));
            for (int i = 0; i < n; ++i) {
                double z = 1.0 - 2.0 * (i + 0.5) / n;
                double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
                double ang = golden * i;
                out.push_back(prim.pose * Vec3(r * rad * std::cos(ang), r * rad * std::sin(ang),
                                               r * z));
            }
            break;
        }
        case PrimitiveKind::Plane: {
            Vec3 h(prim.size.x() / 2.0, prim.size.y() / 2.0, 0.0);
            emit_grid(prim, Vec3(-h.x(), -h.y(), 0), Vec3::UnitX(), Vec3::UnitY(), prim.size.x(),
                      prim.size.y(), spacing, out);
            break;
        }
    }
}

bool SupportSurface::contains(const Vec2& p, double margin) const {
    if (circular) return (p - center).norm() <= radius - margin;
    Vec2 d = p - center;
    double c = std::cos(-yaw), s = std::sin(-yaw);
    Vec2 local(c * d.x() - s * d.y(), s * d.x() + c * d.y());
    return std::abs(local.x()) <= half_extents.x() - margin &&
           std::abs(local.y()) <= half_extents.y() - margin;
}

std::vector<SupportSurface> detect_supports(const Scene& scene, double z_min, double z_max) {
    std::vector<SupportSurface> out;
    for (const auto& prim : scene.statics) {
        // require an upward-facing top: local +z aligned with world +z
        double up = (prim.pose.linear() * Vec3::UnitZ()).z();
        if (up < 0.95) continue;
        if (prim.kind == PrimitiveKind::Box) {
            double top = prim.pose.translation().z() + prim.size.z() / 2.0;
            if (top < z_min || top > z_max) continue;
            SupportSurface s;
            s.z = top;
            s.center = prim.pose.translation().head<2>();
            s.half_extents = Vec2(prim.size.x() / 2.0, prim.size.y() / 2.0);
            s.yaw = std::atan2(prim.pose.linear()(1, 0), prim.pose.linear()(0, 0));
            out.push_back(s);
        } else if (prim.kind == PrimitiveKind::Cylinder) {
            double top = prim.pose.translation().z() + prim.size.y() / 2.0;
            if (top < z_min || top > z_max) continue;
            SupportSurface s;
            s.z = top;
            s.center = prim.pose.translation().head<2>();
            s.circular = true;
            s.radius = prim.size.x();
            out.push_back(s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON I/O

static nlohmann::json pose_to_json(const Pose3& p) {
    Eigen::Quaterniond q(p.linear());
    return {{"xyz", {p.translation().x(), p.translation().y(), p.translation().z()}},
            {"quat_wxyz", {q.w(), q.x(), q.y(), q.z()}}};
}

static Pose3 pose_from_json(const nlohmann::json& j) {
    const auto& t = j.at("xyz");
    Vec3 xyz(t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>());
    const auto& r = j.at("quat_wxyz");
    Eigen::Quaterniond q(r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(),
                         r.at(3).get<double>());
    return make_pose(xyz, q.normalized().toRotationMatrix());
}

static std::string kind_to_string(PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::Box: return "box";
        case PrimitiveKind::Cylinder: return "cylinder";
        case PrimitiveKind::Sphere: return "sphere";
        case PrimitiveKind::Plane: return "plane";
    }
    return "box";
}

static PrimitiveKind kind_from_string(const std::string& s) {
    if (s == "box") return PrimitiveKind::Box;
    if (s == "cylinder") return PrimitiveKind::Cylinder;
    if (s == "sphere") return PrimitiveKind::Sphere;
    if (s == "plane") return PrimitiveKind::Plane;
    throw std::runtime_error("unknown primitive kind: " + s);
}

static int used_dims(PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::Box: return 3;
        case PrimitiveKind::Cylinder: return 2;
        case PrimitiveKind::Sphere: return 1;
        case PrimitiveKind::Plane: return 2;
    }
    return 3;
}

static nlohmann::json primitive_to_json(const Primitive& p) {
    for (int i = 0; i < used_dims(p.kind); ++i) {
        if (p.size[i] <= 0) throw std::runtime_error("primitive with non-positive dimensions");
    }
    return {{"kind", kind_to_string(p.kind)},
            {"pose", pose_to_json(p.pose)},
            {"size", {p.size.x(), p.size.y(), p.size.z()}}};
}

static Primitive primitive_from_json(const nlohmann::json& j) {
    Primitive p;
    p.kind = kind_from_string(j.at("kind").get<std::string>());
    p.pose = pose_from_json(j.at("pose"));
    const auto& s = j.at("size");
    p.size = Vec3(s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>());
    return p;
}

std::string scene_to_json_string(const Scene& scene) {
    nlohmann::json j;
    j["primitives"] = nlohmann::json::array();
    for (const auto& p : scene.statics) j["primitives"].push_back(primitive_to_json(p));
    j["dynamic"] = nlohmann::json::array();
    for (const auto& d : scene.dynamics) {
        j["dynamic"].push_back({{"primitive", primitive_to_json(d.primitive)},
                                {"trigger_distance", d.trigger_distance},
                                {"motion_direction", {d.motion_direction.x(), d.motion_direction.y()}}});
    }
    j["target"] = {{"primitive", primitive_to_json(scene.target.primitive)},
                   {"graspable_axis",
                    {scene.target.graspable_axis.x(), scene.target.graspable_axis.y(),
                     scene.target.graspable_axis.z()}}};
    return j.dump(2);
}

Scene scene_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Scene scene;
    for (const auto& jp : j.at("primitives")) scene.statics.push_back(primitive_from_json(jp));
    if (j.contains("dynamic")) {
        for (const auto& jd : j.at("dynamic")) {
            DynamicObstacle d;
            d.primitive = primitive_from_json(jd.at("primitive"));
            d.trigger_distance = jd.at("trigger_distance").get<double>();
            if (jd.contains("motion_direction")) {
                d.motion_direction = Vec2(jd.at("motion_direction").at(0).get<double>(),
                                          jd.at("motion_direction").at(1).get<double>());
            }
            scene.dynamics.push_back(d);
        }
    }
    scene.target.primitive = primitive_from_json(j.at("target").at("primitive"));
    if (j.at("target").contains("graspable_axis")) {
        const auto& a = j.at("target").at("graspable_axis");
        scene.target.graspable_axis =
            Vec3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
    }
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scene file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scene_from_json_string(text);
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scene file: " + path);
    out << scene_to_json_string(scene) << "\n";
}

}  // namespace viamg
