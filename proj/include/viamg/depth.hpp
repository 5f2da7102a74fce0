#pragma once

#include <string>
#include <vector>

#include "viamg/geometry.hpp"
#include "viamg/scene.hpp"

namespace viamg {

/// Pinhole camera. Depth values are camera-frame z, not ray length.
struct CameraModel {
    int width = 640;
    int height = 480;
    double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
    double depth_min = 0.2;  // valid depth is the open interval (depth_min, depth_max)
    double depth_max = 3.0;

    static CameraModel from_fov(int width, int height, double hfov_rad) {
        CameraModel c;
        c.width = width;
        c.height = height;
        c.fx = (width / 2.0) / std::tan(hfov_rad / 2.0);
        c.fy = c.fx;
        c.cx = (width - 1) / 2.0;
        c.cy = (height - 1) / 2.0;
        return c;
    }

    double hfov() const { return 2.0 * std::atan((width / 2.0) / fx); }
    double vfov() const { return 2.0 * std::atan((height / 2.0) / fy); }

    /// Camera-frame ray direction through pixel (u, v), z component = 1.
    Vec3 pixel_ray(int u, int v) const { return Vec3((u - cx) / fx, (v - cy) / fy, 1.0); }

    /// Projects a camera-frame point; true when it lands inside the image and
    /// in front of the camera. (u, v) are nearest-pixel indices.
    bool project(const Vec3& p_cam, int& u, int& v) const {
        if (p_cam.z() <= 0.0) return false;
        double uf = fx * p_cam.x() / p_cam.z() + cx;
        double vf = fy * p_cam.y() / p_cam.z() + cy;
        u = (int)std::lround(uf);
        v = (int)std::lround(vf);
        return u >= 0 && u < width && v >= 0 && v < height;
    }

    bool depth_valid(double z) const { return z > depth_min && z < depth_max; }
};

/// Row-major depth image in meters; 0 marks invalid pixels.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    DepthImage() = default;
    DepthImage(int w, int h) : width(w), height(h), data((size_t)w * h, 0.0f) {}

    float& at(int u, int v) { return data[(size_t)v * width + u]; }
    float at(int u, int v) const { return data[(size_t)v * width + u]; }
};

/// Renders the scene's static primitives plus extra primitives (spawned
/// dynamic obstacles, the target) from the given camera pose. Per pixel the
/// nearest intersection inside the valid depth interval; 0 otherwise.
DepthImage render_depth(const std::vector<Primitive>& primitives, const Pose3& camera_pose,
                        const CameraModel& camera);

/// Binary depth image format: magic "VDMG", u32 version, u32 width, u32 height
/// (little-endian), then row-major float32 data.
void save_depth(const DepthImage& img, const std::string& path);
DepthImage load_depth(const std::string& path);

}  // namespace viamg
