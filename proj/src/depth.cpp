#include "viamg/depth.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace viamg {

DepthImage render_depth(const std::vector<Primitive>& primitives, const Pose3& camera_pose,
                        const CameraModel& camera) {
    DepthImage img(camera.width, camera.height);
    const Vec3 origin = camera_pose.translation();
    const Mat3 rot = camera_pose.linear();
    for (int v = 0; v < camera.height; ++v) {
        for (int u = 0; u < camera.width; ++u) {
            // with dir_z = 1 in camera frame, the ray parameter equals z-depth
            Vec3 dir = rot * camera.pixel_ray(u, v);
            double best = std::numeric_limits<double>::max();
            for (const auto& prim : primitives) {
                auto t = ray_primitive(origin, dir, prim);
                if (t && *t < best) best = *t;
            }
            if (best < std::numeric_limits<double>::max() && camera.depth_valid(best)) {
                img.at(u, v) = (float)best;
            }
        }
    }
    return img;
}

namespace {
constexpr char kMagic[4] = {'V', 'D', 'M', 'G'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4] = {(unsigned char)(v & 0xff), (unsigned char)((v >> 8) & 0xff),
                          (unsigned char)((v >> 16) & 0xff), (unsigned char)((v >> 24) & 0xff)};
    out.write((const char*)b, 4);
}

uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read((char*)b, 4);
    return (uint32_t)b[0] | ((uint32_t)b[1] << 8) | ((uint32_t)b[2] << 16) |
           ((uint32_t)b[3] << 24);
}
}  // namespace

void save_depth(const DepthImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write depth file: " + path);
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, (uint32_t)img.width);
    write_u32(out, (uint32_t)img.height);
    static_assert(sizeof(float) == 4);
    out.write((const char*)img.data.data(), (std::streamsize)(img.data.size() * 4));
}

DepthImage load_depth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open depth file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("bad depth file magic");
    uint32_t version = read_u32(in);
    if (version != kVersion) throw std::runtime_error("unsupported depth file version");
    uint32_t w = read_u32(in), h = read_u32(in);
    DepthImage img((int)w, (int)h);
    in.read((char*)img.data.data(), (std::streamsize)(img.data.size() * 4));
    if (!in) throw std::runtime_error("truncated depth file");
    return img;
}

}  // namespace viamg
