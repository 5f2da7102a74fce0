#include "viamg/kinematic_maps.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace viamg {

std::optional<uint64_t> PoseGrid::key_of(const Pose3& pose) const {
    const Vec3& t = pose.translation();
    if (t.x() < -xy_extent || t.x() >= xy_extent) return std::nullopt;
    if (t.y() < -xy_extent || t.y() >= xy_extent) return std::nullopt;
    if (t.z() < z_min || t.z() >= z_max) return std::nullopt;
    int ix = (int)std::floor((t.x() + xy_extent) / pos_res);
    int iy = (int)std::floor((t.y() + xy_extent) / pos_res);
    int iz = (int)std::floor((t.z() - z_min) / pos_res);
    ix = std::min(ix, nx() - 1);
    iy = std::min(iy, nx() - 1);
    iz = std::min(iz, nz() - 1);

    const Mat3& r = pose.linear();
    // intrinsic yaw-pitch-roll (ZYX) decomposition
    double yaw = std::atan2(r(1, 0), r(0, 0));
    double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
    double roll = std::atan2(r(2, 1), r(2, 2));
    int iyaw = std::min((int)std::floor((yaw + M_PI) / ori_res), n_yaw() - 1);
    int ipitch = std::min((int)std::floor((pitch + M_PI / 2) / ori_res), n_pitch() - 1);
    int iroll = std::min((int)std::floor((roll + M_PI) / ori_res), n_roll() - 1);
    iyaw = std::max(iyaw, 0);
    ipitch = std::max(ipitch, 0);
    iroll = std::max(iroll, 0);

    uint64_t key = (uint64_t)ix;
    key = key * (uint64_t)nx() + (uint64_t)iy;
    key = key * (uint64_t)nz() + (uint64_t)iz;
    key = key * (uint64_t)n_yaw() + (uint64_t)iyaw;
    key = key * (uint64_t)n_pitch() + (uint64_t)ipitch;
    key = key * (uint64_t)n_roll() + (uint64_t)iroll;
    return key;
}

Vec3 PoseGrid::position_center_of(uint64_t key) const {
    uint64_t k = key;
    k /= (uint64_t)n_roll();
    k /= (uint64_t)n_pitch();
    k /= (uint64_t)n_yaw();
    int iz = (int)(k % (uint64_t)nz());
    k /= (uint64_t)nz();
    int iy = (int)(k % (uint64_t)nx());
    int ix = (int)(k / (uint64_t)nx());
    return Vec3(-xy_extent + (ix + 0.5) * pos_res, -xy_extent + (iy + 0.5) * pos_res,
                z_min + (iz + 0.5) * pos_res);
}

Configuration sample_torso_arm(const RobotModel& model, Rng& rng) {
    Configuration q;
    q.torso_h = rng.uniform(model.torso_min, model.torso_max);
    for (int i = 0; i < kArmDof; ++i) {
        q.arm[i] = rng.uniform(model.joints[i].lower, model.joints[i].upper);
    }
    return q;
}

ReachabilityMap build_reachability(const RobotModel& model, uint64_t n_samples, uint64_t seed,
                                   PoseGrid grid) {
    ReachabilityMap map;
    map.grid = grid;
    map.samples_used = n_samples;
    Rng rng(seed);
    for (uint64_t k = 0; k < n_samples; ++k) {
        Configuration q = sample_torso_arm(model, rng);
        Pose3 ee = ee_pose(model, q);  // base at origin: pose is in the base frame
        if (ee.translation().z() < 0.0) continue;  // below the ground plane
        auto key = map.grid.key_of(ee);
        if (!key) continue;
        auto& entry = map.voxels[*key];
        entry.count += 1;
        float m = (float)manipulability(model, q);
        entry.max_manipulability = std::max(entry.max_manipulability, m);
    }
    return map;
}

CapabilityMap CapabilityMap::from_reachability(const ReachabilityMap& reach) {
    CapabilityMap cap;
    cap.grid = reach.grid;
    cap.reachable_voxels.reserve(reach.voxels.size());
    for (const auto& [key, entry] : reach.voxels) {
        if (entry.count > 0) cap.reachable_voxels.insert(key);
    }
    return cap;
}

std::optional<size_t> TorsoHeightMap::bin_of(const Vec3& p) const {
    if (p.x() < -xy_extent || p.x() >= xy_extent) return std::nullopt;
    if (p.y() < -xy_extent || p.y() >= xy_extent) return std::nullopt;
    if (p.z() < z_min || p.z() >= z_max) return std::nullopt;
    int ix = std::min((int)std::floor((p.x() + xy_extent) / pos_res), nx() - 1);
    int iy = std::min((int)std::floor((p.y() + xy_extent) / pos_res), nx() - 1);
    int iz = std::min((int)std::floor((p.z() - z_min) / pos_res), nz() - 1);
    return ((size_t)ix * nx() + iy) * nz() + iz;
}

std::optional<double> TorsoHeightMap::query(const Vec3& p) const {
    auto bin = bin_of(p);
    if (!bin || best_bin.empty()) return std::nullopt;
    int8_t b = best_bin[*bin];
    if (b < 0) return std::nullopt;
    return torso_min + (b + 0.5) * torso_bin;
}

TorsoHeightMap build_torso_map(const RobotModel& model, uint64_t n_samples, uint64_t seed,
                               TorsoHeightMap proto) {
    TorsoHeightMap map = proto;
    map.torso_min = model.torso_min;
    map.torso_max = model.torso_max;
    map.samples_used = n_samples;
    const size_t n_bins = (size_t)map.nx() * map.nx() * map.nz();
    const int nh = map.n_torso();
    std::vector<uint32_t> counts(n_bins * nh, 0);

    Rng rng(seed);
    for (uint64_t k = 0; k < n_samples; ++k) {
        Configuration q = sample_torso_arm(model, rng);
        Vec3 p = ee_pose(model, q).translation();
        auto bin = map.bin_of(p);
        if (!bin) continue;
        int ih = std::min((int)std::floor((q.torso_h - map.torso_min) / map.torso_bin), nh - 1);
        counts[*bin * nh + ih] += 1;
    }

    map.best_bin.assign(n_bins, -1);
    for (size_t b = 0; b < n_bins; ++b) {
        uint32_t best_count = 0;
        int best = -1;
        for (int ih = 0; ih < nh; ++ih) {
            uint32_t c = counts[b * nh + ih];
            if (c > best_count) {  // strict: ties keep the lower height
                best_count = c;
                best = ih;
            }
        }
        map.best_bin[b] = (int8_t)best;
    }
    return map;
}

// ---------------------------------------------------------------------------
// VKMP binary cache

namespace {

constexpr char kMagic[4] = {'V', 'K', 'M', 'P'};
constexpr uint32_t kVersion = 1;

template <class T>
void write_pod(std::ostream& out, const T& v) {
    out.write((const char*)&v, sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
    T v;
    in.read((char*)&v, sizeof(T));
    return v;
}

void write_header(std::ostream& out, char kind) {
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, kind);
}

char read_header(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("bad kinematic map magic");
    if (read_pod<uint32_t>(in) != kVersion) throw std::runtime_error("bad kinematic map version");
    return read_pod<char>(in);
}

}  // namespace

void save_reachability(const ReachabilityMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write map file: " + path);
    write_header(out, 'R');
    write_pod(out, map.grid.pos_res);
    write_pod(out, map.grid.ori_res);
    write_pod(out, map.grid.xy_extent);
    write_pod(out, map.grid.z_min);
    write_pod(out, map.grid.z_max);
    write_pod(out, map.samples_used);
    std::vector<std::pair<uint64_t, ReachEntry>> entries(map.voxels.begin(), map.voxels.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    write_pod(out, (uint64_t)entries.size());
    for (const auto& [key, e] : entries) {
        write_pod(out, key);
        write_pod(out, e.count);
        write_pod(out, e.max_manipulability);
    }
}

ReachabilityMap load_reachability(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    if (read_header(in) != 'R') throw std::runtime_error("not a reachability map: " + path);
    ReachabilityMap map;
    map.grid.pos_res = read_pod<double>(in);
    map.grid.ori_res = read_pod<double>(in);
    map.grid.xy_extent = read_pod<double>(in);
    map.grid.z_min = read_pod<double>(in);
    map.grid.z_max = read_pod<double>(in);
    map.samples_used = read_pod<uint64_t>(in);
    uint64_t n = read_pod<uint64_t>(in);
    map.voxels.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t key = read_pod<uint64_t>(in);
        ReachEntry e;
        e.count = read_pod<uint32_t>(in);
        e.max_manipulability = read_pod<float>(in);
        map.voxels.emplace(key, e);
    }
    if (!in) throw std::runtime_error("truncated map file: " + path);
    return map;
}

void save_torso_map(const TorsoHeightMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write map file: " + path);
    write_header(out, 'T');
    write_pod(out, map.pos_res);
    write_pod(out, map.torso_bin);
    write_pod(out, map.xy_extent);
    write_pod(out, map.z_min);
    write_pod(out, map.z_max);
    write_pod(out, map.torso_min);
    write_pod(out, map.torso_max);
    write_pod(out, map.samples_used);
    write_pod(out, (uint64_t)map.best_bin.size());
    out.write((const char*)map.best_bin.data(), (std::streamsize)map.best_bin.size());
}

TorsoHeightMap load_torso_map(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    if (read_header(in) != 'T') throw std::runtime_error("not a torso map: " + path);
    TorsoHeightMap map;
    map.pos_res = read_pod<double>(in);
    map.torso_bin = read_pod<double>(in);
    map.xy_extent = read_pod<double>(in);
    map.z_min = read_pod<double>(in);
    map.z_max = read_pod<double>(in);
    map.torso_min = read_pod<double>(in);
    map.torso_max = read_pod<double>(in);
    map.samples_used = read_pod<uint64_t>(in);
    uint64_t n = read_pod<uint64_t>(in);
    map.best_bin.resize(n);
    in.read((char*)map.best_bin.data(), (std::streamsize)n);
    if (!in) throw std::runtime_error("truncated map file: " + path);
    return map;
}

KinematicMaps build_kinematic_maps(const RobotModel& model, const KinematicMapsParams& params,
                                   const std::string& cache_dir) {
    namespace fs = std::filesystem;
    KinematicMaps maps;
    std::string reach_path, torso_path;
    if (!cache_dir.empty()) {
        fs::create_directories(cache_dir);
        std::string tag = model.name + "_s" + std::to_string(params.seed) + "_n" +
                          std::to_string(params.reachability_samples);
        reach_path = (fs::path(cache_dir) / ("reachability_" + tag + ".vkmp")).string();
        torso_path = (fs::path(cache_dir) / ("torso_" + tag + ".vkmp")).string();
    }

    if (!reach_path.empty() && fs::exists(reach_path)) {
        maps.reach = load_reachability(reach_path);
    } else {
        maps.reach = build_reachability(model, params.reachability_samples, params.seed);
        if (!reach_path.empty()) save_reachability(maps.reach, reach_path);
    }
    if (!torso_path.empty() && fs::exists(torso_path)) {
        maps.torso = load_torso_map(torso_path);
    } else {
        maps.torso = build_torso_map(model, params.torso_samples, params.seed + 1);
        if (!torso_path.empty()) save_torso_map(maps.torso, torso_path);
    }
    maps.capability = CapabilityMap::from_reachability(maps.reach);
    return maps;
}

}  // namespace viamg
