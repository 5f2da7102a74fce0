#pragma once

#include <array>
#include <vector>

#include "viamg/geometry.hpp"

namespace viamg {

struct Se2 {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

enum class RsSegmentType : uint8_t { None, Left, Straight, Right };

/// Reeds-Shepp word: up to five segments with signed normalized lengths
/// (negative = reverse gear).
struct RsPath {
    std::array<RsSegmentType, 5> types{RsSegmentType::None, RsSegmentType::None,
                                       RsSegmentType::None, RsSegmentType::None,
                                       RsSegmentType::None};
    std::array<double, 5> lengths{0, 0, 0, 0, 0};

    double total() const {
        double t = 0;
        for (double l : lengths) t += std::abs(l);
        return t;
    }
};

/// Shortest Reeds-Shepp word between two planar poses (normalized lengths).
RsPath rs_shortest(const Se2& q0, const Se2& q1, double radius);

/// Shortest path length in meters.
double rs_length(const Se2& q0, const Se2& q1, double radius);

/// Pose at arc length s (meters) along the path from q0.
Se2 rs_interpolate(const Se2& q0, const RsPath& path, double radius, double s);

struct RsSample {
    Se2 pose;
    int gear = 1;  // +1 forward, -1 reverse
};

/// Samples the path at the given arc-length step, both endpoints included,
/// each sample tagged with its segment's gear.
std::vector<RsSample> rs_sample(const Se2& q0, const RsPath& path, double radius, double step);

/// One-call convenience: (samples, length in meters).
std::pair<std::vector<RsSample>, double> reeds_shepp(const Se2& q0, const Se2& q1, double radius,
                                                     double step);

}  // namespace viamg
