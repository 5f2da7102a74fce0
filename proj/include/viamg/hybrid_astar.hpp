#pragma once

#include <optional>
#include <vector>

#include "viamg/costmap.hpp"
#include "viamg/reeds_shepp.hpp"

namespace viamg {

/// One constant-curvature piece of a base path (arc, pivot-arc, or straight),
/// gear-tagged. Pivots are arcs at the minimum turning radius.
struct BaseSegment {
    Se2 start;
    RsSegmentType type = RsSegmentType::Straight;
    int gear = 1;
    double length = 0.0;  // arc length in meters, >= 0
    double radius = 1.0;
};

/// Pose at arc position s in [0, length] along the segment.
Se2 eval_segment(const BaseSegment& seg, double s);

/// Piecewise constant-curvature base path with exact evaluation.
struct BasePath {
    std::vector<BaseSegment> segments;

    double total_length() const;
    Se2 start() const { return segments.empty() ? Se2{} : segments.front().start; }
    Se2 end() const;
    Se2 eval(double s) const;

    /// Cumulative arc lengths of segment boundaries (including 0 and total).
    std::vector<double> boundaries() const;

    void append_rs(const Se2& q0, const RsPath& path, double radius);
    void append(const BaseSegment& seg);
};

struct HybridAstarParams {
    double xy_bin = 0.1;
    int theta_bins = 16;
    double step = 0.15;            // straight primitive length
    double pivot_angle = M_PI / 8;  // pivot primitive arc angle
    double turning_radius = 0.01;
    int max_expansions = 20000;
    int rs_shot_period = 6;
    double collision_step = 0.05;
};

/// Hybrid A* over (x, y, theta) with straight/pivot primitives and periodic
/// analytic Reeds-Shepp expansion toward the goal. The occupancy grid must
/// already be inflated by the footprint radius; a pose is free when its cell
/// is free. Cells within unstick_radius of the start are treated as free.
std::optional<BasePath> hybrid_astar(const Costmap2D& inflated, const Se2& start, const Se2& goal,
                                     const HybridAstarParams& params = {},
                                     double unstick_radius = 0.1);

}  // namespace viamg
