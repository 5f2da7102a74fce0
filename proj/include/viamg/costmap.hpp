#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "viamg/geometry.hpp"

namespace viamg {

struct GridIndex {
    int x = 0;
    int y = 0;
    bool operator==(const GridIndex& o) const { return x == o.x && y == o.y; }
};

/// 2D occupancy grid with a Euclidean distance field and exponential-decay
/// cost field c = exp(-d / d_max); c is exactly 1 on obstacle cells.
struct Costmap2D {
    Vec2 origin = Vec2::Zero();  // world position of cell (0,0) center
    double resolution = 0.05;
    int nx = 0, ny = 0;
    double d_max = 2.0;
    std::vector<uint8_t> occupied;
    std::vector<uint8_t> navigable;  // largest connected free component
    std::vector<double> dist;        // meters from nearest obstacle cell center
    std::vector<double> cost;

    size_t idx(int x, int y) const { return (size_t)y * nx + x; }
    bool in_bounds(const GridIndex& c) const { return c.x >= 0 && c.x < nx && c.y >= 0 && c.y < ny; }
    GridIndex world_to_cell(const Vec2& p) const {
        return {(int)std::lround((p.x() - origin.x()) / resolution),
                (int)std::lround((p.y() - origin.y()) / resolution)};
    }
    Vec2 cell_to_world(const GridIndex& c) const {
        return origin + Vec2(c.x * resolution, c.y * resolution);
    }
};

struct CostmapParams {
    double resolution = 0.05;
    double z_min = 0.05;  // obstacle height band
    double z_max = 1.5;
    double d_max = 2.0;
};

/// Builds the costmap from map points over the given world bounds:
/// height filter, XY projection, rasterize, 3x3 binary closing (cells outside
/// the grid count as free), largest free component, distance transform,
/// exponential cost.
Costmap2D build_costmap(const std::vector<Vec3>& points, const Rect2& bounds,
                        const CostmapParams& params = {});

/// Plain occupancy grid (no closing) from points in a height band.
Costmap2D occupancy_from_points(const std::vector<Vec3>& points, const Rect2& bounds,
                                double resolution, double z_min, double z_max);

/// Marks every cell within radius of an occupied cell as occupied.
void inflate_occupancy(Costmap2D& grid, double radius);

/// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher),
/// distances between cell centers in cell units.
std::vector<float> distance_transform(const std::vector<uint8_t>& occupied, int nx, int ny);

/// Shortest 8-connected path length in meters (diagonal steps cost sqrt(2) *
/// resolution) from start to any goal cell, over free cells of the grid.
/// Returns nullopt when no goal cell is reachable.
std::optional<double> grid_shortest_path(const Costmap2D& grid, const GridIndex& start,
                                         const std::vector<GridIndex>& goals);

/// Convenience: goal region = free cells within goal_radius of goal_xy.
std::optional<double> grid_shortest_path_to_region(const Costmap2D& grid, const Vec2& start_xy,
                                                   const Vec2& goal_xy, double goal_radius);

}  // namespace viamg
