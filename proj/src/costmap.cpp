#include "viamg/costmap.hpp"

#include <queue>

namespace viamg {

static Costmap2D make_grid(const Rect2& bounds, double resolution) {
    Costmap2D g;
    g.resolution = resolution;
    g.origin = bounds.min;
    g.nx = (int)std::floor((bounds.max.x() - bounds.min.x()) / resolution) + 1;
    g.ny = (int)std::floor((bounds.max.y() - bounds.min.y()) / resolution) + 1;
    g.occupied.assign((size_t)g.nx * g.ny, 0);
    return g;
}

Costmap2D occupancy_from_points(const std::vector<Vec3>& points, const Rect2& bounds,
                                double resolution, double z_min, double z_max) {
    Costmap2D g = make_grid(bounds, resolution);
    for (const auto& p : points) {
        if (p.z() < z_min || p.z() > z_max) continue;
        GridIndex c = g.world_to_cell(p.head<2>());
        if (g.in_bounds(c)) g.occupied[g.idx(c.x, c.y)] = 1;
    }
    return g;
}

// 1D squared distance transform (Felzenszwalb-Huttenlocher lower envelope)
static void edt_1d(const std::vector<float>& f, std::vector<float>& d, int n,
                   std::vector<int>& v, std::vector<float>& z) {
    const float inf = std::numeric_limits<float>::max();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        float s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0f * (q - v[k]));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        float dq = (float)(q - v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

std::vector<float> distance_transform(const std::vector<uint8_t>& occupied, int nx, int ny) {
    const float inf = 1e20f;
    std::vector<float> sq((size_t)nx * ny);
    for (size_t i = 0; i < sq.size(); ++i) sq[i] = occupied[i] ? 0.0f : inf;

    std::vector<float> col(ny), col_out(ny), row(nx), row_out(nx);
    std::vector<int> v(std::max(nx, ny) + 1);
    std::vector<float> z(std::max(nx, ny) + 2);

    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < ny; ++y) col[y] = sq[(size_t)y * nx + x];
        edt_1d(col, col_out, ny, v, z);
        for (int y = 0; y < ny; ++y) sq[(size_t)y * nx + x] = col_out[y];
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) row[x] = sq[(size_t)y * nx + x];
        edt_1d(row, row_out, nx, v, z);
        for (int x = 0; x < nx; ++x) sq[(size_t)y * nx + x] = row_out[x];
    }
    return sq;
}

static void binary_closing_3x3(std::vector<uint8_t>& occ, int nx, int ny) {
    // out-of-grid cells count as free in both stages
    std::vector<uint8_t> dil((size_t)nx * ny, 0);
    auto at = [&](const std::vector<uint8_t>& g, int x, int y) -> uint8_t {
        if (x < 0 || x >= nx || y < 0 || y >= ny) return 0;
        return g[(size_t)y * nx + x];
    };
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            uint8_t any = 0;
            for (int dy = -1; dy <= 1 && !any; ++dy) {
                for (int dx = -1; dx <= 1 && !any; ++dx) any = at(occ, x + dx, y + dy);
            }
            dil[(size_t)y * nx + x] = any;
        }
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            uint8_t all = 1;
            for (int dy = -1; dy <= 1 && all; ++dy) {
                for (int dx = -1; dx <= 1 && all; ++dx) all = at(dil, x + dx, y + dy);
            }
            occ[(size_t)y * nx + x] = all;
        }
    }
}

static void mark_largest_free_component(Costmap2D& g) {
    g.navigable.assign(g.occupied.size(), 0);
    std::vector<int32_t> comp(g.occupied.size(), -1);
    int32_t n_comp = 0;
    size_t best_size = 0;
    int32_t best = -1;
    std::vector<GridIndex> stack;
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            size_t i = g.idx(x, y);
            if (g.occupied[i] || comp[i] >= 0) continue;
            size_t count = 0;
            stack.push_back({x, y});
            comp[i] = n_comp;
            while (!stack.empty()) {
                GridIndex c = stack.back();
                stack.pop_back();
                ++count;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        GridIndex nb{c.x + dx, c.y + dy};
                        if (!g.in_bounds(nb)) continue;
                        size_t ni = g.idx(nb.x, nb.y);
                        if (g.occupied[ni] || comp[ni] >= 0) continue;
                        comp[ni] = n_comp;
                        stack.push_back(nb);
                    }
                }
            }
            if (count > best_size) {
                best_size = count;
                best = n_comp;
            }
            ++n_comp;
        }
    }
    for (size_t i = 0; i < comp.size(); ++i) g.navigable[i] = (comp[i] == best) ? 1 : 0;
}

Costmap2D build_costmap(const std::vector<Vec3>& points, const Rect2& bounds,
                        const CostmapParams& params) {
    Costmap2D g =
        occupancy_from_points(points, bounds, params.resolution, params.z_min, params.z_max);
    g.d_max = params.d_max;
    binary_closing_3x3(g.occupied, g.nx, g.ny);
    mark_largest_free_component(g);

    auto sq = distance_transform(g.occupied, g.nx, g.ny);
    g.dist.resize(sq.size());
    g.cost.resize(sq.size());
    for (size_t i = 0; i < sq.size(); ++i) {
        double d = g.occupied[i] ? 0.0 : std::sqrt((double)sq[i]) * g.resolution;
        g.dist[i] = d;
        g.cost[i] = std::exp(-d / g.d_max);
    }
    return g;
}

void inflate_occupancy(Costmap2D& g, double radius) {
    auto sq = distance_transform(g.occupied, g.nx, g.ny);
    const double r_cells = radius / g.resolution;
    const double r2 = r_cells * r_cells;
    for (size_t i = 0; i < sq.size(); ++i) {
        if ((double)sq[i] <= r2) g.occupied[i] = 1;
    }
}

std::optional<double> grid_shortest_path(const Costmap2D& g, const GridIndex& start,
                                         const std::vector<GridIndex>& goals) {
    if (!g.in_bounds(start) || g.occupied[g.idx(start.x, start.y)]) return std::nullopt;
    std::vector<uint8_t> is_goal(g.occupied.size(), 0);
    bool any_goal = false;
    for (const auto& c : goals) {
        if (g.in_bounds(c) && !g.occupied[g.idx(c.x, c.y)]) {
            is_goal[g.idx(c.x, c.y)] = 1;
            any_goal = true;
        }
    }
    if (!any_goal) return std::nullopt;
    if (is_goal[g.idx(start.x, start.y)]) return 0.0;

    const double diag = std::sqrt(2.0);
    std::vector<double> dist(g.occupied.size(), std::numeric_limits<double>::max());
    using QE = std::pair<double, size_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> open;
    dist[g.idx(start.x, start.y)] = 0.0;
    open.push({0.0, g.idx(start.x, start.y)});
    while (!open.empty()) {
        auto [d, i] = open.top();
        open.pop();
        if (d > dist[i]) continue;
        if (is_goal[i]) return d * g.resolution;
        int x = (int)(i % g.nx), y = (int)(i / g.nx);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                GridIndex nb{x + dx, y + dy};
                if (!g.in_bounds(nb)) continue;
                size_t ni = g.idx(nb.x, nb.y);
                if (g.occupied[ni]) continue;
                double nd = d + ((dx != 0 && dy != 0) ? diag : 1.0);
                if (nd < dist[ni]) {
                    dist[ni] = nd;
                    open.push({nd, ni});
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<double> grid_shortest_path_to_region(const Costmap2D& g, const Vec2& start_xy,
                                                   const Vec2& goal_xy, double goal_radius) {
    GridIndex start = g.world_to_cell(start_xy);
    std::vector<GridIndex> goals;
    GridIndex gc = g.world_to_cell(goal_xy);
    int r_cells = (int)std::ceil(goal_radius / g.resolution);
    for (int dy = -r_cells; dy <= r_cells; ++dy) {
        for (int dx = -r_cells; dx <= r_cells; ++dx) {
            GridIndex c{gc.x + dx, gc.y + dy};
            if (!g.in_bounds(c)) continue;
            if ((g.cell_to_world(c) - goal_xy).norm() <= goal_radius) goals.push_back(c);
        }
    }
    return grid_shortest_path(g, start, goals);
}

}  // namespace viamg
