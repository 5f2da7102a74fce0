#include "viamg/hybrid_astar.hpp"

#include <queue>
#include <unordered_map>

namespace viamg {

Se2 eval_segment(const BaseSegment& seg, double s) {
    s = std::clamp(s, 0.0, seg.length);
    double phi = seg.start.theta;
    double v = seg.gear * s / (seg.type == RsSegmentType::Straight ? 1.0 : seg.radius);
    Se2 out = seg.start;
    switch (seg.type) {
        case RsSegmentType::Straight:
            out.x += v * std::cos(phi);
            out.y += v * std::sin(phi);
            break;
        case RsSegmentType::Left:
            out.x += seg.radius * (std::sin(phi + v) - std::sin(phi));
            out.y += seg.radius * (-std::cos(phi + v) + std::cos(phi));
            out.theta = wrap_angle(phi + v);
            break;
        case RsSegmentType::Right:
            out.x += seg.radius * (-std::sin(phi - v) + std::sin(phi));
            out.y += seg.radius * (std::cos(phi - v) - std::cos(phi));
            out.theta = wrap_angle(phi - v);
            break;
        case RsSegmentType::None: break;
    }
    return out;
}

double BasePath::total_length() const {
    double t = 0;
    for (const auto& s : segments) t += s.length;
    return t;
}

Se2 BasePath::end() const {
    if (segments.empty()) return Se2{};
    return eval_segment(segments.back(), segments.back().length);
}

Se2 BasePath::eval(double s) const {
    if (segments.empty()) return Se2{};
    double acc = 0.0;
    for (const auto& seg : segments) {
        if (s <= acc + seg.length) return eval_segment(seg, s - acc);
        acc += seg.length;
    }
    return end();
}

std::vector<double> BasePath::boundaries() const {
    std::vector<double> b = {0.0};
    double acc = 0.0;
    for (const auto& seg : segments) {
        acc += seg.length;
        b.push_back(acc);
    }
    return b;
}

void BasePath::append(const BaseSegment& seg) {
    if (seg.length > 1e-12) segments.push_back(seg);
}

void BasePath::append_rs(const Se2& q0, const RsPath& path, double radius) {
    Se2 cur = q0;
    for (int i = 0; i < 5; ++i) {
        if (path.types[i] == RsSegmentType::None) break;
        double norm_len = std::abs(path.lengths[i]);
        if (norm_len < 1e-12) continue;
        BaseSegment seg;
        seg.start = cur;
        seg.type = path.types[i];
        seg.gear = path.lengths[i] >= 0 ? 1 : -1;
        seg.radius = radius;
        seg.length = (path.types[i] == RsSegmentType::Straight ? norm_len : norm_len * radius);
        cur = eval_segment(seg, seg.length);
        append(seg);
    }
}

namespace {

struct Node {
    Se2 pose;
    double g = 0.0;
    int parent = -1;
    int8_t prim = -1;  // primitive from the parent
};

uint64_t state_key(const Se2& p, const Costmap2D& grid, const HybridAstarParams& params) {
    int xi = (int)std::floor((p.x - grid.origin.x()) / params.xy_bin);
    int yi = (int)std::floor((p.y - grid.origin.y()) / params.xy_bin);
    int ti = (int)std::floor((p.theta + M_PI) / (2 * M_PI) * params.theta_bins);
    ti = std::clamp(ti, 0, params.theta_bins - 1);
    return ((uint64_t)(uint32_t)xi << 40) ^ ((uint64_t)(uint32_t)yi << 16) ^ (uint64_t)ti;
}

}  // namespace

std::optional<BasePath> hybrid_astar(const Costmap2D& grid, const Se2& start, const Se2& goal,
                                     const HybridAstarParams& params, double unstick_radius) {
    auto cell_free = [&](double x, double y) {
        GridIndex c = grid.world_to_cell(Vec2(x, y));
        if (!grid.in_bounds(c)) return false;
        return grid.occupied[grid.idx(c.x, c.y)] == 0;
    };
    auto pose_free = [&](const Se2& p) {
        if (cell_free(p.x, p.y)) return true;
        return std::hypot(p.x - start.x, p.y - start.y) <= unstick_radius;
    };
    auto segment_free = [&](const BaseSegment& seg) {
        int n = std::max(1, (int)std::ceil(seg.length / params.collision_step));
        for (int k = 1; k <= n; ++k) {
            if (!pose_free(eval_segment(seg, seg.length * k / n))) return false;
        }
        return true;
    };
    auto rs_shot = [&](const Se2& from) -> std::optional<RsPath> {
        RsPath path = rs_shortest(from, goal, params.turning_radius);
        double total = path.total() * params.turning_radius;
        int n = std::max(1, (int)std::ceil(total / params.collision_step));
        for (int k = 1; k <= n; ++k) {
            if (!pose_free(rs_interpolate(from, path, params.turning_radius, total * k / n))) {
                return std::nullopt;
            }
        }
        return path;
    };

    if (!pose_free(start)) return std::nullopt;
    if (!cell_free(goal.x, goal.y)) return std::nullopt;

    // holonomic distance-to-goal field over free cells (8-connected)
    std::vector<double> h2d(grid.occupied.size(), std::numeric_limits<double>::max());
    {
        using QE = std::pair<double, size_t>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> open;
        GridIndex gc = grid.world_to_cell(Vec2(goal.x, goal.y));
        h2d[grid.idx(gc.x, gc.y)] = 0.0;
        open.push({0.0, grid.idx(gc.x, gc.y)});
        const double diag = std::sqrt(2.0);
        while (!open.empty()) {
            auto [d, i] = open.top();
            open.pop();
            if (d > h2d[i]) continue;
            int x = (int)(i % grid.nx), y = (int)(i / grid.nx);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    GridIndex nb{x + dx, y + dy};
                    if (!grid.in_bounds(nb)) continue;
                    size_t ni = grid.idx(nb.x, nb.y);
                    if (grid.occupied[ni]) continue;
                    double nd = d + ((dx && dy) ? diag : 1.0);
                    if (nd < h2d[ni]) {
                        h2d[ni] = nd;
                        open.push({nd, ni});
                    }
                }
            }
        }
        for (auto& v : h2d) {
            if (v < std::numeric_limits<double>::max()) v *= grid.resolution;
        }
    }
    auto heuristic = [&](const Se2& p) {
        double h = rs_length(p, goal, params.turning_radius);
        GridIndex c = grid.world_to_cell(Vec2(p.x, p.y));
        if (grid.in_bounds(c) && h2d[grid.idx(c.x, c.y)] < std::numeric_limits<double>::max()) {
            h = std::max(h, h2d[grid.idx(c.x, c.y)]);
        }
        return h;
    };

    // primitives: straight fwd/back, pivot left/right (tiny arcs)
    const double pivot_len = params.turning_radius * params.pivot_angle;
    auto make_prim = [&](const Se2& from, int prim) -> BaseSegment {
        BaseSegment seg;
        seg.start = from;
        seg.radius = params.turning_radius;
        switch (prim) {
            case 0: seg.type = RsSegmentType::Straight; seg.gear = 1; seg.length = params.step; break;
            case 1: seg.type = RsSegmentType::Straight; seg.gear = -1; seg.length = params.step; break;
            case 2: seg.type = RsSegmentType::Left; seg.gear = 1; seg.length = pivot_len; break;
            case 3: seg.type = RsSegmentType::Right; seg.gear = 1; seg.length = pivot_len; break;
        }
        return seg;
    };

    std::vector<Node> nodes;
    nodes.push_back({start, 0.0, -1, -1});
    using QE = std::tuple<double, uint64_t, int>;  // (f, tie sequence, node index)
    std::priority_queue<QE, std::vector<QE>, std::greater<>> open;
    std::unordered_map<uint64_t, double> best_g;
    uint64_t seq = 0;
    open.push({heuristic(start), seq++, 0});
    best_g[state_key(start, grid, params)] = 0.0;

    int expansions = 0;
    while (!open.empty() && expansions < params.max_expansions) {
        auto [f, tie, idx] = open.top();
        open.pop();
        Node node = nodes[idx];
        auto it = best_g.find(state_key(node.pose, grid, params));
        if (it != best_g.end() && node.g > it->second + 1e-12) continue;
        ++expansions;

        bool near_goal = std::hypot(node.pose.x - goal.x, node.pose.y - goal.y) < 0.4;
        if (near_goal || expansions % params.rs_shot_period == 0) {
            if (auto shot = rs_shot(node.pose)) {
                // reconstruct lattice chain, then the analytic tail
                std::vector<int> chain;
                for (int cur = idx; cur >= 0; cur = nodes[cur].parent) chain.push_back(cur);
                BasePath path;
                for (auto rit = chain.rbegin(); rit != chain.rend(); ++rit) {
                    const Node& n = nodes[*rit];
                    if (n.prim >= 0) path.append(make_prim(nodes[n.parent].pose, n.prim));
                }
                path.append_rs(node.pose, *shot, params.turning_radius);
                if (path.segments.empty()) {
                    // start == goal: a degenerate single-pose path
                    BaseSegment seg;
                    seg.start = start;
                    seg.type = RsSegmentType::Straight;
                    seg.length = 0.0;
                    path.segments.push_back(seg);
                }
                return path;
            }
        }

        for (int prim = 0; prim < 4; ++prim) {
            BaseSegment seg = make_prim(node.pose, prim);
            if (!segment_free(seg)) continue;
            Se2 next = eval_segment(seg, seg.length);
            double g = node.g + seg.length;
            uint64_t key = state_key(next, grid, params);
            auto bit = best_g.find(key);
            if (bit != best_g.end() && bit->second <= g + 1e-12) continue;
            best_g[key] = g;
            nodes.push_back({next, g, idx, (int8_t)prim});
            open.push({g + heuristic(next), seq++, (int)nodes.size() - 1});
        }
    }
    return std::nullopt;
}

}  // namespace viamg
