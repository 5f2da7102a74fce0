#include <vector>

#include "doctest.h"
#include "viamg/reeds_shepp.hpp"

using namespace viamg;

namespace {

// lateral slip of one waypoint step under the arc-chord model: the chord of a
// unicycle arc bisects the headings, so its direction is theta0 + dtheta/2
double step_slip(const Se2& a, const Se2& b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double d = std::hypot(dx, dy);
    if (d < 1e-12) return 0.0;
    double chord = a.theta + 0.5 * wrap_angle(b.theta - a.theta);
    return d * std::abs(std::sin(std::atan2(dy, dx) - chord));
}

struct Action {
    int steer;   // -1 right, 0 straight, +1 left
    int gear;    // +1 forward, -1 reverse
    double mag;  // arc angle (turns) or length in meters (straight)
};

Se2 apply_action(const Se2& q, const Action& a, double radius) {
    Se2 out = q;
    if (a.steer == 0) {
        double d = a.gear * a.mag;
        out.x += d * std::cos(q.theta);
        out.y += d * std::sin(q.theta);
    } else {
        double v = a.gear * a.mag;  // signed arc angle progression
        double phi = q.theta;
        if (a.steer > 0) {
            out.x += radius * (std::sin(phi + v) - std::sin(phi));
            out.y += radius * (-std::cos(phi + v) + std::cos(phi));
            out.theta = wrap_angle(phi + v);
        } else {
            out.x += radius * (-std::sin(phi - v) + std::sin(phi));
            out.y += radius * (std::cos(phi - v) - std::cos(phi));
            out.theta = wrap_angle(phi - v);
        }
    }
    return out;
}

double action_length(const Action& a, double radius) {
    return a.steer == 0 ? a.mag : a.mag * radius;
}

std::vector<Action> action_set() {
    std::vector<Action> acts;
    for (int gear : {1, -1}) {
        for (double ang : {M_PI / 2, M_PI}) {
            acts.push_back({+1, gear, ang});
            acts.push_back({-1, gear, ang});
        }
        for (double len : {0.5, 1.0}) acts.push_back({0, gear, len});
    }
    return acts;
}

// exhaustive bounded-depth search for the cheapest action sequence reaching q1
double brute_force_best(const Se2& q0, const Se2& q1, double radius, int max_depth) {
    auto acts = action_set();
    double best = std::numeric_limits<double>::max();
    struct Node {
        Se2 pose;
        double len;
        int depth;
    };
    std::vector<Node> stack = {{q0, 0.0, 0}};
    while (!stack.empty()) {
        Node n = stack.back();
        stack.pop_back();
        if (std::hypot(n.pose.x - q1.x, n.pose.y - q1.y) < 1e-6 &&
            std::abs(wrap_angle(n.pose.theta - q1.theta)) < 1e-6) {
            best = std::min(best, n.len);
        }
        if (n.depth >= max_depth || n.len >= best) continue;
        for (const auto& a : acts) {
            stack.push_back({apply_action(n.pose, a, radius), n.len + action_length(a, radius),
                             n.depth + 1});
        }
    }
    return best;
}

}  // namespace

TEST_CASE("identical poses give a zero-length single-sample path") {
    Se2 q{0.4, -0.2, 1.1};
    auto [samples, length] = reeds_shepp(q, q, 1.0, 0.05);
    CHECK(length == 0.0);
    CHECK(samples.size() == 1);
    CHECK(samples[0].pose.x == q.x);
}

TEST_CASE("straight-ahead goal is a pure straight word") {
    Se2 q0{0, 0, 0}, q1{2.0, 0, 0};
    auto [samples, length] = reeds_shepp(q0, q1, 1.0, 0.05);
    CHECK(length == doctest::Approx(2.0).epsilon(1e-9));
    for (const auto& s : samples) {
        CHECK(std::abs(s.pose.y) < 1e-9);
        CHECK(std::abs(s.pose.theta) < 1e-9);
        CHECK(s.gear == 1);
    }
}

TEST_CASE("endpoints are reproduced exactly for random pose pairs") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        double radius = trial % 2 == 0 ? 1.0 : 0.01;
        Se2 q0{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-M_PI, M_PI)};
        Se2 q1{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-M_PI, M_PI)};
        RsPath path = rs_shortest(q0, q1, radius);
        Se2 end = rs_interpolate(q0, path, radius, path.total() * radius);
        CHECK(std::hypot(end.x - q1.x, end.y - q1.y) < 1e-6);
        CHECK(std::abs(wrap_angle(end.theta - q1.theta)) < 1e-6);
    }
}

TEST_CASE("sampled paths have no lateral slip and tagged gears") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        Se2 q0{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-M_PI, M_PI)};
        Se2 q1{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-M_PI, M_PI)};
        auto [samples, length] = reeds_shepp(q0, q1, 0.5, 0.05);
        (void)length;
        bool saw_reverse = false;
        for (size_t k = 0; k + 1 < samples.size(); ++k) {
            CHECK(step_slip(samples[k].pose, samples[k + 1].pose) < 1e-6);
            saw_reverse = saw_reverse || samples[k].gear == -1;
        }
        (void)saw_reverse;
        // endpoint of the sample chain is q1
        CHECK(std::hypot(samples.back().pose.x - q1.x, samples.back().pose.y - q1.y) < 1e-6);
    }
}

TEST_CASE("shortest length never beats the brute-force action search") {
    const double radius = 1.0;
    Rng rng(29);
    auto acts = action_set();
    int compared = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Se2 q0{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-M_PI, M_PI)};
        // goal generated by a short random action sequence so exact hits exist
        Se2 q1 = q0;
        int n_actions = 1 + (int)rng.uniform_int(3);
        for (int i = 0; i < n_actions; ++i) {
            q1 = apply_action(q1, acts[rng.uniform_int(acts.size())], radius);
        }
        double brute = brute_force_best(q0, q1, radius, 4);
        REQUIRE(brute < std::numeric_limits<double>::max());
        double rs = rs_length(q0, q1, radius);
        CHECK(rs <= brute + 0.05);
        ++compared;
    }
    CHECK(compared == 50);
}

TEST_CASE("reverse-only goal uses reverse gear") {
    Se2 q0{0, 0, 0}, q1{-1.0, 0, 0};
    auto [samples, length] = reeds_shepp(q0, q1, 1.0, 0.05);
    CHECK(length == doctest::Approx(1.0).epsilon(1e-9));
    for (size_t k = 0; k + 1 < samples.size(); ++k) CHECK(samples[k].gear == -1);
}
