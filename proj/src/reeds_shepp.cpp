#include "viamg/reeds_shepp.hpp"

namespace viamg {

namespace {

constexpr double kZero = 10.0 * std::numeric_limits<double>::epsilon();

using Seg = RsSegmentType;

// the 18 canonical segment-type words
constexpr Seg kWords[18][5] = {
    {Seg::Left, Seg::Right, Seg::Left, Seg::None, Seg::None},       // 0
    {Seg::Right, Seg::Left, Seg::Right, Seg::None, Seg::None},      // 1
    {Seg::Left, Seg::Right, Seg::Left, Seg::Right, Seg::None},      // 2
    {Seg::Right, Seg::Left, Seg::Right, Seg::Left, Seg::None},      // 3
    {Seg::Left, Seg::Right, Seg::Straight, Seg::Left, Seg::None},   // 4
    {Seg::Right, Seg::Left, Seg::Straight, Seg::Right, Seg::None},  // 5
    {Seg::Left, Seg::Straight, Seg::Right, Seg::Left, Seg::None},   // 6
    {Seg::Right, Seg::Straight, Seg::Left, Seg::Right, Seg::None},  // 7
    {Seg::Left, Seg::Right, Seg::Straight, Seg::Right, Seg::None},  // 8
    {Seg::Right, Seg::Left, Seg::Straight, Seg::Left, Seg::None},   // 9
    {Seg::Right, Seg::Straight, Seg::Right, Seg::Left, Seg::None},  // 10
    {Seg::Left, Seg::Straight, Seg::Left, Seg::Right, Seg::None},   // 11
    {Seg::Left, Seg::Straight, Seg::Right, Seg::None, Seg::None},   // 12
    {Seg::Right, Seg::Straight, Seg::Left, Seg::None, Seg::None},   // 13
    {Seg::Left, Seg::Straight, Seg::Left, Seg::None, Seg::None},    // 14
    {Seg::Right, Seg::Straight, Seg::Right, Seg::None, Seg::None},  // 15
    {Seg::Left, Seg::Right, Seg::Straight, Seg::Left, Seg::Right},  // 16
    {Seg::Right, Seg::Left, Seg::Straight, Seg::Right, Seg::Left},  // 17
};

double mod2pi(double x) {
    double v = std::fmod(x, 2.0 * M_PI);
    if (v < -M_PI) v += 2.0 * M_PI;
    if (v > M_PI) v -= 2.0 * M_PI;
    return v;
}

void polar(double x, double y, double& r, double& theta) {
    r = std::hypot(x, y);
    theta = std::atan2(y, x);
}

void tau_omega(double u, double v, double xi, double eta, double phi, double& tau,
               double& omega) {
    double delta = mod2pi(u - v);
    double a = std::sin(u) - std::sin(delta);
    double b = std::cos(u) - std::cos(delta) - 1.0;
    double t1 = std::atan2(eta * a - xi * b, xi * a + eta * b);
    double t2 = 2.0 * (std::cos(delta) - std::cos(v) - std::cos(u)) + 3.0;
    tau = (t2 < 0) ? mod2pi(t1 + M_PI) : mod2pi(t1);
    omega = mod2pi(tau - u + v - phi);
}

bool lp_sp_lp(double x, double y, double phi, double& t, double& u, double& v) {
    polar(x - std::sin(phi), y - 1.0 + std::cos(phi), u, t);
    if (t >= -kZero) {
        v = mod2pi(phi - t);
        if (v >= -kZero) return true;
    }
    return false;
}

bool lp_sp_rp(double x, double y, double phi, double& t, double& u, double& v) {
    double t1, u1;
    polar(x + std::sin(phi), y - 1.0 - std::cos(phi), u1, t1);
    u1 = u1 * u1;
    if (u1 < 4.0) return false;
    u = std::sqrt(u1 - 4.0);
    double theta = std::atan2(2.0, u);
    t = mod2pi(t1 + theta);
    v = mod2pi(t - phi);
    return t >= -kZero && v >= -kZero;
}

bool lp_rm_l(double x, double y, double phi, double& t, double& u, double& v) {
    double xi = x - std::sin(phi), eta = y - 1.0 + std::cos(phi);
    double u1, theta;
    polar(xi, eta, u1, theta);
    if (u1 > 4.0) return false;
    u = -2.0 * std::asin(0.25 * u1);
    t = mod2pi(theta + 0.5 * u + M_PI);
    v = mod2pi(phi - t + u);
    return t >= -kZero && u <= kZero;
}

bool lp_rup_lum_rm(double x, double y, double phi, double& t, double& u, double& v) {
    double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
    double rho = 0.25 * (2.0 + std::hypot(xi, eta));
    if (rho > 1.0) return false;
    u = std::acos(rho);
    tau_omega(u, -u, xi, eta, phi, t, v);
    return t >= -kZero && v <= kZero;
}

bool lp_rum_lum_rp(double x, double y, double phi, double& t, double& u, double& v) {
    double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
    double rho = (20.0 - xi * xi - eta * eta) / 16.0;
    if (rho < 0.0 || rho > 1.0) return false;
    u = -std::acos(rho);
    if (u < -0.5 * M_PI) return false;
    tau_omega(u, u, xi, eta, phi, t, v);
    return t >= -kZero && v >= -kZero;
}

bool lp_rm_sm_lm(double x, double y, double phi, double& t, double& u, double& v) {
    double xi = x - std::sin(phi), eta = y - 1.0 + std::cos(phi);
    double rho, theta;
    polar(xi, eta, rho, theta);
    if (rho < 2.0) return false;
    double r = std::sqrt(rho * rho - 4.0);
    u = 2.0 - r;
    t = mod2pi(theta + std::atan2(r, -2.0));
    v = mod2pi(phi - 0.5 * M_PI - t);
    return t >= -kZero && u <= kZero && v <= kZero;
}

bool lp_rm_sm_rm(double x, double y, double phi, double& t, double& u, double& v) {
    double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
    double rho, theta;
    polar(-eta, xi, rho, theta);
    if (rho < 2.0) return false;
    t = theta;
    u = 2.0 - rho;
    v = mod2pi(t + 0.5 * M_PI - phi);
    return t >= -kZero && u <= kZero && v <= kZero;
}

bool lp_rm_s_lm_rp(double x, double y, double phi, double& t, double& u, double& v) {
    double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
    double rho, theta;
    polar(xi, eta, rho, theta);
    (void)theta;
    if (rho < 2.0) return false;
    u = 4.0 - std::sqrt(rho * rho - 4.0);
    if (u > kZero) return false;
    t = mod2pi(std::atan2((4.0 - u) * xi - 2.0 * eta, -2.0 * xi + (u - 4.0) * eta));
    v = mod2pi(t - phi);
    return t >= -kZero && v >= -kZero;
}

struct Candidates {
    RsPath best;
    double best_total = std::numeric_limits<double>::max();

    void offer(int word, double l0, double l1, double l2, double l3 = 0.0, double l4 = 0.0) {
        double total = std::abs(l0) + std::abs(l1) + std::abs(l2) + std::abs(l3) + std::abs(l4);
        if (total >= best_total) return;
        best_total = total;
        RsPath p;
        for (int i = 0; i < 5; ++i) p.types[i] = kWords[word][i];
        p.lengths = {l0, l1, l2, l3, l4};
        best = p;
    }
};

void collect_csc(double x, double y, double phi, Candidates& out) {
    double t, u, v;
    if (lp_sp_lp(x, y, phi, t, u, v)) out.offer(14, t, u, v);
    if (lp_sp_lp(-x, y, -phi, t, u, v)) out.offer(14, -t, -u, -v);
    if (lp_sp_lp(x, -y, -phi, t, u, v)) out.offer(15, t, u, v);
    if (lp_sp_lp(-x, -y, phi, t, u, v)) out.offer(15, -t, -u, -v);
    if (lp_sp_rp(x, y, phi, t, u, v)) out.offer(12, t, u, v);
    if (lp_sp_rp(-x, y, -phi, t, u, v)) out.offer(12, -t, -u, -v);
    if (lp_sp_rp(x, -y, -phi, t, u, v)) out.offer(13, t, u, v);
    if (lp_sp_rp(-x, -y, phi, t, u, v)) out.offer(13, -t, -u, -v);
}

void collect_ccc(double x, double y, double phi, Candidates& out) {
    double t, u, v;
    if (lp_rm_l(x, y, phi, t, u, v)) out.offer(0, t, u, v);
    if (lp_rm_l(-x, y, -phi, t, u, v)) out.offer(0, -t, -u, -v);
    if (lp_rm_l(x, -y, -phi, t, u, v)) out.offer(1, t, u, v);
    if (lp_rm_l(-x, -y, phi, t, u, v)) out.offer(1, -t, -u, -v);
    double xb = x * std::cos(phi) + y * std::sin(phi);
    double yb = x * std::sin(phi) - y * std::cos(phi);
    if (lp_rm_l(xb, yb, phi, t, u, v)) out.offer(0, v, u, t);
    if (lp_rm_l(-xb, yb, -phi, t, u, v)) out.offer(0, -v, -u, -t);
    if (lp_rm_l(xb, -yb, -phi, t, u, v)) out.offer(1, v, u, t);
    if (lp_rm_l(-xb, -yb, phi, t, u, v)) out.offer(1, -v, -u, -t);
}

void collect_cccc(double x, double y, double phi, Candidates& out) {
    double t, u, v;
    if (lp_rup_lum_rm(x, y, phi, t, u, v)) out.offer(2, t, u, -u, v);
    if (lp_rup_lum_rm(-x, y, -phi, t, u, v)) out.offer(2, -t, -u, u, -v);
    if (lp_rup_lum_rm(x, -y, -phi, t, u, v)) out.offer(3, t, u, -u, v);
    if (lp_rup_lum_rm(-x, -y, phi, t, u, v)) out.offer(3, -t, -u, u, -v);
    if (lp_rum_lum_rp(x, y, phi, t, u, v)) out.offer(2, t, u, u, v);
    if (lp_rum_lum_rp(-x, y, -phi, t, u, v)) out.offer(2, -t, -u, -u, -v);
    if (lp_rum_lum_rp(x, -y, -phi, t, u, v)) out.offer(3, t, u, u, v);
    if (lp_rum_lum_rp(-x, -y, phi, t, u, v)) out.offer(3, -t, -u, -u, -v);
}

void collect_ccsc(double x, double y, double phi, Candidates& out) {
    const double hp = 0.5 * M_PI;
    double t, u, v;
    if (lp_rm_sm_lm(x, y, phi, t, u, v)) out.offer(4, t, -hp, u, v);
    if (lp_rm_sm_lm(-x, y, -phi, t, u, v)) out.offer(4, -t, hp, -u, -v);
    if (lp_rm_sm_lm(x, -y, -phi, t, u, v)) out.offer(5, t, -hp, u, v);
    if (lp_rm_sm_lm(-x, -y, phi, t, u, v)) out.offer(5, -t, hp, -u, -v);
    if (lp_rm_sm_rm(x, y, phi, t, u, v)) out.offer(8, t, -hp, u, v);
    if (lp_rm_sm_rm(-x, y, -phi, t, u, v)) out.offer(8, -t, hp, -u, -v);
    if (lp_rm_sm_rm(x, -y, -phi, t, u, v)) out.offer(9, t, -hp, u, v);
    if (lp_rm_sm_rm(-x, -y, phi, t, u, v)) out.offer(9, -t, hp, -u, -v);
    double xb = x * std::cos(phi) + y * std::sin(phi);
    double yb = x * std::sin(phi) - y * std::cos(phi);
    if (lp_rm_sm_lm(xb, yb, phi, t, u, v)) out.offer(6, v, u, -hp, t);
    if (lp_rm_sm_lm(-xb, yb, -phi, t, u, v)) out.offer(6, -v, -u, hp, -t);
    if (lp_rm_sm_lm(xb, -yb, -phi, t, u, v)) out.offer(7, v, u, -hp, t);
    if (lp_rm_sm_lm(-xb, -yb, phi, t, u, v)) out.offer(7, -v, -u, hp, -t);
    if (lp_rm_sm_rm(xb, yb, phi, t, u, v)) out.offer(10, v, u, -hp, t);
    if (lp_rm_sm_rm(-xb, yb, -phi, t, u, v)) out.offer(10, -v, -u, hp, -t);
    if (lp_rm_sm_rm(xb, -yb, -phi, t, u, v)) out.offer(11, v, u, -hp, t);
    if (lp_rm_sm_rm(-xb, -yb, phi, t, u, v)) out.offer(11, -v, -u, hp, -t);
}

void collect_ccscc(double x, double y, double phi, Candidates& out) {
    const double hp = 0.5 * M_PI;
    double t, u, v;
    if (lp_rm_s_lm_rp(x, y, phi, t, u, v)) out.offer(16, t, -hp, u, -hp, v);
    if (lp_rm_s_lm_rp(-x, y, -phi, t, u, v)) out.offer(16, -t, hp, -u, hp, -v);
    if (lp_rm_s_lm_rp(x, -y, -phi, t, u, v)) out.offer(17, t, -hp, u, -hp, v);
    if (lp_rm_s_lm_rp(-x, -y, phi, t, u, v)) out.offer(17, -t, hp, -u, hp, -v);
}

}  // namespace

RsPath rs_shortest(const Se2& q0, const Se2& q1, double radius) {
    double dx = q1.x - q0.x, dy = q1.y - q0.y;
    double c = std::cos(q0.theta), s = std::sin(q0.theta);
    double x = (c * dx + s * dy) / radius;
    double y = (-s * dx + c * dy) / radius;
    double phi = mod2pi(q1.theta - q0.theta);

    Candidates out;
    collect_csc(x, y, phi, out);
    collect_ccc(x, y, phi, out);
    collect_cccc(x, y, phi, out);
    collect_ccsc(x, y, phi, out);
    collect_ccscc(x, y, phi, out);
    return out.best;
}

double rs_length(const Se2& q0, const Se2& q1, double radius) {
    return rs_shortest(q0, q1, radius).total() * radius;
}

Se2 rs_interpolate(const Se2& q0, const RsPath& path, double radius, double s) {
    double seg = std::clamp(s / radius, 0.0, path.total());
    double x = 0.0, y = 0.0, theta = q0.theta;
    for (int i = 0; i < 5 && seg > 0.0; ++i) {
        if (path.types[i] == Seg::None) break;
        double v;
        if (path.lengths[i] < 0) {
            v = std::max(-seg, path.lengths[i]);
            seg += v;
        } else {
            v = std::min(seg, path.lengths[i]);
            seg -= v;
        }
        double phi = theta;
        switch (path.types[i]) {
            case Seg::Left:
                x += std::sin(phi + v) - std::sin(phi);
                y += -std::cos(phi + v) + std::cos(phi);
                theta = phi + v;
                break;
            case Seg::Right:
                x += -std::sin(phi - v) + std::sin(phi);
                y += std::cos(phi - v) - std::cos(phi);
                theta = phi - v;
                break;
            case Seg::Straight:
                x += v * std::cos(phi);
                y += v * std::sin(phi);
                break;
            case Seg::None: break;
        }
    }
    return {q0.x + x * radius, q0.y + y * radius, mod2pi(theta)};
}

std::vector<RsSample> rs_sample(const Se2& q0, const RsPath& path, double radius, double step) {
    const double total = path.total() * radius;
    std::vector<RsSample> out;
    if (total < 1e-12) {
        out.push_back({q0, 1});
        return out;
    }
    // segment-wise sampling: every segment boundary is a sample, so no step
    // straddles a gear or steering change
    out.push_back({q0, 1});
    double seg_start = 0.0;
    for (int i = 0; i < 5; ++i) {
        if (path.types[i] == Seg::None) break;
        double len = std::abs(path.lengths[i]) * radius;
        if (len < 1e-12) continue;
        int gear = path.lengths[i] >= 0 ? 1 : -1;
        out.back().gear = gear;  // boundary sample belongs to the segment being entered
        int n = std::max(1, (int)std::ceil(len / step));
        for (int k = 1; k <= n; ++k) {
            double s = seg_start + len * k / n;
            out.push_back({rs_interpolate(q0, path, radius, s), gear});
        }
        seg_start += len;
    }
    return out;
}

std::pair<std::vector<RsSample>, double> reeds_shepp(const Se2& q0, const Se2& q1, double radius,
                                                     double step) {
    RsPath path = rs_shortest(q0, q1, radius);
    return {rs_sample(q0, path, radius, step), path.total() * radius};
}

}  // namespace viamg
