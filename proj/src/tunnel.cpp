#include "flatlab/tunnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <string>

#include "flatlab/errors.hpp"

namespace flatlab {

namespace {

// Family shape constants.  BETA < 1 is the fraction of the curvature budget
// spent in the rate-limited phases; the leftover (1-BETA) is the scalar
// curvature margin there.
constexpr double kCollarFrac = 0.25;    // collar arc, * rho0
constexpr double kRampFrac = 0.30;      // rate ramp-in window, * rho0
constexpr double kBeta = 0.8;           // fraction of the max flattening rate
constexpr double kChi = 0.45;           // half-angle of the circular U-turn
constexpr double kSlopeRise = 0.95;     // straight climb slope
constexpr double kFlattenFrac = 0.15;   // radius covered by the final flatten, * rho0

double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 * (1.0 - std::cos(M_PI * u));
}

struct HalfBuilder {
    std::vector<ProfileSample> samples;  // s measured from the glue end, t cumulative
    double s = 0.0, t = 0.0;

    void push(double r, double r1, double r2) {
        samples.push_back({s, t, r, r1, r2});
    }
    void advance(double ds, double r1_mid) {
        s += ds;
        t += ds * std::sqrt(std::max(0.0, 1.0 - r1_mid * r1_mid));
    }
};

// Rate-limited flattening rate: theta' = beta (m-2) sin(theta) / (2 r) with the
// design dimension fixed at 3, so the shape is m-independent and the scalar
// curvature margin only grows with m.
double rate(double theta, double r) { return kBeta * std::sin(theta) / (2.0 * r); }

}  // namespace

ProfileOptions coarse_profile_options() {
    ProfileOptions o;
    o.base_segments = 400.0;
    o.max_turn_per_step = 0.01;
    o.theta_step = 1.5e-3;
    return o;
}

double scalar_curvature(int m, double r, double r1, double r2) {
    if (m < 2) throw ValidationError("scalar_curvature needs m >= 2");
    if (!(r > 0.0)) throw ValidationError("scalar_curvature needs r > 0");
    return (m - 1) * ((m - 2) * (1.0 - r1 * r1) / (r * r) - 2.0 * r2 / r);
}

namespace {

// Builds the half profile from the glue end up to the start of the neck.
// Returns false if the straight-climb target is unreachable (cannot happen for
// valid parameters; guarded anyway).
bool build_half(double rho0, double L, const ProfileOptions& opts, HalfBuilder& hb,
                double& min_radius) {
    const double base_h = std::min(L / opts.base_segments, 0.003);
    min_radius = std::sin(rho0);

    // --- collar: exact unit-sphere cap jet, r = sin(rho0 - s)
    const double collar = kCollarFrac * rho0;
    {
        const int n = std::max(8, static_cast<int>(std::ceil(collar / std::min(base_h, 0.003))));
        hb.push(std::sin(rho0), -std::cos(rho0), -std::sin(rho0));
        for (int i = 1; i <= n; ++i) {
            const double s_next = collar * i / n;
            const double tau_mid = rho0 - 0.5 * (hb.s + s_next);
            hb.advance(s_next - hb.s, -std::cos(tau_mid));
            hb.s = s_next;  // kill accumulation drift; t from midpoint slope
            const double tau = rho0 - s_next;
            hb.push(std::sin(tau), -std::cos(tau), -std::sin(tau));
        }
    }

    // --- ramp from the sphere rate (theta' = -1) into the flattening rate
    double theta = rho0 - collar;
    double r = std::sin(theta);
    const double ramp_w = kRampFrac * rho0;
    const double ramp_s0 = hb.s;
    auto v_blend = [&](double ss, double th, double rr) {
        const double c = smoothstep((ss - ramp_s0) / ramp_w);
        return (1.0 - c) * (-1.0) + c * rate(th, rr);
    };
    while ((hb.s - ramp_s0) / ramp_w < 1.0) {
        const double v = v_blend(hb.s, theta, r);
        const double ds =
            std::min({base_h, opts.max_turn_per_step / std::max(std::abs(v), 1e-9), ramp_w / 200.0});
        auto f = [&](double th, double rr, double ss, double& dth, double& dr) {
            dth = v_blend(ss, th, rr);
            dr = -std::cos(th);
        };
        double k1t, k1r, k2t, k2r, k3t, k3r, k4t, k4r;
        f(theta, r, hb.s, k1t, k1r);
        f(theta + 0.5 * ds * k1t, r + 0.5 * ds * k1r, hb.s + 0.5 * ds, k2t, k2r);
        f(theta + 0.5 * ds * k2t, r + 0.5 * ds * k2r, hb.s + 0.5 * ds, k3t, k3r);
        f(theta + ds * k3t, r + ds * k3r, hb.s + ds, k4t, k4r);
        const double r1_mid = -std::cos(theta + 0.5 * ds * k1t);
        theta += ds / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
        r += ds / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
        hb.advance(ds, r1_mid);
        const double v_now = v_blend(hb.s, theta, r);
        hb.push(r, -std::cos(theta), v_now * std::sin(theta));
        min_radius = std::min(min_radius, r);
    }

    // --- pure rate-limited descent down to the turn angle
    const double theta_turn = M_PI / 2.0 - kChi;
    while (theta < theta_turn) {
        const double dth = std::min({opts.theta_step, std::max(0.02 * theta, 1e-9),
                                     theta_turn - theta});
        auto f = [&](double th, double rr, double& dr, double& dss) {
            dss = 2.0 * rr / (kBeta * std::sin(th));  // ds/dtheta
            dr = -std::cos(th) * dss;
        };
        double k1r, k1s, k2r, k2s, k3r, k3s, k4r, k4s;
        f(theta, r, k1r, k1s);
        f(theta + 0.5 * dth, r + 0.5 * dth * k1r, k2r, k2s);
        f(theta + 0.5 * dth, r + 0.5 * dth * k2r, k3r, k3s);
        f(theta + dth, r + dth * k3r, k4r, k4s);
        const double r1_mid = -std::cos(theta + 0.5 * dth);
        r += dth / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
        const double ds = dth / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);
        theta += dth;
        hb.advance(ds, r1_mid);
        hb.push(r, -std::cos(theta), rate(theta, r) * std::sin(theta));
        min_radius = std::min(min_radius, r);
    }
    const double r_turn = r;

    // --- circular U-turn through the pinch bottom; radius chosen so the
    //     second derivative matches the descent exactly (C^2 junctions)
    const double circ_r = 2.0 * r_turn / (kBeta * std::cos(kChi));
    const double r_bottom = r_turn - circ_r * (1.0 - std::cos(kChi));
    if (!(r_bottom > 0.0)) return false;
    min_radius = std::min(min_radius, r_bottom);
    {
        const int n = std::max(32, static_cast<int>(std::ceil(2.0 * kChi / opts.max_turn_per_step)));
        double phi_prev = -kChi;
        for (int i = 1; i <= n; ++i) {
            const double phi = -kChi + 2.0 * kChi * i / n;
            const double ds = circ_r * (phi - phi_prev);
            hb.advance(ds, std::sin(0.5 * (phi + phi_prev)));
            hb.push(r_bottom + circ_r * (1.0 - std::cos(phi)), std::sin(phi),
                    std::cos(phi) / circ_r);
            phi_prev = phi;
        }
        r = r_bottom + circ_r * (1.0 - std::cos(kChi));
    }

    // --- mirrored rate-limited rise up to the climb slope
    double theta_hat = M_PI / 2.0 - kChi;
    const double theta_rise = std::acos(kSlopeRise);
    while (theta_hat > theta_rise) {
        const double dth = std::min(opts.theta_step, theta_hat - theta_rise);
        auto f = [&](double th, double rr, double& dr, double& dss) {
            dss = 2.0 * rr / (kBeta * std::sin(th));  // |ds/dthetahat|
            dr = std::cos(th) * dss;
        };
        double k1r, k1s, k2r, k2s, k3r, k3s, k4r, k4s;
        f(theta_hat, r, k1r, k1s);
        f(theta_hat - 0.5 * dth, r + 0.5 * dth * k1r, k2r, k2s);
        f(theta_hat - 0.5 * dth, r + 0.5 * dth * k2r, k3r, k3s);
        f(theta_hat - dth, r + dth * k3r, k4r, k4s);
        const double r1_mid = std::cos(theta_hat - 0.5 * dth);
        r += dth / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
        const double ds = dth / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);
        theta_hat -= dth;
        hb.advance(ds, r1_mid);
        hb.push(r, std::cos(theta_hat), rate(theta_hat, r) * std::sin(theta_hat));
    }

    // --- ramp the rate out to zero (straight climb takes over)
    {
        const double w_out = std::max(20.0 * r, 1e-9 * rho0);
        const double s1 = hb.s;
        while ((hb.s - s1) / w_out < 1.0) {
            auto rt = [&](double ss, double th, double rr) {
                return rate(th, rr) * (1.0 - smoothstep((ss - s1) / w_out));
            };
            const double v = rt(hb.s, theta_hat, r);
            const double ds =
                std::min({base_h, opts.max_turn_per_step / std::max(v, 1e-12), w_out / 100.0});
            auto f = [&](double th, double rr, double ss, double& dth, double& dr) {
                dth = -rt(ss, th, rr);
                dr = std::cos(th);
            };
            double k1t, k1r, k2t, k2r, k3t, k3r, k4t, k4r;
            f(theta_hat, r, hb.s, k1t, k1r);
            f(theta_hat + 0.5 * ds * k1t, r + 0.5 * ds * k1r, hb.s + 0.5 * ds, k2t, k2r);
            f(theta_hat + 0.5 * ds * k2t, r + 0.5 * ds * k2r, hb.s + 0.5 * ds, k3t, k3r);
            f(theta_hat + ds * k3t, r + ds * k3r, hb.s + ds, k4t, k4r);
            const double r1_mid = std::cos(theta_hat + 0.5 * ds * k1t);
            theta_hat += ds / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
            r += ds / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
            hb.advance(ds, r1_mid);
            hb.push(r, std::cos(theta_hat), rt(hb.s, theta_hat, r) * std::sin(theta_hat));
        }
    }
    const double slope = std::cos(theta_hat);

    // --- straight climb to the flatten entry radius
    const double r_flat = rho0 - kFlattenFrac * rho0;
    if (r_flat <= r) return false;
    {
        const double arc = (r_flat - r) / slope;
        const int n = std::max(8, static_cast<int>(std::ceil(arc / base_h)));
        const double r_at = r;
        const double s_at = hb.s;
        for (int i = 1; i <= n; ++i) {
            const double ss = arc * i / n;
            hb.advance(s_at + ss - hb.s, slope);
            hb.s = s_at + ss;
            hb.push(r_at + slope * ss, slope, 0.0);
        }
        r = r_flat;
    }

    // --- cosine flatten into the neck: r' = slope (1 + cos(pi u))/2, r'' <= 0
    {
        const double w_c = 2.0 * (rho0 - r_flat) / slope;
        const double kappa_max =
            slope * M_PI / (2.0 * w_c) / std::sqrt(std::max(1e-12, 1.0 - slope * slope));
        const double h6 = std::min(base_h, opts.max_turn_per_step / kappa_max);
        const int n = std::max(16, static_cast<int>(std::ceil(w_c / h6)));
        const double s_at = hb.s;
        const double r_at = r;
        double r1_prev = slope;
        for (int i = 1; i <= n; ++i) {
            const double u = static_cast<double>(i) / n;
            const double ss = w_c * u;
            const double r1 = slope * (1.0 + std::cos(M_PI * u)) / 2.0;
            hb.advance(s_at + ss - hb.s, 0.5 * (r1 + r1_prev));
            hb.s = s_at + ss;
            hb.push(r_at + slope * (ss + (w_c / M_PI) * std::sin(M_PI * u)) / 2.0, r1,
                    -slope * M_PI * std::sin(M_PI * u) / (2.0 * w_c));
            r1_prev = r1;
        }
        // land on the neck radius exactly
        hb.samples.back().r = rho0;
        hb.samples.back().r1 = 0.0;
        hb.samples.back().r2 = 0.0;
    }
    return true;
}

}  // namespace

double min_feasible_length(double rho0, const ProfileOptions& opts) {
    HalfBuilder hb;
    double min_r = 0.0;
    // Use a generous provisional L so base_h does not depend on the answer.
    if (!build_half(rho0, std::max(1.0, 10.0 * rho0), opts, hb, min_r))
        throw ConstructionError("profile family infeasible for rho0 = " + std::to_string(rho0));
    return 2.0 * hb.s;
}

TunnelProfile generate_profile(int m, double rho0, double rho, double L,
                               const ProfileOptions& opts) {
    if (m < 2) throw ValidationError("profile dimension must satisfy m >= 2");
    if (!(rho0 > 0.0) || !(rho0 < rho))
        throw ValidationError("profile needs 0 < rho0 < rho");
    if (!(L > 2.0 * (rho - rho0)))
        throw ValidationError("profile length must exceed 2 (rho - rho0)");

    HalfBuilder hb;
    double min_radius = 0.0;
    if (!build_half(rho0, L, opts, hb, min_radius))
        throw ConstructionError("profile family infeasible for rho0 = " + std::to_string(rho0));
    const double overhead = 2.0 * hb.s;
    if (overhead > L)
        throw ConstructionError("profile length " + std::to_string(L) +
                                " too small for the bend geometry; minimal feasible length = " +
                                std::to_string(overhead));

    // --- neck
    const double base_h = std::min(L / opts.base_segments, 0.003);
    const double neck = 0.5 * L - hb.s;
    {
        const int n = std::max(4, static_cast<int>(std::ceil(neck / base_h)));
        const double s_at = hb.s;
        for (int i = 1; i <= n; ++i) {
            const double ss = s_at + neck * i / n;
            hb.advance(ss - hb.s, 0.0);
            hb.s = ss;
            hb.push(rho0, 0.0, 0.0);
        }
    }

    // --- mirror about the center
    TunnelProfile p;
    p.m = m;
    p.rho0 = rho0;
    p.rho = rho;
    p.length = L;
    p.neck_length = 2.0 * neck;
    p.min_radius = min_radius;
    const double t_half = hb.t;
    p.l_prime = 2.0 * t_half;
    p.samples.reserve(2 * hb.samples.size());
    for (const auto& smp : hb.samples)
        p.samples.push_back({smp.s - 0.5 * L, smp.t - t_half, smp.r, smp.r1, smp.r2});
    for (auto it = hb.samples.rbegin() + 1; it != hb.samples.rend(); ++it)
        p.samples.push_back({0.5 * L - it->s, t_half - it->t, it->r, -it->r1, it->r2});

    if (!(p.l_prime < p.length))
        throw InvariantViolation("profile axial extent must be shorter than its arc length");
    for (const auto& smp : p.samples)
        if (!(smp.r > 0.0) || smp.r > rho + 1e-12)
            throw InvariantViolation("profile radius left (0, rho]");

    // Positive scalar curvature is an empirical gate for m >= 3: fail loudly
    // with the violating arc parameter.
    if (m >= 3) {
        for (const auto& smp : p.samples)
            if (!(scalar_curvature(m, smp.r, smp.r1, smp.r2) > 0.0))
                throw ConstructionError("scalar curvature not positive at s = " +
                                        std::to_string(smp.s));
    }
    return p;
}

double scalar_curvature(const TunnelProfile& profile, double s) {
    if (profile.samples.size() < 2) throw ValidationError("profile has no samples");
    const double lo = profile.samples.front().s, hi = profile.samples.back().s;
    if (s < lo - 1e-12 || s > hi + 1e-12)
        throw ValidationError("arc parameter outside the sampled range");
    s = std::clamp(s, lo, hi);
    auto it = std::lower_bound(profile.samples.begin(), profile.samples.end(), s,
                               [](const ProfileSample& a, double v) { return a.s < v; });
    if (it == profile.samples.begin()) ++it;
    if (it == profile.samples.end()) --it;
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double w = b.s > a.s ? (s - a.s) / (b.s - a.s) : 0.0;
    const double r = a.r + w * (b.r - a.r);
    const double r1 = a.r1 + w * (b.r1 - a.r1);
    const double r2 = a.r2 + w * (b.r2 - a.r2);
    return scalar_curvature(profile.m, r, r1, r2);
}

double profile_volume(const TunnelProfile& profile) {
    if (profile.samples.size() < 2) throw ValidationError("profile has no samples");
    const double ring = sphere_area(profile.m - 1);
    double integral = 0.0;
    for (std::size_t i = 1; i < profile.samples.size(); ++i) {
        const auto& a = profile.samples[i - 1];
        const auto& b = profile.samples[i];
        integral += 0.5 *
                    (std::pow(a.r, profile.m - 1) + std::pow(b.r, profile.m - 1)) *
                    (b.s - a.s);
    }
    return ring * integral;
}

DiameterReport diameter_and_tube_check(const TunnelProfile& profile) {
    if (profile.samples.size() < 2) throw ValidationError("profile has no samples");
    // Distances on the warped product depend only on the angular separation in
    // [0, pi], so a half-latitude strip graph covers every pair.
    const int ns = 120, nphi = 48;
    const double dphi = M_PI / nphi;
    std::vector<double> sv(ns), rv(ns);
    const double s0 = profile.samples.front().s, s1 = profile.samples.back().s;
    for (int i = 0; i < ns; ++i) {
        const double s = s0 + (s1 - s0) * i / (ns - 1);
        auto it = std::lower_bound(profile.samples.begin(), profile.samples.end(), s,
                                   [](const ProfileSample& a, double v) { return a.s < v; });
        if (it == profile.samples.begin()) ++it;
        if (it == profile.samples.end()) --it;
        const auto& b = *it;
        const auto& a = *(it - 1);
        const double w = b.s > a.s ? (s - a.s) / (b.s - a.s) : 0.0;
        sv[i] = s;
        rv[i] = a.r + w * (b.r - a.r);
    }
    const auto id = [&](int i, int p) { return i * (nphi + 1) + p; };
    const int nodes = ns * (nphi + 1);
    // local offsets: axis, angle, diagonals and knights for direction fidelity
    const int off[][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}, {1, -2}, {2, 1}, {2, -1}};

    auto run = [&](const std::vector<int>& sources) {
        std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int s : sources) {
            dist[s] = 0.0;
            pq.push({0.0, s});
        }
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            const int i = u / (nphi + 1), p = u % (nphi + 1);
            for (const auto& o : off)
                for (int sign : {1, -1}) {
                    const int i2 = i + sign * o[0], p2 = p + sign * o[1];
                    if (i2 < 0 || i2 >= ns || p2 < 0 || p2 > nphi) continue;
                    const double ds = sv[i2] - sv[i];
                    const double rmid = 0.5 * (rv[i] + rv[i2]);
                    const double darc = rmid * dphi * (p2 - p);
                    const double w = std::sqrt(ds * ds + darc * darc);
                    const int v = id(i2, p2);
                    if (dist[u] + w < dist[v]) {
                        dist[v] = dist[u] + w;
                        pq.push({dist[v], v});
                    }
                }
        }
        return dist;
    };

    DiameterReport rep;
    std::vector<int> meridian(ns);
    for (int i = 0; i < ns; ++i) meridian[i] = id(i, 0);
    const auto to_meridian = run(meridian);
    for (double d : to_meridian) rep.max_dist_to_meridian = std::max(rep.max_dist_to_meridian, d);
    rep.tube_ok = rep.max_dist_to_meridian <= 2.0 * M_PI * profile.rho;

    for (int i = 0; i < ns; ++i) {
        const auto dist = run({id(i, 0)});
        for (double d : dist) rep.diameter = std::max(rep.diameter, d);
    }
    return rep;
}

void write_profile_csv(const TunnelProfile& profile, std::ostream& os) {
    os << "s,r,r_prime,r_double_prime,scalar_curvature\n";
    char buf[200];
    for (const auto& smp : profile.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", smp.s, smp.r, smp.r1,
                      smp.r2, scalar_curvature(profile.m, smp.r, smp.r1, smp.r2));
        os << buf;
    }
}

void write_profile_mesh(const TunnelProfile& profile, std::ostream& os, int segments) {
    if (profile.m != 2)
        throw ValidationError("mesh export renders the rotated surface in 3-space (m == 2 only)");
    if (segments < 3) throw ValidationError("mesh needs at least 3 segments");
    // thin the meridian to keep meshes manageable
    const int target = 400;
    const int stride = std::max<std::size_t>(1, profile.samples.size() / target);
    std::vector<const ProfileSample*> rows;
    for (std::size_t i = 0; i < profile.samples.size(); i += stride)
        rows.push_back(&profile.samples[i]);
    if (rows.back() != &profile.samples.back()) rows.push_back(&profile.samples.back());
    char buf[160];
    for (const auto* smp : rows)
        for (int k = 0; k < segments; ++k) {
            const double a = 2.0 * M_PI * k / segments;
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", smp->t,
                          smp->r * std::cos(a), smp->r * std::sin(a));
            os << buf;
        }
    const int nr = static_cast<int>(rows.size());
    for (int i = 0; i + 1 < nr; ++i)
        for (int k = 0; k < segments; ++k) {
            const int k2 = (k + 1) % segments;
            const int a = i * segments + k + 1, b = i * segments + k2 + 1;
            const int c = (i + 1) * segments + k + 1, d = (i + 1) * segments + k2 + 1;
            os << "f " << a << ' ' << b << ' ' << d << '\n';
            os << "f " << a << ' ' << d << ' ' << c << '\n';
        }
}

}  // namespace flatlab
