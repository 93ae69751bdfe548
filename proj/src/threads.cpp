#include "flatlab/threads.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "flatlab/errors.hpp"

namespace flatlab {

double tunnel_radius(double eps, int count) {
    if (!(eps > 0.0)) throw ValidationError("tunnel_radius needs eps > 0");
    if (count < 1) throw ValidationError("tunnel_radius needs count >= 1");
    return eps / (static_cast<double>(count) * count);
}

namespace {

constexpr double kSpacingMargin = 1e-12;

Coords tangent_toward(const SpherePoint& p, const SpherePoint& target,
                      const std::vector<Coords>& frame) {
    const int n = p.ambient_dim();
    Coords u(n);
    const double dp = vec::dot(target.x, p.x);
    for (int k = 0; k < n; ++k) u[k] = target.x[k] - dp * p.x[k];
    const double nu = vec::norm(u);
    if (nu < 1e-9) return frame.front();  // antipodal target: direction is arbitrary
    for (auto& c : u) c /= nu;
    return u;
}

// Rotation companion for u inside the tangent sphere: first frame axis that is
// not nearly parallel to u, orthonormalized against it.
Coords rotation_companion(const Coords& u, const std::vector<Coords>& frame) {
    const int n = static_cast<int>(u.size());
    for (const auto& f : frame) {
        if (std::abs(vec::dot(u, f)) < 0.9) {
            Coords w = f;
            const double du = vec::dot(w, u);
            for (int k = 0; k < n; ++k) w[k] -= du * u[k];
            vec::normalize(w);
            return w;
        }
    }
    throw ConstructionError("no rotation direction available in tangent space");
}

}  // namespace

EndpointSet place_endpoints(const Net& net) {
    const int n = net.count();
    EndpointSet out;
    out.net = net;
    if (n < 2) return out;  // no pairs, no endpoints

    const double eps = net.eps;
    const double spacing = eps / n;                 // per-ball bound
    const double cross = 2.0 * tunnel_radius(eps, n);  // endpoint-ball disjointness
    const double phi_step = spacing / std::sin(eps);
    const int max_steps = static_cast<int>(std::floor(2.0 * M_PI / phi_step));

    out.points.resize(static_cast<std::size_t>(n) * (n - 1));
    std::vector<char> placed(out.points.size(), 0);

    for (int i = 0; i < n; ++i) {
        const auto frame = tangent_frame(net.centers[i]);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Coords u0 = tangent_toward(net.centers[i], net.centers[j], frame);
            const Coords w = rotation_companion(u0, frame);
            const int nk = net.centers[i].ambient_dim();
            bool ok = false;
            for (int step = 0; step <= max_steps && !ok; ++step) {
                const double a = step * phi_step;
                Coords u(nk);
                const double ca = std::cos(a), sa = std::sin(a);
                for (int k = 0; k < nk; ++k) u[k] = ca * u0[k] + sa * w[k];
                const SpherePoint q = geodesic_step(net.centers[i], u, eps);
                bool clean = true;
                for (int jj = 0; jj < n && clean; ++jj) {
                    if (jj == i) continue;
                    const int idx = out.index(i, jj);
                    if (!placed[idx]) continue;
                    if (vec::geodesic_unit(q.x, out.points[idx].x) - spacing <= kSpacingMargin)
                        clean = false;
                }
                for (std::size_t idx = 0; idx < out.points.size() && clean; ++idx) {
                    if (!placed[idx] || idx / (n - 1) == static_cast<std::size_t>(i)) continue;
                    if (vec::geodesic_unit(q.x, out.points[idx].x) - cross <= kSpacingMargin)
                        clean = false;
                }
                if (clean) {
                    const int idx = out.index(i, j);
                    out.points[idx] = q;
                    placed[idx] = 1;
                    ok = true;
                }
            }
            if (!ok)
                throw ConstructionError(
                    "endpoint spacing infeasible on the boundary sphere of center " +
                    std::to_string(i) + " (eps = " + std::to_string(eps) +
                    ", count = " + std::to_string(n) + ")");
        }
    }
    return out;
}

ThreadSystem build_threads(const EndpointSet& endpoints) {
    const int n = endpoints.net.count();
    ThreadSystem ts;
    ts.endpoints = endpoints;
    ts.rho = tunnel_radius(endpoints.net.eps, std::max(n, 1));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Thread t;
            t.i = i;
            t.j = j;
            t.length = vec::chordal_unit(endpoints.at(i, j).x, endpoints.at(j, i).x);
            if (!(t.length > 0.0) || t.length > 2.0 + 1e-12)
                throw InvariantViolation("thread length out of (0, 2]");
            ts.pairs.push_back(t);
        }
    return ts;
}

}  // namespace flatlab
