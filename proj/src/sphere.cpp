#include "flatlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flatlab/errors.hpp"
#include "flatlab/rng.hpp"

namespace flatlab {

namespace vec {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void normalize(std::span<double> a) {
    const double n = norm(a);
    for (auto& c : a) c /= n;
}

double geodesic_unit(std::span<const double> a, std::span<const double> b) {
    // 2 asin(chord/2) for acute pairs; reflect through the antipode otherwise.
    // Both branches are well conditioned, unlike acos(dot) near the ends.
    if (dot(a, b) >= 0.0) {
        const double half = 0.5 * dist(a, b);
        return 2.0 * std::asin(std::min(1.0, half));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] + b[i];
        s += d * d;
    }
    const double half = 0.5 * std::sqrt(s);
    return M_PI - 2.0 * std::asin(std::min(1.0, half));
}

double chordal_unit(std::span<const double> a, std::span<const double> b) {
    return 2.0 * std::sin(0.5 * geodesic_unit(a, b));
}

}  // namespace vec

void require_on_sphere(const SpherePoint& p, const Tolerances& tol) {
    if (p.ambient_dim() < 3)
        throw ValidationError("sphere point needs ambient dimension >= 3 (m >= 2), got " +
                              std::to_string(p.ambient_dim()));
    const double n = vec::norm(p.x);
    if (std::abs(n - 1.0) > tol.algebraic)
        throw ValidationError("sphere point is not a unit vector: |norm - 1| = " +
                              std::to_string(std::abs(n - 1.0)));
}

SpherePoint sphere_point(Coords c, const Tolerances& tol) {
    SpherePoint p{std::move(c)};
    require_on_sphere(p, tol);
    return p;
}

static void require_same_dim(const SpherePoint& x, const SpherePoint& y) {
    if (x.ambient_dim() != y.ambient_dim())
        throw ValidationError("sphere points live in different ambient dimensions");
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
    require_on_sphere(x);
    require_on_sphere(y);
    require_same_dim(x, y);
    return vec::geodesic_unit(x.x, y.x);
}

double chordal_distance(const SpherePoint& x, const SpherePoint& y) {
    require_on_sphere(x);
    require_on_sphere(y);
    require_same_dim(x, y);
    return vec::chordal_unit(x.x, y.x);
}

double polyline_length(const SpherePolyline& c, CurveMetric metric) {
    if (c.vertices.empty()) throw ValidationError("polyline needs at least one vertex");
    for (const auto& v : c.vertices) require_on_sphere(v);
    double len = 0.0;
    for (std::size_t i = 1; i < c.vertices.size(); ++i) {
        len += metric == CurveMetric::geodesic
                   ? vec::geodesic_unit(c.vertices[i - 1].x, c.vertices[i].x)
                   : vec::chordal_unit(c.vertices[i - 1].x, c.vertices[i].x);
    }
    return len;
}

std::vector<Coords> tangent_frame(const SpherePoint& p) {
    require_on_sphere(p);
    const int n = p.ambient_dim();
    std::vector<Coords> frame;
    frame.reserve(n - 1);
    for (int axis = 0; axis < n && static_cast<int>(frame.size()) < n - 1; ++axis) {
        Coords v(n, 0.0);
        v[axis] = 1.0;
        // Gram-Schmidt against p and the frame so far
        const double dp = vec::dot(v, p.x);
        for (int k = 0; k < n; ++k) v[k] -= dp * p.x[k];
        for (const auto& f : frame) {
            const double df = vec::dot(v, f);
            for (int k = 0; k < n; ++k) v[k] -= df * f[k];
        }
        const double nv = vec::norm(v);
        if (nv < 1e-6) continue;  // axis nearly parallel to span, skip
        for (auto& c : v) c /= nv;
        frame.push_back(std::move(v));
    }
    return frame;
}

SpherePoint geodesic_step(const SpherePoint& p, std::span<const double> unit_tangent, double arc) {
    const double ca = std::cos(arc), sa = std::sin(arc);
    Coords q(p.ambient_dim());
    for (int k = 0; k < p.ambient_dim(); ++k) q[k] = ca * p.x[k] + sa * unit_tangent[k];
    vec::normalize(q);
    return SpherePoint{std::move(q)};
}

double sphere_area(int dim) {
    if (dim < 1) throw ValidationError("sphere_area needs dim >= 1");
    // 2 pi^{(dim+1)/2} / Gamma((dim+1)/2)
    const double k = 0.5 * (dim + 1);
    return 2.0 * std::pow(M_PI, k) / std::tgamma(k);
}

double cap_area(int dim, double radius) {
    if (dim < 1) throw ValidationError("cap_area needs dim >= 1");
    if (radius < 0.0) throw ValidationError("cap radius must be nonnegative");
    radius = std::min(radius, M_PI);
    // area of S^{dim-1} times int_0^radius sin^{dim-1}
    const double ring = sphere_area(dim - 1);
    const int steps = 2048;
    const double h = radius / steps;
    double integral = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t0 = i * h, t1 = (i + 1) * h, tm = t0 + 0.5 * h;
        const double f0 = std::pow(std::sin(t0), dim - 1);
        const double fm = std::pow(std::sin(tm), dim - 1);
        const double f1 = std::pow(std::sin(t1), dim - 1);
        integral += h / 6.0 * (f0 + 4.0 * fm + f1);
    }
    return ring * integral;
}

namespace {

double pair_defect(std::span<const double> z, std::span<const double> x,
                   std::span<const double> y, double target) {
    const double dx = std::abs(vec::dist(x, z) - target);
    const double dy = std::abs(vec::dist(y, z) - target);
    return std::max(dx, dy);
}

// Quasi-uniform candidate set: golden-spiral lattice on S^2, seeded Gaussian
// sample in higher dimensions.
std::vector<Coords> candidate_grid(int ambient_dim, int count) {
    std::vector<Coords> pts;
    pts.reserve(count);
    if (ambient_dim == 3) {
        const double golden = M_PI * (std::sqrt(5.0) + 1.0);
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - 2.0 * (i + 0.5) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double th = golden * i;
            pts.push_back({r * std::cos(th), r * std::sin(th), z});
        }
    } else {
        Rng rng(0x5eedful + static_cast<std::uint64_t>(count) * 1315423911u);
        for (int i = 0; i < count; ++i) pts.push_back(rng.unit_vector(ambient_dim));
    }
    return pts;
}

}  // namespace

double midpoint_defect(const SpherePoint& x, const SpherePoint& y, int resolution) {
    require_on_sphere(x);
    require_on_sphere(y);
    require_same_dim(x, y);
    if (resolution < 2) throw ValidationError("midpoint_defect resolution must be >= 2");
    const double full = vec::dist(x.x, y.x);
    if (full == 0.0) return 0.0;
    const double target = 0.5 * full;

    // coarse stage
    const int n = x.ambient_dim();
    const int count = std::max(resolution * resolution, 256);
    Coords best;
    double best_val = std::numeric_limits<double>::infinity();
    for (const auto& z : candidate_grid(n, count)) {
        const double v = pair_defect(z, x.x, y.x, target);
        if (v < best_val) {
            best_val = v;
            best = z;
        }
    }

    // tangent pattern descent from the best candidate
    double step = 2.0 * std::sqrt(sphere_area(n - 1) / count);  // ~ grid spacing
    Coords trial(n);
    while (step > 1e-9) {
        bool improved = false;
        const auto frame = tangent_frame(SpherePoint{best});
        for (const auto& dir : frame) {
            for (double sign : {1.0, -1.0}) {
                for (int k = 0; k < n; ++k) trial[k] = best[k] + sign * step * dir[k];
                vec::normalize(trial);
                const double v = pair_defect(trial, x.x, y.x, target);
                if (v < best_val) {
                    best_val = v;
                    best = trial;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best_val;
}

}  // namespace flatlab
