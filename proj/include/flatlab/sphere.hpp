#pragma once

#include <span>
#include <vector>

namespace flatlab {

using Coords = std::vector<double>;

/// Central tolerance record.  Every module takes its thresholds from here.
struct Tolerances {
    double algebraic = 1e-12;     ///< closed-form identities
    double metric_axiom = 1e-10;  ///< triangle inequality and friends
    double search = 1e-6;         ///< iterative searches
};

/// Point of the unit sphere S^m sitting in R^{m+1} (m >= 2).
struct SpherePoint {
    Coords x;

    int ambient_dim() const { return static_cast<int>(x.size()); }
    int sphere_dim() const { return static_cast<int>(x.size()) - 1; }
};

/// Validating factory: |c| must be 1 within tol.algebraic, dimension >= 3.
SpherePoint sphere_point(Coords c, const Tolerances& tol = {});

/// Throws ValidationError unless p is a unit vector of ambient dimension >= 3.
void require_on_sphere(const SpherePoint& p, const Tolerances& tol = {});

/// Great-circle distance in [0, pi].  Computed from chord lengths
/// (2 asin(|x-y|/2), antipode-reflected for obtuse pairs) so the value is
/// accurate to a few ulp across the whole range.
double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// Restricted ambient distance sqrt(2 - 2 cos d_S) = 2 sin(d_S/2).
double chordal_distance(const SpherePoint& x, const SpherePoint& y);

enum class CurveMetric { geodesic, chordal };

/// Discretized curve on the sphere.
struct SpherePolyline {
    std::vector<SpherePoint> vertices;
};

/// Sum of consecutive vertex distances.  A single vertex has length 0.
double polyline_length(const SpherePolyline& c, CurveMetric metric);

/// min over z in S^m of max(|d_E(x,z) - d_E(x,y)/2|, |d_E(y,z) - d_E(x,y)/2|),
/// estimated by a quasi-uniform coarse grid of ~resolution^2 candidates plus
/// tangent-direction pattern descent.  Strictly positive whenever x != y;
/// returns 0 for x == y.
double midpoint_defect(const SpherePoint& x, const SpherePoint& y, int resolution = 40);

/// Deterministic orthonormal basis of the tangent space at p (m vectors).
std::vector<Coords> tangent_frame(const SpherePoint& p);

/// exp_p(arc * u) = cos(arc) p + sin(arc) u for a unit tangent u at p.
SpherePoint geodesic_step(const SpherePoint& p, std::span<const double> unit_tangent, double arc);

/// Surface measure of the unit sphere S^dim.
double sphere_area(int dim);

/// Measure of a geodesic cap of the given radius on the unit sphere S^dim.
double cap_area(int dim, double radius);

namespace vec {

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double dist(std::span<const double> a, std::span<const double> b);
void normalize(std::span<double> a);

/// Unit-vector great-circle distance without sphere validation (hot paths).
double geodesic_unit(std::span<const double> a, std::span<const double> b);
/// Unit-vector chord length 2 sin(theta/2).
double chordal_unit(std::span<const double> a, std::span<const double> b);

}  // namespace vec

}  // namespace flatlab
