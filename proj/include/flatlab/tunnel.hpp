#pragma once

#include <iosfwd>
#include <vector>

#include "flatlab/sphere.hpp"

namespace flatlab {

/// One arc-length sample of the rotationally symmetric profile.
/// s is arc length along the generating curve, t the axial coordinate,
/// r the rotation radius, r1/r2 its first/second arc-length derivatives.
struct ProfileSample {
    double s, t, r, r1, r2;
};

/// Rotationally symmetric tunnel: the warped product ds^2 + r(s)^2 g_{S^{m-1}}
/// over s in [-L/2, L/2].  Ends carry the exact jet of a unit-sphere cap of
/// radius rho0; the middle is a straight neck of radius rho0; in between the
/// radius dips through a curvature-limited pinch (the only way to reach a flat
/// neck from a cap rim while keeping the scalar curvature positive for m >= 3).
struct TunnelProfile {
    int m = 0;
    double rho0 = 0.0;     ///< neck radius and glue-cap radius
    double rho = 0.0;      ///< removed-ball radius, rho > rho0; bounds r from above
    double length = 0.0;   ///< arc length of the generating curve (graph length)
    double l_prime = 0.0;  ///< axial extent, always < length
    double neck_length = 0.0;
    double min_radius = 0.0;  ///< pinch radius
    std::vector<ProfileSample> samples;  ///< s strictly increasing, symmetric
};

struct ProfileOptions {
    double base_segments = 2000.0;    ///< default grid: spacing length/base_segments
    double max_turn_per_step = 0.003; ///< |curvature| * step bound (arc fidelity)
    double theta_step = 4.0e-4;       ///< angle step in the rate-limited phases
};

/// Coarser sampling for bulk budget work.
ProfileOptions coarse_profile_options();

/// Construction parameters must satisfy 0 < rho0 < rho and L > 2 (rho - rho0);
/// additionally L must exceed the family's own minimal length ~ 4.4 rho0
/// (reported by the construction error when violated).
TunnelProfile generate_profile(int m, double rho0, double rho, double L,
                               const ProfileOptions& opts = {});

/// Scalar curvature of the warped product at a sampled jet:
/// (m-1) [ (m-2)(1 - r1^2)/r^2 - 2 r2 / r ].
double scalar_curvature(int m, double r, double r1, double r2);

/// Evaluate at arc parameter s (jets linearly interpolated between samples).
double scalar_curvature(const TunnelProfile& profile, double s);

/// omega_{m-1} * integral of r^{m-1} ds.
double profile_volume(const TunnelProfile& profile);

struct DiameterReport {
    double diameter = 0.0;
    bool tube_ok = false;
    double max_dist_to_meridian = 0.0;
};

/// Diameter via shortest paths on a meridian-latitude sample graph of the
/// rotated surface; tube_ok checks every sampled point is within 2 pi rho of
/// an axial meridian.
DiameterReport diameter_and_tube_check(const TunnelProfile& profile);

/// Smallest total length the family can realize for this rho0 (used in
/// feasibility errors and tests).
double min_feasible_length(double rho0, const ProfileOptions& opts = {});

/// CSV columns: s, r, r_prime, r_double_prime, scalar_curvature.
void write_profile_csv(const TunnelProfile& profile, std::ostream& os);

/// Indexed triangle mesh of the rotated surface (m == 2 only): "v x y z" and
/// "f a b c" lines, 1-based indices.
void write_profile_mesh(const TunnelProfile& profile, std::ostream& os, int segments = 64);

}  // namespace flatlab
