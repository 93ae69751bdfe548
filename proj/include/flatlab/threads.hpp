#pragma once

#include <vector>

#include "flatlab/net.hpp"
#include "flatlab/sphere.hpp"

namespace flatlab {

/// One boundary point per ordered center pair: the endpoint for (i, j) sits on
/// the geodesic sphere of radius eps about center i, aimed at center j.
struct EndpointSet {
    Net net;
    std::vector<SpherePoint> points;  ///< size n*(n-1), ordered-pair layout

    int index(int i, int j) const {
        const int n = net.count();
        return i * (n - 1) + (j < i ? j : j - 1);
    }
    const SpherePoint& at(int i, int j) const { return points[index(i, j)]; }
};

/// Chord segment joining the two endpoints of an unordered center pair.
struct Thread {
    int i = 0, j = 0;   ///< i < j
    double length = 0;  ///< ambient chord length of the endpoint pair
};

struct ThreadSystem {
    EndpointSet endpoints;
    std::vector<Thread> pairs;  ///< one record per unordered pair, i < j
    double rho = 0.0;           ///< eps / count^2

    int count() const { return endpoints.net.count(); }
    int thread_count() const { return static_cast<int>(pairs.size()); }
    double eps() const { return endpoints.net.eps; }
    int m() const { return endpoints.net.m; }
};

/// Deterministic endpoint placement.  Default direction is the unit tangent
/// toward the partner center; conflicts (per-ball spacing <= eps/n, or any
/// endpoint pair closer than twice the tunnel radius) are resolved by rotating
/// the endpoint along its geodesic sphere in fixed steps.
EndpointSet place_endpoints(const Net& net);

/// Pair endpoints (i,j) <-> (j,i), measure chord lengths, fix rho = eps/n^2.
ThreadSystem build_threads(const EndpointSet& endpoints);

/// eps / count^2.
double tunnel_radius(double eps, int count);

}  // namespace flatlab
