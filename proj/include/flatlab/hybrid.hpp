#pragma once

#include <span>
#include <vector>

#include "flatlab/threads.hpp"

namespace flatlab {

/// Length metric of the sphere-with-threads, restricted to sphere points.
/// Realized as a complete graph over the thread endpoints: geodesic edges
/// everywhere, thread edges overlaid where shorter.  Between thread uses the
/// optimal motion on the sphere is a geodesic, so this graph is exact.
struct HybridMetric {
    ThreadSystem threads;
    std::vector<SpherePoint> nodes;      ///< flattened endpoint list (2K nodes)
    std::vector<int> partner;            ///< node index of the paired endpoint, -1 if none
    std::vector<double> partner_length;  ///< thread length toward partner
    std::vector<double> sphere_dist;     ///< dense node-to-node geodesic table (may be empty)

    int node_count() const { return static_cast<int>(nodes.size()); }
    double edge_weight(int a, int b) const;  ///< min(geodesic, thread)
};

/// Nodes beyond this count skip the dense geodesic table and compute edge
/// weights on demand.
inline constexpr int kDenseNodeLimit = 5000;

HybridMetric build_metric(const ThreadSystem& threads);

/// Shortest-path distance between two sphere points (virtual source/target
/// joined to every endpoint, plus the direct geodesic).
double distance(const HybridMetric& metric, const SpherePoint& x, const SpherePoint& y);

/// One shortest-path sweep from x, then O(nodes) per target.
std::vector<double> distance_batch(const HybridMetric& metric, const SpherePoint& x,
                                   std::span<const SpherePoint> targets);

/// Independent oracle: minimum over all sequences of distinct threads
/// traversed in either orientation, gaps bridged by geodesics.  Exponential;
/// requires thread_count <= 8.
double brute_force_distance(const ThreadSystem& threads, const SpherePoint& x,
                            const SpherePoint& y);

}  // namespace flatlab
