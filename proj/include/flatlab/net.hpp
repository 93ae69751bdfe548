#pragma once

#include <cstdint>
#include <vector>

#include "flatlab/sphere.hpp"

namespace flatlab {

/// Separated covering family on S^m: centers are pairwise more than 2*eps
/// apart and the 2*eps balls cover the sphere (checked by sampling).
struct Net {
    int m = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::vector<SpherePoint> centers;

    int count() const { return static_cast<int>(centers.size()); }
};

struct NetOptions {
    double pool_factor = 50.0;  ///< candidate pool = pool_factor * area / cap(2 eps)
    std::size_t max_pool = 2'000'000;
    std::size_t repair_sample = 150'000;  ///< fresh points per repair round
    int max_repair_rounds = 80;
    int clean_rounds_required = 3;  ///< consecutive rounds with no insertion
};

/// Greedy farthest-point packing over a quasi-uniform pool, then repair rounds
/// that insert any sampled point farther than 2*eps from every center.
/// Deterministic for a fixed seed.
Net build_net(int m, double eps, std::uint64_t seed, const NetOptions& opts = {});

/// Smallest pairwise geodesic distance between centers (inf for count < 2).
double min_pairwise_separation(const Net& net);

/// Max over `samples` seeded random points of the distance to the nearest center.
double sampled_covering_radius(const Net& net, std::size_t samples, std::uint64_t seed);

}  // namespace flatlab
