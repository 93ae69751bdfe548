#include "flatlab/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flatlab/errors.hpp"
#include "flatlab/rng.hpp"

namespace flatlab {

namespace {

// Flat row-major buffer of unit vectors; avoids per-point allocations in the
// large candidate pools.
struct FlatPoints {
    std::vector<double> data;
    int dim = 0;
    std::size_t size() const { return dim ? data.size() / dim : 0; }
    std::span<const double> operator[](std::size_t i) const {
        return {data.data() + i * dim, static_cast<std::size_t>(dim)};
    }
};

FlatPoints sample_pool(int ambient_dim, std::size_t count, Rng& rng) {
    FlatPoints pts;
    pts.dim = ambient_dim;
    pts.data.resize(count * ambient_dim);
    for (std::size_t i = 0; i < count; ++i) {
        const auto v = rng.unit_vector(ambient_dim);
        std::copy(v.begin(), v.end(), pts.data.begin() + i * ambient_dim);
    }
    return pts;
}

}  // namespace

Net build_net(int m, double eps, std::uint64_t seed, const NetOptions& opts) {
    if (m < 2) throw ValidationError("net dimension must satisfy m >= 2");
    if (!(eps > 0.0) || !(eps < M_PI))
        throw ValidationError("net scale must lie in (0, pi), got " + std::to_string(eps));

    const int dim = m + 1;
    const double sep = 2.0 * eps;
    const double pool_sz =
        opts.pool_factor * sphere_area(m) / std::max(cap_area(m, std::min(sep, M_PI)), 1e-12);
    const std::size_t pool_count =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(pool_sz)), 64, opts.max_pool);

    Rng pool_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const FlatPoints pool = sample_pool(dim, pool_count, pool_rng);

    std::vector<double> centers;  // flat
    auto center = [&](std::size_t i) {
        return std::span<const double>{centers.data() + i * dim, static_cast<std::size_t>(dim)};
    };
    auto center_count = [&] { return centers.size() / dim; };
    auto min_dist_to_centers = [&](std::span<const double> p) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < center_count(); ++c)
            best = std::min(best, vec::geodesic_unit(p, center(c)));
        return best;
    };
    auto push_center = [&](std::span<const double> p) {
        centers.insert(centers.end(), p.begin(), p.end());
    };

    // Farthest-point traversal of the pool.
    std::vector<double> mind(pool.size(), std::numeric_limits<double>::infinity());
    push_center(pool[0]);
    for (std::size_t i = 0; i < pool.size(); ++i) mind[i] = vec::geodesic_unit(pool[i], center(0));
    while (true) {
        std::size_t arg = 0;
        double far = -1.0;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (mind[i] > far) {
                far = mind[i];
                arg = i;
            }
        if (far <= sep) break;
        push_center(pool[arg]);
        const auto c = center(center_count() - 1);
        for (std::size_t i = 0; i < pool.size(); ++i)
            mind[i] = std::min(mind[i], vec::geodesic_unit(pool[i], c));
    }

    // Repair rounds: any fresh sample farther than 2 eps from all centers is
    // itself a legal center, so inserting it preserves packing and shrinks the
    // uncovered region.  Stop after several consecutive clean rounds.
    Rng repair_rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
    int clean = 0;
    for (int round = 0; round < opts.max_repair_rounds && clean < opts.clean_rounds_required;
         ++round) {
        std::size_t inserted = 0;
        std::vector<double> buf(dim);
        for (std::size_t i = 0; i < opts.repair_sample; ++i) {
            const auto v = repair_rng.unit_vector(dim);
            std::copy(v.begin(), v.end(), buf.begin());
            if (min_dist_to_centers(buf) > sep) {
                push_center(buf);
                ++inserted;
            }
        }
        clean = inserted == 0 ? clean + 1 : 0;
    }
    if (clean < opts.clean_rounds_required)
        throw ConstructionError("net repair did not converge for eps = " + std::to_string(eps));

    Net net;
    net.m = m;
    net.eps = eps;
    net.seed = seed;
    net.centers.reserve(center_count());
    for (std::size_t c = 0; c < center_count(); ++c) {
        const auto s = center(c);
        net.centers.push_back(SpherePoint{Coords(s.begin(), s.end())});
    }

    // Packing holds by construction; verify anyway.
    if (net.count() >= 2 && min_pairwise_separation(net) <= sep)
        throw InvariantViolation("net packing violated (separation <= 2 eps)");
    return net;
}

double min_pairwise_separation(const Net& net) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < net.count(); ++i)
        for (int j = i + 1; j < net.count(); ++j)
            best = std::min(best, vec::geodesic_unit(net.centers[i].x, net.centers[j].x));
    return best;
}

double sampled_covering_radius(const Net& net, std::size_t samples, std::uint64_t seed) {
    if (net.count() == 0) throw ValidationError("empty net");
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto p = rng.unit_vector(net.m + 1);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : net.centers) best = std::min(best, vec::geodesic_unit(p, c.x));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace flatlab
