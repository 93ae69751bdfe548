#include "flatlab/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flatlab/errors.hpp"

namespace flatlab {

double HybridMetric::edge_weight(int a, int b) const {
    double w = sphere_dist.empty()
                   ? vec::geodesic_unit(nodes[a].x, nodes[b].x)
                   : sphere_dist[static_cast<std::size_t>(a) * nodes.size() + b];
    if (partner[a] == b) w = std::min(w, partner_length[a]);
    return w;
}

HybridMetric build_metric(const ThreadSystem& threads) {
    HybridMetric hm;
    hm.threads = threads;
    const int n = threads.count();
    if (n >= 2) {
        hm.nodes = threads.endpoints.points;
        const int v = hm.node_count();
        hm.partner.assign(v, -1);
        hm.partner_length.assign(v, 0.0);
        for (const auto& t : threads.pairs) {
            const int a = threads.endpoints.index(t.i, t.j);
            const int b = threads.endpoints.index(t.j, t.i);
            hm.partner[a] = b;
            hm.partner[b] = a;
            hm.partner_length[a] = t.length;
            hm.partner_length[b] = t.length;
        }
        if (v <= kDenseNodeLimit) {
            hm.sphere_dist.assign(static_cast<std::size_t>(v) * v, 0.0);
            for (int a = 0; a < v; ++a)
                for (int b = a + 1; b < v; ++b) {
                    const double d = vec::geodesic_unit(hm.nodes[a].x, hm.nodes[b].x);
                    hm.sphere_dist[static_cast<std::size_t>(a) * v + b] = d;
                    hm.sphere_dist[static_cast<std::size_t>(b) * v + a] = d;
                }
        }
    }
    return hm;
}

namespace {

// Dense Dijkstra over the endpoint graph from a virtual source at x.
// Returns the settled distance array over endpoint nodes.
std::vector<double> sweep_from(const HybridMetric& hm, const SpherePoint& x) {
    const int v = hm.node_count();
    std::vector<double> dist(v);
    std::vector<char> done(v, 0);
    for (int a = 0; a < v; ++a) dist[a] = vec::geodesic_unit(x.x, hm.nodes[a].x);
    for (int iter = 0; iter < v; ++iter) {
        int u = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < v; ++a)
            if (!done[a] && dist[a] < best) {
                best = dist[a];
                u = a;
            }
        if (u < 0) break;
        done[u] = 1;
        for (int b = 0; b < v; ++b) {
            if (done[b]) continue;
            const double cand = dist[u] + hm.edge_weight(u, b);
            if (cand < dist[b]) dist[b] = cand;
        }
    }
    return dist;
}

}  // namespace

double distance(const HybridMetric& metric, const SpherePoint& x, const SpherePoint& y) {
    require_on_sphere(x);
    require_on_sphere(y);
    if (x.ambient_dim() != metric.threads.m() + 1 && metric.node_count() > 0)
        throw ValidationError("query dimension does not match the thread system");
    double best = vec::geodesic_unit(x.x, y.x);
    if (metric.node_count() == 0) return best;
    const auto dist = sweep_from(metric, x);
    for (int a = 0; a < metric.node_count(); ++a)
        best = std::min(best, dist[a] + vec::geodesic_unit(metric.nodes[a].x, y.x));
    return best;
}

std::vector<double> distance_batch(const HybridMetric& metric, const SpherePoint& x,
                                   std::span<const SpherePoint> targets) {
    require_on_sphere(x);
    std::vector<double> out;
    out.reserve(targets.size());
    if (metric.node_count() == 0) {
        for (const auto& t : targets) out.push_back(vec::geodesic_unit(x.x, t.x));
        return out;
    }
    const auto dist = sweep_from(metric, x);
    for (const auto& t : targets) {
        require_on_sphere(t);
        double best = vec::geodesic_unit(x.x, t.x);
        for (int a = 0; a < metric.node_count(); ++a)
            best = std::min(best, dist[a] + vec::geodesic_unit(metric.nodes[a].x, t.x));
        out.push_back(best);
    }
    return out;
}

namespace {

struct BruteState {
    const ThreadSystem* ts;
    const SpherePoint* y;
    std::vector<std::pair<const SpherePoint*, const SpherePoint*>> ends;  // (entry, exit)
    std::vector<double> lengths;
    double best;
};

void brute_rec(BruteState& st, const Coords& at, unsigned used, double len) {
    if (len >= st.best) return;
    const double direct = len + vec::geodesic_unit(at, st.y->x);
    if (direct < st.best) st.best = direct;
    const std::size_t k = st.lengths.size();
    for (std::size_t t = 0; t < k; ++t) {
        if (used & (1u << t)) continue;
        for (int orient = 0; orient < 2; ++orient) {
            const SpherePoint* in = orient ? st.ends[t].second : st.ends[t].first;
            const SpherePoint* outp = orient ? st.ends[t].first : st.ends[t].second;
            const double next = len + vec::geodesic_unit(at, in->x) + st.lengths[t];
            if (next < st.best) brute_rec(st, outp->x, used | (1u << t), next);
        }
    }
}

}  // namespace

double brute_force_distance(const ThreadSystem& threads, const SpherePoint& x,
                            const SpherePoint& y) {
    require_on_sphere(x);
    require_on_sphere(y);
    if (threads.thread_count() > 8)
        throw CapacityError("brute_force_distance enumerates thread sequences; limited to 8 "
                            "threads, got " +
                            std::to_string(threads.thread_count()));
    BruteState st;
    st.ts = &threads;
    st.y = &y;
    for (const auto& t : threads.pairs) {
        st.ends.emplace_back(&threads.endpoints.at(t.i, t.j), &threads.endpoints.at(t.j, t.i));
        st.lengths.push_back(t.length);
    }
    st.best = vec::geodesic_unit(x.x, y.x);
    brute_rec(st, x.x, 0u, 0.0);
    return st.best;
}

}  // namespace flatlab
