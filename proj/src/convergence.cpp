#include "flatlab/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "flatlab/errors.hpp"
#include "flatlab/rng.hpp"

namespace flatlab {

std::vector<PairSample> sample_pairs(int m, std::size_t count, std::uint64_t seed) {
    if (m < 2) throw ValidationError("sample_pairs needs m >= 2");
    Rng rng(seed);
    std::vector<PairSample> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        PairSample p;
        p.x = SpherePoint{rng.unit_vector(m + 1)};
        p.y = SpherePoint{rng.unit_vector(m + 1)};
        pairs.push_back(std::move(p));
    }
    return pairs;
}

double deviation_over_pairs(const HybridMetric& metric, std::span<const PairSample> pairs) {
    double sup = 0.0;
    for (const auto& p : pairs) {
        const double dy = distance(metric, p.x, p.y);
        const double de = vec::chordal_unit(p.x.x, p.y.x);
        sup = std::max(sup, dy - de);
    }
    return sup;
}

double uniform_deviation(const HybridMetric& metric, std::size_t sample_size,
                         std::uint64_t seed) {
    if (sample_size < 1) throw ValidationError("uniform_deviation needs sample_size >= 1");
    const int m = metric.node_count() > 0 ? metric.threads.m()
                                          : metric.threads.endpoints.net.m;
    const auto pairs = sample_pairs(m, sample_size, seed);
    return deviation_over_pairs(metric, pairs);
}

RatioStats lipschitz_ratios(const HybridMetric& metric, std::size_t sample_size,
                            std::uint64_t seed) {
    const int m = metric.threads.endpoints.net.m;
    const auto pairs = sample_pairs(m, sample_size, seed);
    RatioStats st;
    st.min_ratio = std::numeric_limits<double>::infinity();
    st.max_ratio = 0.0;
    for (const auto& p : pairs) {
        const double de = vec::chordal_unit(p.x.x, p.y.x);
        if (de == 0.0) {
            ++st.skipped;
            continue;
        }
        const double ratio = distance(metric, p.x, p.y) / de;
        st.min_ratio = std::min(st.min_ratio, ratio);
        st.max_ratio = std::max(st.max_ratio, ratio);
    }
    return st;
}

double near_diagonal_max_ratio(const HybridMetric& metric, std::size_t sample_size,
                               std::uint64_t seed) {
    const int m = metric.threads.endpoints.net.m;
    const double rho = metric.threads.rho;
    if (!(rho > 0.0)) throw ValidationError("near-diagonal sampling needs rho > 0");
    Rng rng(seed);
    double worst = 0.0;
    std::size_t accepted = 0;
    std::size_t guard = 0;
    while (accepted < sample_size && guard < 200 * sample_size + 1000) {
        ++guard;
        SpherePoint x{rng.unit_vector(m + 1)};
        const auto frame = tangent_frame(x);
        Coords y = x.x;
        for (const auto& dir : frame) {
            const double g = rng.normal() * (rho / 2.0);
            for (int kxy = 0; kxy <= m; ++kxy) y[kxy] += g * dir[kxy];
        }
        vec::normalize(y);
        SpherePoint yp{std::move(y)};
        const double de = vec::chordal_unit(x.x, yp.x);
        if (de <= 0.0 || de >= rho) continue;
        ++accepted;
        worst = std::max(worst, distance(metric, x, yp) / de);
    }
    return worst;
}

bool small_angle_check(double rho) {
    if (!(rho > 0.0)) throw ValidationError("small_angle_check needs rho > 0");
    const int grid = 10000;
    for (int i = 1; i <= grid; ++i) {
        const double r = rho * i / grid;
        if (r * r / 100.0 > 2.0 - 2.0 * std::cos(r)) return false;
    }
    return true;
}

double gh_sample_estimate(std::span<const double> dist_a, std::span<const double> dist_b) {
    if (dist_a.size() != dist_b.size())
        throw ValidationError("gh_sample_estimate needs matching samples");
    double sup = 0.0;
    for (std::size_t i = 0; i < dist_a.size(); ++i)
        sup = std::max(sup, std::abs(dist_a[i] - dist_b[i]));
    return 0.5 * sup;
}

ConvergenceReport run_convergence_suite(const SuiteConfig& config) {
    if (config.m < 2) throw ValidationError("suite needs m >= 2");
    if (config.schedule.empty()) throw ValidationError("suite needs a schedule");
    for (std::size_t i = 1; i < config.schedule.size(); ++i)
        if (!(config.schedule[i] < config.schedule[i - 1]))
            throw ValidationError("schedule must be strictly decreasing");
    if (config.sample_size < 1) throw ValidationError("suite needs sample_size >= 1");
    if (config.seeds.empty()) throw ValidationError("suite needs at least one seed");

    ConvergenceReport report;
    report.config = config;
    for (std::size_t idx = 0; idx < config.schedule.size(); ++idx) {
        EpsRecord rec;
        rec.eps = config.schedule[idx];
        rec.seed = config.seeds[idx % config.seeds.size()];
        rec.sample_size = config.sample_size;
        const auto start = std::chrono::steady_clock::now();
        try {
            const Net net = build_net(config.m, rec.eps, rec.seed, config.net);
            const ThreadSystem ts = build_threads(place_endpoints(net));
            const HybridMetric metric = build_metric(ts);
            rec.n = net.count();
            rec.k = ts.thread_count();

            const auto pairs = sample_pairs(config.m, config.sample_size, rec.seed ^ 0xabcdefULL);
            double sup = 0.0, min_ratio = std::numeric_limits<double>::infinity(),
                   max_ratio = 0.0;
            std::size_t skipped = 0;
            for (const auto& p : pairs) {
                const double dy = distance(metric, p.x, p.y);
                const double de = vec::chordal_unit(p.x.x, p.y.x);
                sup = std::max(sup, dy - de);
                if (de == 0.0) {
                    ++skipped;
                    continue;
                }
                min_ratio = std::min(min_ratio, dy / de);
                max_ratio = std::max(max_ratio, dy / de);
            }
            rec.sup_deviation = sup;
            rec.min_ratio = min_ratio;
            rec.max_ratio = max_ratio;
            rec.skipped_pairs = skipped;
            rec.gh_estimate = 0.5 * sup;  // identity correspondence on the shared sample
            rec.near_diag_max_ratio =
                ts.thread_count() > 0
                    ? near_diagonal_max_ratio(metric, std::max<std::size_t>(config.sample_size / 4, 1),
                                              rec.seed ^ 0x1234567ULL)
                    : 1.0;
            rec.twelve_eps_ok = sup <= 12.0 * rec.eps;
            rec.lambda_ok = max_ratio <= 13.0 && min_ratio >= 1.0 - 1e-10;
            rec.small_angle_ok = small_angle_check(ts.rho);

            if (ts.thread_count() > 0) {
                IteratedOptions iopts;
                iopts.rho0_factor = config.rho0_factor;
                const IteratedBudget budget = iterated_budget(ts, iopts);
                rec.dF_budget = budget.total_dF;
                rec.dGH_budget = budget.total_dGH;
            }
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        report.per_eps.push_back(std::move(rec));
    }
    return report;
}

}  // namespace flatlab
