#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flatlab/budget.hpp"
#include "flatlab/hybrid.hpp"

namespace flatlab {

struct PairSample {
    SpherePoint x, y;
};

/// Seeded uniform point pairs on S^m.
std::vector<PairSample> sample_pairs(int m, std::size_t count, std::uint64_t seed);

/// max over the pairs of (hybrid distance - chordal distance); >= 0 up to
/// rounding since threads only shorten sphere travel.
double deviation_over_pairs(const HybridMetric& metric, std::span<const PairSample> pairs);

/// Same with a fresh seeded sample.
double uniform_deviation(const HybridMetric& metric, std::size_t sample_size, std::uint64_t seed);

struct RatioStats {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t skipped = 0;  ///< coincident pairs skipped
};

/// Extremes of hybrid/chordal over a seeded sample (coincident pairs skipped
/// and counted).
RatioStats lipschitz_ratios(const HybridMetric& metric, std::size_t sample_size,
                            std::uint64_t seed);

/// Max ratio over pairs conditioned on chordal distance < rho of the system
/// (tangent Gaussian perturbations of scale rho/2).
double near_diagonal_max_ratio(const HybridMetric& metric, std::size_t sample_size,
                               std::uint64_t seed);

/// Checks r^2/100 <= 2 - 2 cos r on a 10^4-point grid of [0, rho].
bool small_angle_check(double rho);

/// Half the sup distortion of the identity correspondence between two metrics
/// evaluated on a shared sample; upper-bounds the Gromov-Hausdorff distance of
/// the sampled submetrics.
double gh_sample_estimate(std::span<const double> dist_a, std::span<const double> dist_b);

struct EpsRecord {
    double eps = 0.0;
    int n = 0, k = 0;
    double sup_deviation = 0.0;
    double max_ratio = 0.0, min_ratio = 0.0, near_diag_max_ratio = 0.0;
    bool twelve_eps_ok = false, lambda_ok = false, small_angle_ok = false;
    double gh_estimate = 0.0;
    double dF_budget = 0.0, dGH_budget = 0.0;
    std::size_t sample_size = 0, skipped_pairs = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    bool ok = true;
    std::string error;
};

struct SuiteConfig {
    int m = 2;
    std::vector<double> schedule;        ///< strictly decreasing
    std::vector<std::uint64_t> seeds;    ///< per schedule entry (cycled if shorter)
    std::size_t sample_size = 2000;
    double rho0_factor = 0.5;
    NetOptions net;
};

struct ConvergenceReport {
    SuiteConfig config;
    std::vector<EpsRecord> per_eps;
};

/// Full pipeline per schedule entry: net -> endpoints -> threads -> metric,
/// sampled statistics, gate booleans, iterated budgets.  Per-entry
/// construction failures are recorded and the suite continues.
ConvergenceReport run_convergence_suite(const SuiteConfig& config);

}  // namespace flatlab
