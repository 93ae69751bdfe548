#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flatlab/convergence.hpp"
#include "flatlab/errors.hpp"
#include "flatlab/rng.hpp"

using namespace flatlab;

namespace {

HybridMetric pure_sphere_metric(int m = 2) {
    ThreadSystem ts;
    ts.endpoints.net.m = m;
    ts.endpoints.net.eps = 1.6;
    ts.endpoints.net.centers = {sphere_point(m == 2 ? Coords{0.0, 0.0, 1.0}
                                                    : Coords{0.0, 0.0, 0.0, 1.0})};
    ts.rho = 1.6;
    return build_metric(ts);
}

}  // namespace

TEST_CASE("deviation of the bare sphere at antipodal pairs is pi - 2") {
    const HybridMetric hm = pure_sphere_metric();
    std::vector<PairSample> pairs;
    pairs.push_back({sphere_point({1.0, 0.0, 0.0}), sphere_point({-1.0, 0.0, 0.0})});
    pairs.push_back({sphere_point({0.0, 1.0, 0.0}), sphere_point({0.0, -1.0, 0.0})});
    CHECK(deviation_over_pairs(hm, pairs) == doctest::Approx(M_PI - 2.0).epsilon(1e-12));
    // random pairs stay below the antipodal extreme
    CHECK(uniform_deviation(hm, 3000, 5) <= M_PI - 2.0 + 1e-12);
    CHECK(uniform_deviation(hm, 3000, 5) > 0.5);
}

TEST_CASE("lipschitz ratios of the bare sphere live in [1, pi/2]") {
    const HybridMetric hm = pure_sphere_metric();
    const RatioStats st = lipschitz_ratios(hm, 4000, 9);
    CHECK(st.min_ratio >= 1.0 - 1e-12);
    CHECK(st.max_ratio <= M_PI / 2 + 1e-12);
    CHECK(st.max_ratio > 1.3);  // near-antipodal pairs approach pi/2
    CHECK(st.skipped == 0);
}

TEST_CASE("small angle inequality grid check") {
    CHECK(small_angle_check(0.01));
    CHECK(small_angle_check(1.0));
    CHECK(small_angle_check(M_PI));
    CHECK_FALSE(small_angle_check(20.0));
    CHECK_FALSE(small_angle_check(15.0));
    CHECK_THROWS_AS(small_angle_check(0.0), ValidationError);
}

TEST_CASE("gh sample estimate") {
    SUBCASE("identical metrics give zero") {
        const std::vector<double> d{1.0, 0.2, 2.7};
        CHECK(gh_sample_estimate(d, d) == 0.0);
    }
    SUBCASE("two-point spaces: brute force over correspondences") {
        // X = {x1, x2} at distance 1, Y = {y1, y2} at distance 2.
        // Correspondences are subsets of X x Y covering both sides; the
        // distortion-optimal one is a bijection with distortion 1.
        const double dX = 1.0, dY = 2.0;
        double best = 1e300;
        // enumerate nonempty relations on the 4 pairs
        for (int mask = 1; mask < 16; ++mask) {
            bool cover_x1 = false, cover_x2 = false, cover_y1 = false, cover_y2 = false;
            std::vector<std::pair<int, int>> rel;
            for (int b = 0; b < 4; ++b)
                if (mask & (1 << b)) {
                    const int xi = b / 2, yi = b % 2;
                    rel.emplace_back(xi, yi);
                    (xi == 0 ? cover_x1 : cover_x2) = true;
                    (yi == 0 ? cover_y1 : cover_y2) = true;
                }
            if (!(cover_x1 && cover_x2 && cover_y1 && cover_y2)) continue;
            double dis = 0.0;
            for (const auto& [x1, y1] : rel)
                for (const auto& [x2, y2] : rel) {
                    const double dx = x1 == x2 ? 0.0 : dX;
                    const double dy = y1 == y2 ? 0.0 : dY;
                    dis = std::max(dis, std::abs(dx - dy));
                }
            best = std::min(best, dis);
        }
        CHECK(0.5 * best == doctest::Approx(0.5));
        // the identity-correspondence estimator reproduces it on a shared sample
        const std::vector<double> da{dX}, db{dY};
        CHECK(gh_sample_estimate(da, db) == doctest::Approx(0.5));
    }
    SUBCASE("estimator equals half the sup deviation by definition") {
        const HybridMetric hm = pure_sphere_metric();
        const auto pairs = sample_pairs(2, 500, 17);
        std::vector<double> dy, de;
        for (const auto& p : pairs) {
            dy.push_back(distance(hm, p.x, p.y));
            de.push_back(chordal_distance(p.x, p.y));
        }
        // for the bare sphere d_Y >= d_E always, so sup |.| = sup (.)
        CHECK(gh_sample_estimate(dy, de) ==
              doctest::Approx(0.5 * deviation_over_pairs(hm, pairs)).epsilon(1e-12));
    }
}

TEST_CASE("near-diagonal ratios stay below the small-angle bound") {
    const Net net = build_net(2, 0.5, 21);
    const ThreadSystem ts = build_threads(place_endpoints(net));
    const HybridMetric hm = build_metric(ts);
    const double worst = near_diagonal_max_ratio(hm, 400, 33);
    CHECK(worst >= 1.0 - 1e-12);
    CHECK(worst <= 10.0);
    CHECK(worst <= M_PI / 2 + 1e-12);
}

TEST_CASE("suite validation") {
    SuiteConfig cfg;
    cfg.schedule = {0.5, 0.7};
    cfg.seeds = {1};
    CHECK_THROWS_AS(run_convergence_suite(cfg), ValidationError);
    cfg.schedule = {};
    CHECK_THROWS_AS(run_convergence_suite(cfg), ValidationError);
    cfg.schedule = {0.5};
    cfg.sample_size = 0;
    CHECK_THROWS_AS(run_convergence_suite(cfg), ValidationError);
}

TEST_CASE("single-eps suite with a forced bare sphere") {
    SuiteConfig cfg;
    cfg.m = 2;
    cfg.schedule = {1.6};  // 2 eps > pi forces N = 1
    cfg.seeds = {3};
    cfg.sample_size = 400;
    const ConvergenceReport rep = run_convergence_suite(cfg);
    REQUIRE(rep.per_eps.size() == 1);
    const auto& r = rep.per_eps[0];
    CHECK(r.ok);
    CHECK(r.n == 1);
    CHECK(r.k == 0);
    CHECK(r.sup_deviation <= M_PI - 2.0 + 1e-12);
    CHECK(r.min_ratio >= 1.0 - 1e-10);
    CHECK(r.max_ratio <= M_PI / 2 + 1e-12);
    CHECK(r.twelve_eps_ok);
    CHECK(r.lambda_ok);
    CHECK(r.dF_budget == 0.0);  // no threads to replace
    CHECK(r.gh_estimate == doctest::Approx(0.5 * r.sup_deviation));
}

TEST_CASE("acceptance-style schedule on S^2") {
    SuiteConfig cfg;
    cfg.m = 2;
    cfg.schedule = {0.7, 0.5, 0.35};
    cfg.seeds = {11, 12, 13};
    cfg.sample_size = 800;
    const ConvergenceReport rep = run_convergence_suite(cfg);
    REQUIRE(rep.per_eps.size() == 3);
    for (const auto& r : rep.per_eps) {
        REQUIRE(r.ok);
        CHECK(r.sup_deviation <= 12.0 * r.eps);
        CHECK(r.twelve_eps_ok);
        CHECK(r.lambda_ok);
        CHECK(r.small_angle_ok);
        CHECK(r.min_ratio >= 1.0 - 1e-10);
        CHECK(r.max_ratio <= 13.0);
        CHECK(r.near_diag_max_ratio <= 10.0);
        CHECK(r.gh_estimate <= 6.0 * r.eps);
        CHECK(r.dF_budget > 0.0);
        CHECK(r.dGH_budget > 0.0);
    }
}

TEST_CASE("sup deviation is stable across seeds") {
    std::vector<double> values;
    for (std::uint64_t seed : {101u, 202u, 303u}) {
        SuiteConfig cfg;
        cfg.m = 2;
        cfg.schedule = {0.5};
        cfg.seeds = {seed};
        cfg.sample_size = 2000;
        const ConvergenceReport rep = run_convergence_suite(cfg);
        REQUIRE(rep.per_eps[0].ok);
        values.push_back(rep.per_eps[0].sup_deviation);
    }
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    CHECK((hi - lo) / hi < 0.2);
}
