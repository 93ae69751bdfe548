#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flatlab/errors.hpp"
#include "flatlab/rng.hpp"
#include "flatlab/sphere.hpp"

using namespace flatlab;

namespace {

SpherePoint axis(int dim, int k, double sign = 1.0) {
    Coords c(dim, 0.0);
    c[k] = sign;
    return SpherePoint{std::move(c)};
}

// Test-only oracle: dense scan of the two-sided deviation over a golden-spiral
// lattice on S^2.  Independent of midpoint_defect's search.
double grid_scan_defect(const SpherePoint& x, const SpherePoint& y, int count) {
    const double target = 0.5 * vec::dist(x.x, y.x);
    const double golden = M_PI * (std::sqrt(5.0) + 1.0);
    double best = 1e300;
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = golden * i;
        const Coords c{r * std::cos(th), r * std::sin(th), z};
        const double v = std::max(std::abs(vec::dist(x.x, c) - target),
                                  std::abs(vec::dist(y.x, c) - target));
        best = std::min(best, v);
    }
    return best;
}

}  // namespace

TEST_CASE("geodesic distance basics") {
    const auto e1 = axis(3, 0), e2 = axis(3, 1), me1 = axis(3, 0, -1.0);
    CHECK(geodesic_distance(e1, e1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(geodesic_distance(e1, me1) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(geodesic_distance(e1, e2) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK_THROWS_AS(geodesic_distance(SpherePoint{{2.0, 0.0, 0.0}}, e1), ValidationError);
    CHECK_THROWS_AS(sphere_point({1.0, 0.0}), ValidationError);  // m >= 2
}

TEST_CASE("chordal distance closed forms and ambient-norm oracle") {
    const auto e1 = axis(3, 0), e2 = axis(3, 1), me1 = axis(3, 0, -1.0);
    CHECK(chordal_distance(e1, me1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(chordal_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    Rng rng(42);
    double worst = 0.0, worst_id = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const SpherePoint x{rng.unit_vector(3)}, y{rng.unit_vector(3)};
        const double formula = chordal_distance(x, y);
        worst = std::max(worst, std::abs(formula - vec::dist(x.x, y.x)));
        // stated identity sqrt(2 - 2 cos d_S)
        const double ident = std::sqrt(2.0 - 2.0 * std::cos(geodesic_distance(x, y)));
        worst_id = std::max(worst_id, std::abs(formula - ident));
    }
    CHECK(worst <= 1e-12);
    CHECK(worst_id <= 1e-12);
}

TEST_CASE("metric axioms and biLipschitz comparison on random triples") {
    Rng rng(7);
    const Tolerances tol;
    for (int m : {2, 3}) {
        for (int i = 0; i < 400; ++i) {
            const SpherePoint a{rng.unit_vector(m + 1)}, b{rng.unit_vector(m + 1)},
                c{rng.unit_vector(m + 1)};
            for (auto dist : {geodesic_distance, chordal_distance}) {
                const double ab = dist(a, b), ba = dist(b, a), ac = dist(a, c), cb = dist(c, b);
                CHECK(ab >= 0.0);
                CHECK(std::abs(ab - ba) <= tol.metric_axiom);
                CHECK(ab <= ac + cb + tol.metric_axiom);
                CHECK(dist(a, a) <= tol.metric_axiom);
            }
            const double ds = geodesic_distance(a, b), de = chordal_distance(a, b);
            CHECK(de <= ds + 1e-14);
            CHECK(ds <= (M_PI / 2) * de + 1e-14);
        }
    }
}

TEST_CASE("polyline length") {
    const auto e1 = axis(3, 0), e2 = axis(3, 1);
    SUBCASE("two vertices give the pairwise distance") {
        SpherePolyline c{{e1, e2}};
        CHECK(polyline_length(c, CurveMetric::geodesic) == doctest::Approx(M_PI / 2));
        CHECK(polyline_length(c, CurveMetric::chordal) == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("repeated point has zero length, single vertex is degenerate 0") {
        SpherePolyline c{{e1, e1, e1}};
        CHECK(polyline_length(c, CurveMetric::chordal) == 0.0);
        CHECK(polyline_length(SpherePolyline{{e1}}, CurveMetric::geodesic) == 0.0);
        CHECK_THROWS_AS(polyline_length(SpherePolyline{}, CurveMetric::geodesic),
                        ValidationError);
    }
    SUBCASE("chordal refinement of a geodesic arc increases toward the arc length") {
        const double arc = M_PI / 2;
        double prev = 0.0;
        for (int k : {2, 4, 8, 16, 32}) {
            SpherePolyline c;
            for (int i = 0; i <= k; ++i) {
                const double t = arc * i / k;
                c.vertices.push_back(SpherePoint{{std::cos(t), std::sin(t), 0.0}});
            }
            const double len = polyline_length(c, CurveMetric::chordal);
            CHECK(len > prev);
            CHECK(len <= arc + 1e-12);
            CHECK(len >= chordal_distance(c.vertices.front(), c.vertices.back()) - 1e-12);
            prev = len;
        }
        CHECK(prev == doctest::Approx(arc).epsilon(1e-3));
    }
}

TEST_CASE("midpoint defect matches the independent grid oracle") {
    const auto e1 = axis(3, 0), me1 = axis(3, 0, -1.0);
    SUBCASE("coincident points") { CHECK(midpoint_defect(e1, e1) == 0.0); }
    SUBCASE("antipodal pair") {
        const double impl = midpoint_defect(e1, me1);
        const double oracle = grid_scan_defect(e1, me1, 400000);
        CHECK(std::abs(impl - (std::sqrt(2.0) - 1.0)) <= 1e-3);
        CHECK(std::abs(oracle - (std::sqrt(2.0) - 1.0)) <= 1e-3);
        CHECK(std::abs(impl - oracle) <= 1e-3);
    }
    SUBCASE("right angle pair") {
        const auto e2 = axis(3, 1);
        const double impl = midpoint_defect(e1, e2);
        const double oracle = grid_scan_defect(e1, e2, 400000);
        // candidate closed form 2 sin(theta/4) - sin(theta/2), confirmed by the oracle
        const double closed = 2.0 * std::sin(M_PI / 8) - std::sin(M_PI / 4);
        CHECK(std::abs(oracle - closed) <= 1e-3);
        CHECK(std::abs(impl - oracle) <= 1e-3);
        CHECK(impl == doctest::Approx(0.0583).epsilon(2e-2));
    }
    SUBCASE("positivity across separated random pairs") {
        Rng rng(99);
        int tested = 0;
        while (tested < 200) {
            const SpherePoint x{rng.unit_vector(3)}, y{rng.unit_vector(3)};
            if (geodesic_distance(x, y) < 0.1) continue;
            ++tested;
            CHECK(midpoint_defect(x, y, 24) > 0.0);
        }
    }
    SUBCASE("works in higher ambient dimension") {
        const auto a = axis(4, 0), b = axis(4, 1);
        const double impl = midpoint_defect(a, b);
        const double closed = 2.0 * std::sin(M_PI / 8) - std::sin(M_PI / 4);
        CHECK(std::abs(impl - closed) <= 5e-3);
    }
}

TEST_CASE("tangent frames and geodesic steps") {
    Rng rng(5);
    for (int m : {2, 3, 4}) {
        const SpherePoint p{rng.unit_vector(m + 1)};
        const auto frame = tangent_frame(p);
        REQUIRE(static_cast<int>(frame.size()) == m);
        for (std::size_t i = 0; i < frame.size(); ++i) {
            CHECK(std::abs(vec::dot(frame[i], p.x)) <= 1e-12);
            CHECK(vec::norm(frame[i]) == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t j = i + 1; j < frame.size(); ++j)
                CHECK(std::abs(vec::dot(frame[i], frame[j])) <= 1e-12);
        }
        const auto q = geodesic_step(p, frame[0], 0.3);
        CHECK(geodesic_distance(p, q) == doctest::Approx(0.3).epsilon(1e-12));
    }
}

TEST_CASE("sphere and cap areas") {
    CHECK(sphere_area(1) == doctest::Approx(2 * M_PI).epsilon(1e-12));
    CHECK(sphere_area(2) == doctest::Approx(4 * M_PI).epsilon(1e-12));
    CHECK(sphere_area(3) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-12));
    // S^2 cap: 2 pi (1 - cos r)
    for (double r : {0.3, 0.8, 1.6, M_PI}) {
        CHECK(cap_area(2, r) == doctest::Approx(2 * M_PI * (1 - std::cos(r))).epsilon(1e-9));
    }
    CHECK(cap_area(2, M_PI) == doctest::Approx(sphere_area(2)).epsilon(1e-9));
}
