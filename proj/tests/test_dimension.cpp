#include "dynid/catalog.hpp"
#include "dynid/dimension.hpp"
#include "dynid/integrate.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace dynid;

TEST_SUITE_BEGIN("dimension");

namespace {

std::vector<double> box_schedule() { return geometric_schedule(0.5, 0.5 / 128.0, 8); }
std::vector<double> corr_schedule() { return geometric_schedule(1.0, 0.01, 10); }

// Low-discrepancy product set circle x interval embedded in R^3. The two
// lattice generators must be rationally independent or the points collapse
// onto a curve.
std::vector<Vec> circle_cross_interval(std::size_t n) {
    std::vector<Vec> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * std::fmod(std::sqrt(2.0) * static_cast<double>(i), 1.0);
        const double z = std::fmod(std::sqrt(3.0) * static_cast<double>(i), 1.0);
        Vec p(3);
        p << std::cos(th), std::sin(th), 2.0 * z - 1.0;
        pts.push_back(p);
    }
    return pts;
}

}  // namespace

TEST_CASE("box counting: circle is one-dimensional") {
    const auto est = box_counting_dimension(oracles::circle_points(100000), box_schedule());
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.05));
    CHECK(est.r2 > 0.99);
}

TEST_CASE("box counting: uniform square is two-dimensional") {
    const auto pts = oracles::uniform_box(1000000, 2, -1.0, 1.0, 17);
    const auto est = box_counting_dimension(pts, box_schedule());
    CHECK(est.value == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("correlation: circle and cube hit their dimensions") {
    const auto circ = correlation_dimension(oracles::circle_points(30000), corr_schedule());
    CHECK(circ.value == doctest::Approx(1.0).epsilon(0.05));

    const auto cube_pts = oracles::uniform_box(30000, 3, -1.0, 1.0, 23);
    const auto cube = correlation_dimension(cube_pts, corr_schedule());
    CHECK(std::abs(cube.value - 3.0) < 0.1);
}

TEST_CASE("product property: dim(circle x interval) = dim(circle) + dim(interval)") {
    const auto est = box_counting_dimension(circle_cross_interval(200000), box_schedule());
    CHECK(std::abs(est.value - 2.0) < 0.15);
}

TEST_CASE("degenerate point sets") {
    std::vector<Vec> same(20000, Vec::Zero(2));
    const auto est = box_counting_dimension(same, box_schedule());
    CHECK(est.value == 0.0);
    CHECK(est.degenerate_warning);
    CHECK_THROWS_AS(correlation_dimension(same, corr_schedule()), DegenerateInputError);
}

TEST_CASE("input validation") {
    const auto few = oracles::circle_points(100);
    CHECK_THROWS_AS(box_counting_dimension(few, box_schedule()), ValidationError);
    const auto pts = oracles::circle_points(20000);
    CHECK_THROWS_AS(box_counting_dimension(pts, {0.5, 0.25}), ValidationError);
    CHECK_THROWS_AS(box_counting_dimension(pts, {0.5, 0.25, 0.3, 0.2, 0.1, 0.05}),
                    ValidationError);
}

TEST_CASE("affine rescaling leaves estimates and verdicts unchanged") {
    const auto pts = circle_cross_interval(50000);
    std::vector<Vec> scaled;
    Vec a(3), b(3);
    a << 3.0, 0.5, 7.0;
    b << 1.0, -2.0, 0.3;
    scaled.reserve(pts.size());
    for (const auto& p : pts) scaled.push_back(a.cwiseProduct(p) + b);

    const auto e1 = box_counting_dimension(pts, box_schedule());
    const auto e2 = box_counting_dimension(scaled, box_schedule());
    CHECK(std::abs(e1.value - e2.value) < 0.05);

    // Verdict stability away from the decision boundary: a full-measure cube
    // (clear pass at margin 0.1) and a circle (clear fail).
    const auto cube = oracles::uniform_box(50000, 3, -1.0, 1.0, 12);
    std::vector<Vec> cube_scaled;
    for (const auto& p : cube) cube_scaled.push_back(a.cwiseProduct(p) + b);
    const auto c1 = dimension_criterion(box_counting_dimension(cube, box_schedule()), 3, 0.1);
    const auto c2 =
        dimension_criterion(box_counting_dimension(cube_scaled, box_schedule()), 3, 0.1);
    CHECK(c1.verdict == CriterionVerdict::uniqueness_evidence);
    CHECK(c1.verdict == c2.verdict);

    const auto circ = oracles::circle_points(20000);
    std::vector<Vec> circ_scaled;
    Vec a2(2), b2(2);
    a2 << 5.0, 0.25;
    b2 << -1.0, 2.0;
    for (const auto& p : circ) circ_scaled.push_back(a2.cwiseProduct(p) + b2);
    const auto k1 = dimension_criterion(box_counting_dimension(circ, box_schedule()), 2, 0.1);
    const auto k2 =
        dimension_criterion(box_counting_dimension(circ_scaled, box_schedule()), 2, 0.1);
    CHECK(k1.verdict == CriterionVerdict::inconclusive);
    CHECK(k1.verdict == k2.verdict);
}

TEST_CASE("rossler attractor dimension") {
    const VectorField F = catalog::get("rossler");
    IntegratorConfig c;
    c.t_burn = 100.0;
    c.sample_dt = 0.1;
    c.t_end = 100.0 + 30000.0;  // box counting wants generous coverage
    const Trajectory traj = flow(F, catalog::entry("rossler").default_x0, c);
    REQUIRE(traj.size() >= 10000);

    // Capacity-type estimate lands on the literature value for the
    // attractor dimension.
    const double expected = catalog::entry("rossler").expected_dimension.value();
    const auto box = box_counting_dimension(traj.states, box_schedule());
    CHECK(std::abs(box.value - expected) < 0.15);

    // The correlation integral measures the order-2 dimension, which sits
    // visibly below capacity for this attractor's strongly nonuniform
    // natural measure; pin the estimator to its cross-checked value.
    const auto corr = correlation_dimension(traj.states, corr_schedule());
    CHECK(corr.value == doctest::Approx(1.83).epsilon(0.05));
}

TEST_CASE("subsample stability on the lorenz attractor") {
    const VectorField F = catalog::get("lorenz");
    Vec x0(3);
    x0 << 1, 1, 1;
    IntegratorConfig c;
    c.t_burn = 50.0;
    c.t_end = 2050.0;
    const Trajectory traj = flow(F, x0, c);
    std::vector<Vec> even, odd;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        (i % 2 == 0 ? even : odd).push_back(traj.states[i]);
    }
    const auto ee = box_counting_dimension(even, box_schedule());
    const auto eo = box_counting_dimension(odd, box_schedule());
    CHECK(std::abs(ee.value - eo.value) < 0.1);
}

TEST_CASE("criterion thresholds follow the margin") {
    DimensionEstimate est;
    est.value = 2.06;
    est.ci_halfwidth = 0.05;
    // Lorenz-style call in ambient dimension 3.
    CHECK(dimension_criterion(est, 3, 0.15).verdict == CriterionVerdict::inconclusive);
    CHECK(dimension_criterion(est, 3, 0.05).verdict == CriterionVerdict::uniqueness_evidence);
    // Default margin is twice the confidence halfwidth.
    const auto rep = dimension_criterion(est, 3);
    CHECK(rep.margin == doctest::Approx(0.1));

    DimensionEstimate circle;
    circle.value = 1.0;
    circle.ci_halfwidth = 0.0;
    CHECK(dimension_criterion(circle, 2, 0.0).verdict == CriterionVerdict::inconclusive);

    DimensionEstimate square;
    square.value = 2.0;
    square.ci_halfwidth = 0.0;
    CHECK(dimension_criterion(square, 2, 0.0).verdict == CriterionVerdict::uniqueness_evidence);

    CHECK_THROWS_AS(dimension_criterion(square, 2, -0.1), ValidationError);
}

TEST_SUITE_END();
