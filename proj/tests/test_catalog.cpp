#include "dynid/catalog.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace dynid;

TEST_SUITE_BEGIN("catalog");

namespace {

Vec random_in_entry_domain(const catalog::Entry& e, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> t(0.1, 0.9);
    Vec u(e.dim);
    for (int i = 0; i < e.dim; ++i) {
        u[i] = e.domain_lower[i] + t(rng) * (e.domain_upper[i] - e.domain_lower[i]);
    }
    return u;
}

}  // namespace

TEST_CASE("every entry's jacobian matches finite differences") {
    std::mt19937_64 rng(2024);
    for (const auto& e : catalog::entries()) {
        const VectorField F = catalog::get(e.id);
        for (int k = 0; k < 100; ++k) {
            const Vec u = random_in_entry_domain(e, rng);
            const Mat J = F.jacobian(u);
            const Mat Jfd = oracles::fd_jacobian(F, u);
            const double rel = (J - Jfd).norm() / std::max(1.0, J.norm());
            INFO("system ", e.id, " probe ", k);
            CHECK(rel < 1e-6);
        }
    }
}

TEST_CASE("polynomial forms agree with the closed forms") {
    std::mt19937_64 rng(55);
    for (const auto& e : catalog::entries()) {
        if (!catalog::has_polynomial(e.id)) continue;
        const VectorField F = catalog::get(e.id);
        const VectorField P = catalog::get_polynomial(e.id);
        for (int k = 0; k < 30; ++k) {
            const Vec u = random_in_entry_domain(e, rng);
            INFO("system ", e.id);
            CHECK((F(u) - P(u)).lpNorm<Eigen::Infinity>() <
                  1e-12 * std::max(1.0, F(u).lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("spiral field value from the example") {
    const VectorField F = catalog::get("spiral", {{"eps", -0.05}});
    Vec u(2);
    u << 1, 0;
    const Vec f = F(u);
    CHECK(f[0] == doctest::Approx(-0.05));
    CHECK(f[1] == doctest::Approx(1.0));
}

TEST_CASE("nilpotent-f2 value") {
    const VectorField F = catalog::get("nilpotent-f2");
    Vec u(2);
    u << 0.3, 0.8;
    const Vec f = F(u);
    CHECK(f[0] == doctest::Approx(0.32));
    CHECK(f[1] == 0.0);
}

TEST_CASE("sho and sho-cubic agree on the unit circle, differ by r^2 off it") {
    const VectorField A = catalog::get("sho");
    const VectorField B = catalog::get("sho-cubic");
    for (const auto& p : oracles::circle_points(64)) {
        CHECK((A(p) - B(p)).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(-2, 2);
    for (int k = 0; k < 50; ++k) {
        Vec u(2);
        u << dist(rng), dist(rng);
        const double r2 = u.squaredNorm();
        CHECK((B(u) - r2 * A(u)).lpNorm<Eigen::Infinity>() < 1e-12 * std::max(1.0, r2));
    }
}

TEST_CASE("unknown ids raise a typed error naming the catalog") {
    try {
        catalog::get("not-a-system");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("lorenz") != std::string::npos);
        CHECK(msg.find("sho") != std::string::npos);
    }
    CHECK_THROWS_AS(catalog::get_law("not-a-law"), ValidationError);
}

TEST_CASE("unknown parameters are rejected") {
    CHECK_THROWS_AS(catalog::get("lorenz", {{"nu", 1.0}}), ValidationError);
}

TEST_CASE("law values from the worked examples") {
    const ConservationLaw full = catalog::get_law("sho-full");
    Vec u(2), v(2);
    u << 1, 0;
    v << 0, -1;  // F(u) on the circle
    CHECK(full.value(v, u) == doctest::Approx(0.0));
    CHECK(full.grad_v(v, u).norm() == doctest::Approx(0.0));
    Mat Hm = full.hess_v(v, u);
    CHECK(Hm(0, 0) == doctest::Approx(1.0));
    CHECK(Hm(0, 1) == doctest::Approx(0.0));
    CHECK(Hm(1, 1) == doctest::Approx(4.0));
    CHECK(Hm.determinant() == doctest::Approx(4.0));

    const ConservationLaw radial = catalog::get_law("sho-radial");
    Mat C = radial.hess_v(v, u);
    CHECK(C(0, 0) == doctest::Approx(2.0));
    CHECK(C(0, 1) == doctest::Approx(0.0));
    CHECK(C(1, 0) == doctest::Approx(0.0));
    CHECK(C(1, 1) == doctest::Approx(0.0));

    const ConservationLaw nil = catalog::get_law("nilpotent");
    Vec vv(2);
    vv << 0.4, 0.9;
    const Vec g = nil.grad_v(vv, u);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == doctest::Approx(0.9));
}

TEST_CASE("law gradients and hessians match finite differences of H") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> dist;
    for (const auto& id : catalog::law_ids()) {
        const ConservationLaw law = catalog::get_law(id);
        for (int k = 0; k < 25; ++k) {
            Vec v(2), u(2);
            v << dist(rng), dist(rng);
            u << dist(rng), dist(rng);
            const Vec g = law.grad_v(v, u);
            const Vec gfd = oracles::fd_grad_v(law, v, u);
            CHECK((g - gfd).norm() / std::max(1.0, g.norm()) < 1e-6);
            const Mat h = law.hess_v(v, u);
            const Mat hfd = oracles::fd_hess_v(law, v, u);
            INFO("law ", id);
            CHECK((h - hfd).norm() / std::max(1.0, h.norm()) < 1e-5);
        }
    }
}

TEST_CASE("known first integrals annihilate their fields symbolically") {
    for (const char* id : {"sho", "sho-cubic", "henon-heiles"}) {
        const auto G = catalog::known_first_integral(id);
        REQUIRE(G.has_value());
        const VectorField F = catalog::get_polynomial(id);
        // grad G . F expanded as a polynomial must vanish coefficient-wise.
        Poly acc = Poly::zero(F.dim(), 1);
        for (int i = 0; i < F.dim(); ++i) {
            acc = acc + G->derivative(i) * F.poly().component(i);
        }
        INFO("system ", id);
        CHECK(acc.coeffs.lpNorm<Eigen::Infinity>() < 1e-14);
    }
}

TEST_CASE("catalog tags carry the ground truth the suites rely on") {
    auto has_tag = [](const catalog::Entry& e, const std::string& t) {
        return std::find(e.tags.begin(), e.tags.end(), t) != e.tags.end();
    };
    CHECK(has_tag(catalog::entry("lorenz"), "chaotic-attractor"));
    CHECK(catalog::entry("lorenz").expected_dimension.value() == doctest::Approx(2.06));
    CHECK(catalog::entry("rossler").expected_dimension.value() == doctest::Approx(2.01));
    CHECK(has_tag(catalog::entry("sho"), "has-first-integral"));
    CHECK(has_tag(catalog::entry("double-pendulum"), "not-chaotic-in-position-momentum"));
    CHECK_FALSE(has_tag(catalog::entry("double-pendulum"), "has-first-integral"));
}

TEST_SUITE_END();
