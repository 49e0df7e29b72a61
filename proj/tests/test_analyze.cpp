#include "dynid/analyze.hpp"
#include "dynid/catalog.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace dynid;

TEST_SUITE_BEGIN("analyze");

namespace {

AnalyzeConfig quick_config(const std::string& system) {
    AnalyzeConfig c;
    c.system = system;
    c.integrator.t_burn = 5.0;
    c.integrator.t_end = 120.0;
    c.integrator.sample_dt = 0.01;
    return c;
}

std::string temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "dynid_test_out";
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace

TEST_CASE("trajectory CSV round trip") {
    const VectorField F = catalog::get("sho");
    Vec x0(2);
    x0 << 1, 0;
    IntegratorConfig c;
    c.t_end = 5.0;
    const Trajectory traj = flow(F, x0, c);
    const std::string path = temp_dir() + "/roundtrip.csv";
    save_trajectory_csv(traj, path);
    const Trajectory back = load_trajectory_csv(path);
    REQUIRE(back.size() == traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(back.times[k] == traj.times[k]);  // %.17g survives bit-exactly
        CHECK((back.states[k] - traj.states[k]).norm() == 0.0);
    }
}

TEST_CASE("polynomial field JSON round trip keeps graded-lex columns") {
    const VectorField F = catalog::get_polynomial("lorenz");
    const json j = field_to_json(F);
    CHECK(j["dim"] == 3);
    const VectorField back = field_from_json(j);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-3, 3);
    for (int k = 0; k < 20; ++k) {
        Vec u(3);
        u << dist(rng), dist(rng), dist(rng);
        CHECK((F(u) - back(u)).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("toml subset parsing") {
    const std::string text = R"(# comment
title = "run"
[integrator]
rel_tol = 1e-10
t_end = 250.0    # trailing comment
[analyze]
degree = 3
eps_schedule = [0.25, 0.1, 0.05]
function_class = "analytic"
verbose = true
)";
    const auto kv = parse_toml(text);
    CHECK(kv.at("title").str() == "run");
    CHECK(kv.at("integrator.rel_tol").number() == doctest::Approx(1e-10));
    CHECK(kv.at("integrator.t_end").number() == doctest::Approx(250.0));
    CHECK(kv.at("analyze.degree").number() == doctest::Approx(3));
    CHECK(kv.at("analyze.eps_schedule").numbers().size() == 3);
    CHECK(kv.at("analyze.verbose").boolean());
    CHECK_THROWS_AS(parse_toml("broken line"), IoError);
}

TEST_CASE("analyze config json round trip") {
    AnalyzeConfig c = quick_config("sho");
    c.degree = 3;
    c.seed = 7;
    c.law = "sho-full";
    Vec p(2);
    p << 1, 0;
    c.law_point = p;
    const AnalyzeConfig back = AnalyzeConfig::from_json(c.to_json());
    CHECK(back.system == "sho");
    CHECK(back.degree == 3);
    CHECK(back.seed == 7);
    CHECK(back.law == "sho-full");
    CHECK(back.to_json().dump() == c.to_json().dump());
}

TEST_CASE("conflicting configuration is rejected") {
    AnalyzeConfig c = quick_config("sho");
    c.function_class = FunctionClass::continuous;
    c.law = "sho-full";
    CHECK_THROWS_AS(analyze(c), ValidationError);

    AnalyzeConfig none;
    CHECK_THROWS_AS(analyze(none), ValidationError);

    AnalyzeConfig both = quick_config("sho");
    both.trajectory_files.push_back("x.csv");
    CHECK_THROWS_AS(analyze(both), ValidationError);
}

TEST_CASE("harmonic oscillator is certified non-discoverable in the analytic class") {
    const UniquenessVerdict v = analyze(quick_config("sho"));
    CHECK(v.overall == Overall::non_discoverable_certified);
    CHECK(v.first_integral_found);
    CHECK(v.n_vanishing_certificates >= 1);
    CHECK_FALSE(v.dense_evidence);
    // The certificate is machine-checkable from the report alone: rebuild
    // the polynomial from the stored basis/coefficients/rescale and verify
    // it vanishes on a freshly simulated circle while diverging off it.
    const auto& certs = v.report["analytic"]["vanishing"]["certificates"];
    REQUIRE(!certs.empty());
    CHECK(certs[0]["residual"].get<double>() < 1e-8);
    CHECK(certs[0]["off_sample_divergence"].get<double>() >= 1e-3);

    const int dim = certs[0]["dim"].get<int>();
    const int degree = certs[0]["degree"].get<int>();
    auto basis = MonomialBasis::get(dim, degree);
    const auto cs = certs[0]["coeffs"].get<std::vector<double>>();
    REQUIRE(static_cast<int>(cs.size()) == basis->size());
    const Poly g(basis, Eigen::Map<const Vec>(cs.data(), cs.size()));
    const AffineRescale resc = rescale_from_json(certs[0]["rescale"]);
    for (const auto& p : oracles::circle_points(64)) {
        CHECK(std::abs(g(resc.forward(p))) < 1e-7);
    }
    // Off the circle the certificate must show life somewhere.
    double off_max = 0;
    for (const auto& p : oracles::circle_points(8, 1.7)) {
        off_max = std::max(off_max, std::abs(g(resc.forward(p))));
    }
    CHECK(off_max > 1e-2);
}

TEST_CASE("spiral: discoverable evidence despite non-dense coverage") {
    AnalyzeConfig c = quick_config("spiral");
    c.integrator.t_burn = 0.0;
    c.integrator.t_end = 500.0;
    const UniquenessVerdict v = analyze(c);
    CHECK(v.overall == Overall::discoverable_evidence);
    CHECK_FALSE(v.dense_evidence);
    CHECK(v.n_vanishing_certificates == 0);
    CHECK_FALSE(v.first_integral_found);
}

TEST_CASE("spiral after a long burn-in: microscopic data must still be normalized") {
    // The post-transient cloud has radius ~ exp(eps * t_burn) << 1. Without
    // normalization every low-degree form looks conserved relative to |F|
    // and a spurious first-integral certificate appears.
    AnalyzeConfig c;
    c.system = "spiral";
    c.integrator.t_burn = 100.0;
    c.integrator.t_end = 500.0;
    const UniquenessVerdict v = analyze(c);
    const AffineRescale resc = rescale_from_json(v.report["rescale"]);
    CHECK_FALSE(resc.is_identity());
    CHECK_FALSE(v.first_integral_found);
    CHECK(v.n_vanishing_certificates == 0);
    CHECK(v.overall == Overall::discoverable_evidence);
}

TEST_CASE("continuous class: dense synthetic data is discoverable evidence") {
    // A space-filling synthetic "trajectory" file stands in for a dense orbit.
    const std::string path = temp_dir() + "/dense.csv";
    {
        std::ofstream out(path);
        out << "t,x1,x2\n";
        const auto pts = oracles::uniform_box(200000, 2, -1.0, 1.0, 99);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            out << 0.01 * static_cast<double>(i) << "," << pts[i][0] << "," << pts[i][1] << "\n";
        }
    }
    AnalyzeConfig c;
    c.trajectory_files = {path};
    c.function_class = FunctionClass::continuous;
    const UniquenessVerdict v = analyze(c);
    CHECK(v.dense_evidence);
    CHECK(v.overall == Overall::discoverable_evidence);

    // The circle trajectory in the continuous class stays inconclusive.
    AnalyzeConfig sc = quick_config("sho");
    sc.function_class = FunctionClass::continuous;
    const UniquenessVerdict sv = analyze(sc);
    CHECK(sv.overall == Overall::inconclusive);
}

TEST_CASE("conservation-law section recovers uniqueness for the oscillator") {
    AnalyzeConfig c = quick_config("sho");
    c.law = "sho-full";
    Vec p(2);
    p << 1, 0;
    c.law_point = p;
    const UniquenessVerdict v = analyze(c);
    const auto& cons = v.report["analytic"]["conservation"];
    CHECK(cons["hessian"]["verdict"] == "uniqueness-evidence");
    CHECK(cons["kernel_inclusion"]["gate"] == "skew");
    // Trajectory-only verdict still reflects the certificates.
    CHECK(v.overall == Overall::non_discoverable_certified);
}

TEST_CASE("verdict determinism and echo reproducibility") {
    AnalyzeConfig c = quick_config("sho");
    c.seed = 3;
    const UniquenessVerdict a = analyze(c);
    const UniquenessVerdict b = analyze(c);
    CHECK(a.report.dump() == b.report.dump());

    const AnalyzeConfig echoed = AnalyzeConfig::from_json(a.report["parameters"]);
    const UniquenessVerdict c2 = analyze(echoed);
    CHECK(c2.report.dump() == a.report.dump());
}

TEST_CASE("report files are written") {
    AnalyzeConfig c = quick_config("sho");
    const UniquenessVerdict v = analyze(c);
    const std::string dir = temp_dir() + "/report";
    const auto files = write_report(v, dir);
    CHECK(files.size() >= 3);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));
    const json got = load_json_file(dir + "/verdict.json");
    CHECK(got["overall"] == "non-discoverable-certified");
}

TEST_SUITE_END();
