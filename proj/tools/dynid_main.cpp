// Command-line front end: simulation, coverage/dimension analyses,
// vanishing-ideal and first-integral certificate searches, conservation-law
// tests, and the combined discoverability verdict.

#include "dynid/analyze.hpp"
#include "dynid/catalog.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace dynid;

Vec parse_vec(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.empty()) throw ValidationError("expected a comma-separated vector: " + s);
    return Eigen::Map<const Vec>(vals.data(), vals.size());
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    return vals;
}

// "-2,2;-2,2" -> box domain, one lo,hi pair per axis.
Domain parse_domain(const std::string& s) {
    std::vector<double> lo, hi;
    std::stringstream ss(s);
    std::string axis;
    while (std::getline(ss, axis, ';')) {
        const auto pair = parse_list(axis);
        if (pair.size() != 2) throw ValidationError("domain axis needs lo,hi: " + axis);
        lo.push_back(pair[0]);
        hi.push_back(pair[1]);
    }
    if (lo.empty()) throw ValidationError("empty domain spec");
    return Domain(Eigen::Map<const Vec>(lo.data(), lo.size()),
                  Eigen::Map<const Vec>(hi.data(), hi.size()));
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ValidationError("expected key=value: " + kv);
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

void apply_toml(const std::string& path, IntegratorConfig& icfg, AnalyzeConfig& acfg) {
    const auto kv = load_toml_file(path);
    auto num = [&](const std::string& key, double& target) {
        auto it = kv.find(key);
        if (it != kv.end()) target = it->second.number();
    };
    num("integrator.rel_tol", icfg.rel_tol);
    num("integrator.abs_tol", icfg.abs_tol);
    num("integrator.max_step", icfg.max_step);
    num("integrator.t_burn", icfg.t_burn);
    num("integrator.t_end", icfg.t_end);
    num("integrator.sample_dt", icfg.sample_dt);
    num("integrator.blowup_norm", icfg.blowup_norm);
    acfg.integrator = icfg;

    if (auto it = kv.find("analyze.degree"); it != kv.end()) {
        acfg.degree = static_cast<int>(it->second.number());
    }
    if (auto it = kv.find("analyze.function_class"); it != kv.end()) {
        const std::string& fc = it->second.str();
        if (fc == "analytic") {
            acfg.function_class = FunctionClass::analytic;
        } else if (fc == "continuous" || fc == "c0") {
            acfg.function_class = FunctionClass::continuous;
        } else {
            throw ValidationError("config: bad function_class '" + fc + "'");
        }
    }
    if (auto it = kv.find("analyze.eps_schedule"); it != kv.end()) {
        acfg.eps_schedule = it->second.numbers();
    }
    if (auto it = kv.find("analyze.seed"); it != kv.end()) {
        acfg.seed = static_cast<unsigned long>(it->second.number());
    }
    if (auto it = kv.find("analyze.tol_vanishing"); it != kv.end()) {
        acfg.tol_vanishing = it->second.number();
    }
    if (auto it = kv.find("analyze.tol_first_integral"); it != kv.end()) {
        acfg.tol_first_integral = it->second.number();
    }
}

std::vector<Vec> load_points(const std::vector<std::string>& files) {
    std::vector<Trajectory> trajs;
    for (const auto& f : files) trajs.push_back(load_trajectory_csv(f));
    return gather_states(trajs);
}

int run(int argc, char** argv) {
    CLI::App app{"discoverability analysis of dynamical systems from trajectory data"};
    app.require_subcommand(1);

    unsigned long seed = 0;
    std::string config_path, out_dir = ".";
    app.add_option("--seed", seed, "seed for all randomized sampling");
    app.add_option("--config", config_path, "TOML config mirroring the integrator settings");
    app.add_option("--out-dir", out_dir, "directory for report outputs");

    IntegratorConfig icfg;
    AnalyzeConfig acfg;

    // simulate ---------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "integrate a catalog system and write CSV");
    std::string sim_system, sim_x0, sim_out = "traj.csv";
    std::vector<std::string> sim_params;
    double sim_tend = 100.0, sim_tburn = 0.0, sim_dt = 0.01, sim_rel = 1e-9, sim_abs = 1e-11;
    sim->add_option("--system", sim_system, "catalog system id")->required();
    sim->add_option("--param", sim_params, "system parameter overrides key=value");
    sim->add_option("--x0", sim_x0, "initial state, comma separated");
    sim->add_option("--t-end", sim_tend, "integration end time");
    sim->add_option("--t-burn", sim_tburn, "transient discard time");
    sim->add_option("--dt", sim_dt, "output sample stride");
    sim->add_option("--rel-tol", sim_rel, "relative tolerance");
    sim->add_option("--abs-tol", sim_abs, "absolute tolerance");
    sim->add_option("--out", sim_out, "output CSV path");

    // analyze-coverage --------------------------------------------------------
    auto* cov = app.add_subcommand("analyze-coverage", "box covers and transitivity over an eps schedule");
    std::vector<std::string> cov_trajs;
    std::string cov_domain, cov_eps = "0.25,0.1,0.05", cov_out = "coverage_report.json";
    cov->add_option("--traj", cov_trajs, "trajectory CSV (repeatable)")->required();
    cov->add_option("--domain", cov_domain, "box domain, e.g. \"-2,2;-2,2\"")->required();
    cov->add_option("--eps", cov_eps, "decreasing eps schedule, comma separated");
    cov->add_option("--out", cov_out, "output JSON path");

    // estimate-dimension ------------------------------------------------------
    auto* dim = app.add_subcommand("estimate-dimension", "box-counting or correlation dimension");
    std::string dim_traj, dim_method = "box", dim_out = "dim.json";
    int dim_levels = 8;
    double dim_hi = 0.5, dim_lo = 0.5 / 128.0;
    dim->add_option("--traj", dim_traj, "trajectory CSV")->required();
    dim->add_option("--method", dim_method, "box | corr");
    dim->add_option("--levels", dim_levels, "number of scale levels");
    dim->add_option("--scale-hi", dim_hi, "coarsest scale (normalized units)");
    dim->add_option("--scale-lo", dim_lo, "finest scale (normalized units)");
    dim->add_option("--out", dim_out, "output JSON path");

    // find-vanishing -----------------------------------------------------------
    auto* van = app.add_subcommand("find-vanishing", "polynomials vanishing on the samples");
    std::vector<std::string> van_trajs;
    std::string van_out = "certs.json";
    int van_degree = 4;
    double van_tol = 1e-8;
    van->add_option("--traj", van_trajs, "trajectory CSV (repeatable)")->required();
    van->add_option("--degree", van_degree, "maximum polynomial degree");
    van->add_option("--tol", van_tol, "relative singular-value threshold");
    van->add_option("--out", van_out, "output JSON path");

    // find-first-integral -------------------------------------------------------
    auto* fi = app.add_subcommand("find-first-integral", "polynomial first-integral search");
    std::string fi_system, fi_out = "fi.json";
    std::vector<std::string> fi_trajs, fi_params;
    int fi_degree = 4;
    double fi_tol = 1e-6;
    fi->add_option("--system", fi_system, "catalog system id")->required();
    fi->add_option("--param", fi_params, "system parameter overrides key=value");
    fi->add_option("--traj", fi_trajs, "trajectory CSV (default: simulate the system)");
    fi->add_option("--degree", fi_degree, "maximum polynomial degree");
    fi->add_option("--tol", fi_tol, "residual threshold");
    fi->add_option("--out", fi_out, "output JSON path");

    // check-conservation ---------------------------------------------------------
    auto* cons = app.add_subcommand("check-conservation", "Hessian and kernel-inclusion tests");
    std::string cons_system, cons_law, cons_traj, cons_point, cons_out = "cons.json";
    std::vector<std::string> cons_params;
    cons->add_option("--system", cons_system, "catalog system id")->required();
    cons->add_option("--param", cons_params, "system parameter overrides key=value");
    cons->add_option("--law", cons_law, "conservation law id")->required();
    cons->add_option("--traj", cons_traj, "trajectory CSV (default: simulate the system)");
    cons->add_option("--point", cons_point, "witness point, comma separated");
    cons->add_option("--out", cons_out, "output JSON path");

    // decompose-cells -------------------------------------------------------------
    auto* cells = app.add_subcommand("decompose-cells", "group trajectories into invariant cells");
    std::vector<std::string> cell_trajs;
    std::string cell_domain, cell_out = "cells.json";
    double cell_eps = 0.25;
    cells->add_option("--traj", cell_trajs, "trajectory CSV (repeatable)")->required();
    cells->add_option("--domain", cell_domain, "box domain")->required();
    cells->add_option("--eps", cell_eps, "grid resolution");
    cells->add_option("--out", cell_out, "output JSON path");

    // analyze ---------------------------------------------------------------------
    auto* ana = app.add_subcommand("analyze", "full discoverability pipeline and verdict");
    std::string ana_system, ana_class = "analytic", ana_x0, ana_eps, ana_law, ana_point;
    std::vector<std::string> ana_trajs, ana_params;
    int ana_degree = 4;
    ana->add_option("--system", ana_system, "catalog system id");
    ana->add_option("--param", ana_params, "system parameter overrides key=value");
    ana->add_option("--x0", ana_x0, "initial state override");
    ana->add_option("--traj", ana_trajs, "trajectory CSV (repeatable, instead of --system)");
    ana->add_option("--class", ana_class, "analytic | continuous");
    ana->add_option("--degree", ana_degree, "polynomial truncation degree");
    ana->add_option("--eps", ana_eps, "coverage eps schedule (normalized units)");
    ana->add_option("--law", ana_law, "conservation law to test");
    ana->add_option("--point", ana_point, "witness point for the kernel test");

    // catalog ---------------------------------------------------------------------
    auto* cat = app.add_subcommand("catalog", "catalog queries");
    auto* cat_list = cat->add_subcommand("list", "emit ids, dims and tags as JSON");

    CLI11_PARSE(app, argc, argv);

    if (!config_path.empty()) apply_toml(config_path, icfg, acfg);
    acfg.seed = seed;

    if (*sim) {
        // Flags beat the config file, which beats built-in defaults.
        IntegratorConfig c = icfg;
        if (sim->count("--rel-tol")) c.rel_tol = sim_rel;
        if (sim->count("--abs-tol")) c.abs_tol = sim_abs;
        if (sim->count("--t-end")) c.t_end = sim_tend;
        if (sim->count("--t-burn")) c.t_burn = sim_tburn;
        if (sim->count("--dt")) c.sample_dt = sim_dt;
        const VectorField F = catalog::get(sim_system, parse_params(sim_params));
        const Vec x0 = sim_x0.empty() ? catalog::entry(sim_system).default_x0 : parse_vec(sim_x0);
        const Trajectory traj = flow(F, x0, c);
        save_trajectory_csv(traj, sim_out);
        std::cout << "wrote " << traj.size() << " samples to " << sim_out << "\n";
        return 0;
    }

    if (*cov) {
        const Domain domain = parse_domain(cov_domain);
        std::vector<Trajectory> trajs;
        for (const auto& f : cov_trajs) trajs.push_back(load_trajectory_csv(f));
        const auto points = gather_states(trajs);
        const auto schedule = parse_list(cov_eps);
        std::vector<BoxCover> covers;
        for (double e : schedule) covers.push_back(box_cover(points, domain, e));
        const DensityVerdict density = density_verdict(covers);
        json j;
        json levels = json::array();
        for (const auto& lvl : density.levels) {
            levels.push_back({{"eps", lvl.eps},
                              {"fraction", lvl.fraction},
                              {"occupied", lvl.occupied},
                              {"total", lvl.total}});
        }
        j["levels"] = std::move(levels);
        j["dense_evidence"] = density.dense_evidence;
        if (density.first_failing_eps) j["first_failing_eps"] = *density.first_failing_eps;
        const BoxGraph g = transitivity_graph(trajs, domain, schedule.back());
        j["transitivity"] = {{"eps", schedule.back()},
                             {"boxes", g.boxes.size()},
                             {"edges", g.n_edges},
                             {"sccs", g.n_sccs},
                             {"single_scc", g.single_scc()},
                             {"undersampling_warnings", g.undersampling_warnings}};
        const CellDecomposition dec = cell_decomposition(trajs, domain, schedule.back());
        json comps = json::array();
        for (const auto& cell : dec.components) {
            comps.push_back({{"trajectories", cell.trajectory_ids},
                             {"boxes", cell.boxes.size()},
                             {"transitive", cell.transitive}});
        }
        j["components"] = std::move(comps);
        j["covers_domain"] = dec.covers_domain;
        save_json_file(j, cov_out);
        std::cout << (density.dense_evidence ? "dense-evidence" : "non-dense") << "; report: "
                  << cov_out << "\n";
        return 0;
    }

    if (*dim) {
        const auto points = load_points({dim_traj});
        DimensionEstimate est;
        if (dim_method == "box") {
            est = box_counting_dimension(points, geometric_schedule(dim_hi, dim_lo, dim_levels));
        } else if (dim_method == "corr") {
            est = correlation_dimension(points, geometric_schedule(std::max(dim_hi, 1.0), 0.01, 10));
        } else {
            throw ValidationError("estimate-dimension: method must be box or corr");
        }
        json j;
        j["method"] = dim_method;
        j["value"] = est.value;
        j["ci_halfwidth"] = est.ci_halfwidth;
        j["r2"] = est.r2;
        j["fit_window"] = {est.fit_scale_lo, est.fit_scale_hi};
        j["n_points"] = est.n_points;
        json table = json::array();
        for (const auto& p : est.table) table.push_back({{"scale", p.scale}, {"value", p.value}});
        j["table"] = std::move(table);
        save_json_file(j, dim_out);
        std::cout << "dimension(" << dim_method << ") = " << est.value << " +/- "
                  << est.ci_halfwidth << "; report: " << dim_out << "\n";
        return 0;
    }

    if (*van) {
        const auto points = load_points(van_trajs);
        VanishingOptions vo;
        vo.tol = van_tol;
        const VanishingResult r = find_vanishing(points, van_degree, vo);
        json j;
        j["degree"] = van_degree;
        j["tol"] = van_tol;
        j["smallest_singular_ratio"] = r.smallest_ratio;
        j["undersampled_warning"] = r.undersampled_warning;
        json certs = json::array();
        for (const auto& c : r.certificates) certs.push_back(vanishing_certificate_to_json(c));
        j["certificates"] = std::move(certs);
        save_json_file(j, van_out);
        std::cout << r.certificates.size() << " certificate(s); report: " << van_out << "\n";
        return 0;
    }

    if (*fi) {
        const VectorField F = catalog::get(fi_system, parse_params(fi_params));
        std::vector<Vec> points;
        if (fi_trajs.empty()) {
            IntegratorConfig c = icfg;
            c.t_end = std::max(c.t_end, 200.0);
            points = flow(F, catalog::entry(fi_system).default_x0, c).states;
        } else {
            points = load_points(fi_trajs);
        }
        FirstIntegralOptions fo;
        fo.tol = fi_tol;
        fo.seed = seed;
        const FirstIntegralResult r = find_first_integral(F, points, fi_degree, fo);
        json j;
        j["system"] = fi_system;
        j["degree"] = fi_degree;
        j["tol"] = fi_tol;
        j["best_residual"] = r.best_residual;
        j["certificate"] = r.certificate ? first_integral_certificate_to_json(*r.certificate)
                                         : json(nullptr);
        save_json_file(j, fi_out);
        std::cout << (r.certificate ? "first integral found" : "none") << "; report: " << fi_out
                  << "\n";
        return 0;
    }

    if (*cons) {
        const VectorField F = catalog::get(cons_system, parse_params(cons_params));
        const ConservationLaw law = catalog::get_law(cons_law);
        Trajectory traj;
        if (cons_traj.empty()) {
            IntegratorConfig c = icfg;
            traj = flow(F, catalog::entry(cons_system).default_x0, c);
        } else {
            traj = load_trajectory_csv(cons_traj);
        }
        const HessianReport hr = hessian_test(law, F, traj.states);
        const Vec p = cons_point.empty() ? traj.x0 : parse_vec(cons_point);
        KernelInclusionOptions ko;
        ko.seed = seed;
        const KernelInclusionReport kr = kernel_inclusion_test(law, F, traj, p, ko);
        json j;
        j["system"] = cons_system;
        j["law"] = cons_law;
        j["hessian"] = {{"witness", std::vector<double>(hr.witness.data(),
                                                        hr.witness.data() + hr.witness.size())},
                        {"witness_det", hr.witness_det},
                        {"grad_norm", hr.grad_norm},
                        {"verdict", hr.verdict == HessianVerdict::uniqueness_evidence
                                        ? "uniqueness-evidence"
                                        : (hr.verdict == HessianVerdict::numerically_marginal
                                               ? "numerically-marginal"
                                               : "inconclusive")}};
        j["kernel_inclusion"] = {
            {"ker_dim", kr.ker_dim},
            {"tangent_dim", kr.tangent_dim},
            {"max_principal_angle", kr.max_principal_angle},
            {"gate", to_string(kr.gate.kind)},
            {"verdict", kr.verdict == KernelVerdict::uniqueness_evidence ? "uniqueness-evidence"
                        : kr.verdict == KernelVerdict::gate_failed       ? "gate failed"
                        : kr.verdict == KernelVerdict::inclusion_failed  ? "inclusion failed"
                                                                         : "inconclusive"}};
        save_json_file(j, cons_out);
        std::cout << "conservation report: " << cons_out << "\n";
        return 0;
    }

    if (*cells) {
        const Domain domain = parse_domain(cell_domain);
        std::vector<Trajectory> trajs;
        for (const auto& f : cell_trajs) trajs.push_back(load_trajectory_csv(f));
        const CellDecomposition dec = cell_decomposition(trajs, domain, cell_eps);
        json j;
        j["eps"] = dec.eps;
        json comps = json::array();
        for (const auto& c : dec.components) {
            comps.push_back({{"trajectories", c.trajectory_ids},
                             {"boxes", c.boxes.size()},
                             {"transitive", c.transitive}});
        }
        j["components"] = std::move(comps);
        j["union_fraction"] = dec.union_fraction;
        j["covers_domain"] = dec.covers_domain;
        j["is_transitive_whole"] = dec.is_transitive_whole;
        save_json_file(j, cell_out);
        std::cout << dec.components.size() << " component(s); report: " << cell_out << "\n";
        return 0;
    }

    if (*ana) {
        AnalyzeConfig c = acfg;
        c.system = ana_system;
        c.params = parse_params(ana_params);
        if (!ana_x0.empty()) c.x0 = parse_vec(ana_x0);
        c.trajectory_files = ana_trajs;
        if (ana->count("--class")) {
            if (ana_class == "analytic") {
                c.function_class = FunctionClass::analytic;
            } else if (ana_class == "continuous" || ana_class == "c0") {
                c.function_class = FunctionClass::continuous;
            } else {
                throw ValidationError("analyze: --class must be analytic or continuous");
            }
        }
        if (ana->count("--degree")) c.degree = ana_degree;
        if (!ana_eps.empty()) c.eps_schedule = parse_list(ana_eps);
        c.law = ana_law;
        if (!ana_point.empty()) c.law_point = parse_vec(ana_point);
        c.seed = seed;
        const UniquenessVerdict v = analyze(c);
        const auto files = write_report(v, out_dir);
        std::cout << to_string(v.overall) << ": " << v.reason << "\n";
        for (const auto& f : files) std::cout << "  " << f << "\n";
        return 0;
    }

    if (*cat) {
        if (*cat_list || cat->get_subcommands().empty()) {
            json j = json::array();
            for (const auto& e : catalog::entries()) {
                json je;
                je["id"] = e.id;
                je["dim"] = e.dim;
                je["description"] = e.description;
                je["params"] = e.default_params;
                je["tags"] = e.tags;
                if (e.expected_dimension) je["expected_dimension"] = *e.expected_dimension;
                j.push_back(std::move(je));
            }
            std::cout << j.dump(2) << "\n";
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dynid::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dynid::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dynid::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
