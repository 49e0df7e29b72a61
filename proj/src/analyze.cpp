#include "dynid/analyze.hpp"

#include "dynid/catalog.hpp"

#include <filesystem>
#include <sstream>

namespace dynid {

const char* to_string(Overall o) {
    switch (o) {
        case Overall::discoverable_evidence: return "discoverable-evidence";
        case Overall::non_discoverable_certified: return "non-discoverable-certified";
        default: return "inconclusive";
    }
}

namespace {

std::vector<double> vec_to_std(const Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Vec std_to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), v.size());
}

json estimate_to_json(const DimensionEstimate& e) {
    json j;
    j["method"] = e.method == DimensionMethod::box_counting ? "box_counting" : "correlation";
    j["value"] = e.value;
    j["ci_halfwidth"] = e.ci_halfwidth;
    j["fit_window"] = {e.fit_scale_lo, e.fit_scale_hi};
    j["r2"] = e.r2;
    j["n_points"] = e.n_points;
    json table = json::array();
    for (const auto& p : e.table) table.push_back({{"scale", p.scale}, {"value", p.value}});
    j["table"] = std::move(table);
    if (e.degenerate_warning) j["degenerate_warning"] = true;
    return j;
}

}  // namespace

json AnalyzeConfig::to_json() const {
    json j;
    j["system"] = system;
    j["params"] = params;
    if (x0) j["x0"] = vec_to_std(*x0);
    j["trajectory_files"] = trajectory_files;
    j["function_class"] = function_class == FunctionClass::analytic ? "analytic" : "continuous";
    j["degree"] = degree;
    j["eps_schedule"] = eps_schedule;
    j["tol_frac"] = tol_frac;
    j["integrator"] = {{"rel_tol", integrator.rel_tol},   {"abs_tol", integrator.abs_tol},
                       {"max_step", integrator.max_step}, {"t_burn", integrator.t_burn},
                       {"t_end", integrator.t_end},       {"sample_dt", integrator.sample_dt},
                       {"blowup_norm", integrator.blowup_norm}};
    j["run_dimension"] = run_dimension;
    j["run_vanishing"] = run_vanishing;
    j["run_first_integral"] = run_first_integral;
    j["tol_vanishing"] = tol_vanishing;
    j["tol_first_integral"] = tol_first_integral;
    if (margin) j["margin"] = *margin;
    j["box_eps_hi"] = box_eps_hi;
    j["box_eps_lo"] = box_eps_lo;
    j["box_levels"] = box_levels;
    j["corr_r_hi"] = corr_r_hi;
    j["corr_r_lo"] = corr_r_lo;
    j["corr_levels"] = corr_levels;
    j["law"] = law;
    if (law_point) j["law_point"] = vec_to_std(*law_point);
    j["seed"] = seed;
    return j;
}

AnalyzeConfig AnalyzeConfig::from_json(const json& j) {
    AnalyzeConfig c;
    c.system = j.value("system", std::string());
    if (j.contains("params")) {
        for (const auto& [k, v] : j.at("params").items()) c.params[k] = v.get<double>();
    }
    if (j.contains("x0")) c.x0 = std_to_vec(j.at("x0").get<std::vector<double>>());
    if (j.contains("trajectory_files")) {
        c.trajectory_files = j.at("trajectory_files").get<std::vector<std::string>>();
    }
    const std::string fc = j.value("function_class", std::string("analytic"));
    if (fc == "analytic") {
        c.function_class = FunctionClass::analytic;
    } else if (fc == "continuous") {
        c.function_class = FunctionClass::continuous;
    } else {
        throw ValidationError("analyze: function_class must be 'analytic' or 'continuous'");
    }
    c.degree = j.value("degree", 4);
    if (j.contains("eps_schedule")) c.eps_schedule = j.at("eps_schedule").get<std::vector<double>>();
    c.tol_frac = j.value("tol_frac", 1e-3);
    if (j.contains("integrator")) {
        const auto& ji = j.at("integrator");
        c.integrator.rel_tol = ji.value("rel_tol", 1e-9);
        c.integrator.abs_tol = ji.value("abs_tol", 1e-11);
        c.integrator.max_step = ji.value("max_step", 0.0);
        c.integrator.t_burn = ji.value("t_burn", 100.0);
        c.integrator.t_end = ji.value("t_end", 500.0);
        c.integrator.sample_dt = ji.value("sample_dt", 0.01);
        c.integrator.blowup_norm = ji.value("blowup_norm", 1e8);
    }
    c.run_dimension = j.value("run_dimension", true);
    c.run_vanishing = j.value("run_vanishing", true);
    c.run_first_integral = j.value("run_first_integral", true);
    c.tol_vanishing = j.value("tol_vanishing", 1e-8);
    c.tol_first_integral = j.value("tol_first_integral", 1e-6);
    if (j.contains("margin")) c.margin = j.at("margin").get<double>();
    c.box_eps_hi = j.value("box_eps_hi", 0.5);
    c.box_eps_lo = j.value("box_eps_lo", 0.5 / 128.0);
    c.box_levels = j.value("box_levels", 8);
    c.corr_r_hi = j.value("corr_r_hi", 1.0);
    c.corr_r_lo = j.value("corr_r_lo", 0.01);
    c.corr_levels = j.value("corr_levels", 10);
    c.law = j.value("law", std::string());
    if (j.contains("law_point")) c.law_point = std_to_vec(j.at("law_point").get<std::vector<double>>());
    c.seed = j.value("seed", 0UL);
    return c;
}

UniquenessVerdict analyze(const AnalyzeConfig& config) {
    // -- validation ---------------------------------------------------------
    const bool from_system = !config.system.empty();
    if (from_system == !config.trajectory_files.empty()) {
        throw ValidationError("analyze: configure exactly one of system or trajectory files");
    }
    if (config.function_class == FunctionClass::continuous && !config.law.empty()) {
        throw ValidationError(
            "analyze: conservation-law tests require the analytic class; the continuous class "
            "places no differentiability constraints");
    }
    if (config.degree < 1) throw ValidationError("analyze: degree must be >= 1");

    UniquenessVerdict verdict;
    json& rep = verdict.report;
    rep["schema"] = "dynid-verdict-v1";
    rep["parameters"] = config.to_json();

    // -- trajectories -------------------------------------------------------
    std::optional<VectorField> field;
    std::vector<Trajectory> trajs;
    if (from_system) {
        field = catalog::get(config.system, config.params);
        const Vec x0 = config.x0 ? *config.x0 : catalog::entry(config.system).default_x0;
        trajs.push_back(flow(*field, x0, config.integrator));
    } else {
        for (const auto& f : config.trajectory_files) trajs.push_back(load_trajectory_csv(f));
    }
    const int d = trajs.front().dim();
    for (const auto& t : trajs) {
        if (t.dim() != d) throw ValidationError("analyze: trajectories have mixed dimensions");
    }

    json jt = json::array();
    for (const auto& t : trajs) {
        jt.push_back({{"source", t.field_id},
                      {"n_samples", t.size()},
                      {"t0", t.times.front()},
                      {"t1", t.times.back()},
                      {"x0", vec_to_std(t.x0)}});
    }
    rep["trajectories"] = std::move(jt);

    const std::vector<Vec> points = gather_states(trajs);
    const AffineRescale rescale = AffineRescale::fit(points);
    rep["rescale"] = rescale_to_json(rescale);
    const std::vector<Vec> npoints = rescale.is_identity() ? points : rescale.forward_all(points);

    std::vector<Trajectory> ntrajs = trajs;
    if (!rescale.is_identity()) {
        for (auto& t : ntrajs) {
            for (auto& s : t.states) s = rescale.forward(s);
            t.x0 = t.states.front();
        }
    }

    // -- coverage (continuous-class evidence) -------------------------------
    // Exact unit box: the eps schedule then divides the extent into whole
    // cells. Normalized samples a few ulp outside are counted, not covered.
    const Domain unit_box = Domain::centered_cube(d, 1.0);
    std::vector<BoxCover> covers;
    for (double eps : config.eps_schedule) covers.push_back(box_cover(npoints, unit_box, eps));
    const DensityVerdict density = density_verdict(covers, config.tol_frac);
    verdict.dense_evidence = density.dense_evidence;

    {
        json jc;
        json levels = json::array();
        for (const auto& lvl : density.levels) {
            levels.push_back({{"eps", lvl.eps},
                              {"fraction", lvl.fraction},
                              {"occupied", lvl.occupied},
                              {"total", lvl.total}});
        }
        jc["levels"] = std::move(levels);
        jc["dense_evidence"] = density.dense_evidence;
        jc["tol_frac"] = density.tol_frac;
        if (density.first_failing_eps) jc["first_failing_eps"] = *density.first_failing_eps;

        const double mid_eps = config.eps_schedule[config.eps_schedule.size() / 2];
        const BoxGraph graph = transitivity_graph(ntrajs, unit_box, mid_eps);
        jc["transitivity"] = {{"eps", mid_eps},
                              {"boxes", graph.boxes.size()},
                              {"edges", graph.n_edges},
                              {"sccs", graph.n_sccs},
                              {"largest_scc", graph.largest_scc},
                              {"single_scc", graph.single_scc()},
                              {"undersampling_warnings", graph.undersampling_warnings}};

        const CellDecomposition cells =
            cell_decomposition(ntrajs, unit_box, mid_eps, config.tol_frac);
        json jcomp = json::array();
        for (const auto& c : cells.components) {
            jcomp.push_back({{"trajectories", c.trajectory_ids},
                             {"boxes", c.boxes.size()},
                             {"transitive", c.transitive}});
        }
        jc["cells"] = {{"eps", cells.eps},
                       {"components", std::move(jcomp)},
                       {"union_fraction", cells.union_fraction},
                       {"covers_domain", cells.covers_domain},
                       {"is_transitive_whole", cells.is_transitive_whole}};
        rep["c0"] = std::move(jc);
    }

    // -- analytic-class evidence --------------------------------------------
    json ja;
    bool dim_pass = false;
    bool vanishing_ran = false, vanishing_empty = false, vanishing_certified = false;
    double vanishing_divergence = 0;

    if (config.function_class == FunctionClass::analytic) {
        if (config.run_dimension) {
            const auto box_est = box_counting_dimension(
                npoints, geometric_schedule(config.box_eps_hi, config.box_eps_lo, config.box_levels));
            const auto corr_est = correlation_dimension(
                npoints, geometric_schedule(config.corr_r_hi, config.corr_r_lo, config.corr_levels));
            const auto crit = dimension_criterion(box_est, d, config.margin);
            dim_pass = crit.verdict == CriterionVerdict::uniqueness_evidence;
            ja["dimension"] = {{"box", estimate_to_json(box_est)},
                               {"correlation", estimate_to_json(corr_est)},
                               {"criterion",
                                {{"verdict", dim_pass ? "uniqueness-evidence" : "inconclusive"},
                                 {"value", crit.value},
                                 {"margin", crit.margin},
                                 {"threshold", crit.threshold},
                                 {"caveat", crit.caveat}}}};
        }

        if (config.run_vanishing) {
            VanishingOptions vo;
            // Certificates must not be claimed below the noise floor of the
            // data-generating integration.
            vo.tol = from_system
                         ? std::max(config.tol_vanishing, 100.0 * config.integrator.rel_tol)
                         : config.tol_vanishing;
            const VanishingResult vr = find_vanishing(points, config.degree, vo);
            vanishing_ran = true;
            vanishing_empty = vr.certificates.empty();
            json jcerts = json::array();
            for (const auto& c : vr.certificates) {
                json jc = vanishing_certificate_to_json(c);
                // Off-sample divergence: the certificate must grow away from
                // the data to witness genuine non-uniqueness.
                Vec lo = points.front(), hi = points.front();
                for (const auto& p : points) {
                    lo = lo.cwiseMin(p);
                    hi = hi.cwiseMax(p);
                }
                const Vec center = 0.5 * (lo + hi);
                const Vec half = (0.5 * (hi - lo)).cwiseMax(1e-6);
                double div = 0;
                for (int mask = 0; mask < (1 << d); ++mask) {
                    Vec probe = center;
                    for (int i = 0; i < d; ++i) probe[i] += ((mask >> i) & 1 ? 2.0 : -2.0) * half[i];
                    div = std::max(div, std::abs(c.eval_raw(probe)));
                }
                jc["off_sample_divergence"] = div;
                jcerts.push_back(std::move(jc));
                if (div >= 1e-3) {
                    vanishing_certified = true;
                    vanishing_divergence = std::max(vanishing_divergence, div);
                }
            }
            ja["vanishing"] = {{"degree", config.degree},
                               {"tol", vo.tol},
                               {"smallest_singular_ratio", vr.smallest_ratio},
                               {"undersampled_warning", vr.undersampled_warning},
                               {"certificates", std::move(jcerts)}};
        }

        if (config.run_first_integral) {
            if (field) {
                FirstIntegralOptions fo;
                fo.tol = std::max(config.tol_first_integral, 100.0 * config.integrator.rel_tol);
                fo.seed = config.seed;
                fo.cv_config.rel_tol = config.integrator.rel_tol;
                fo.cv_config.abs_tol = config.integrator.abs_tol;
                const FirstIntegralResult fr =
                    find_first_integral(*field, points, config.degree, fo);
                verdict.first_integral_found = fr.certificate.has_value();
                json jfi;
                jfi["degree"] = config.degree;
                jfi["tol"] = fo.tol;
                jfi["best_residual"] = fr.best_residual;
                jfi["fresh_x0"] = vec_to_std(fr.fresh_x0);
                if (fr.certificate) {
                    jfi["certificate"] = first_integral_certificate_to_json(*fr.certificate);
                } else {
                    jfi["certificate"] = nullptr;
                }
                ja["first_integral"] = std::move(jfi);
            } else {
                ja["first_integral"] = {{"skipped", "no vector field available for file-based data"}};
            }
        }

        if (!config.law.empty()) {
            if (!field) {
                throw ValidationError("analyze: conservation-law tests need a catalog system");
            }
            const ConservationLaw law = catalog::get_law(config.law);
            const HessianReport hr = hessian_test(law, *field, points);
            json jcons;
            jcons["law"] = config.law;
            jcons["hessian"] = {{"witness", vec_to_std(hr.witness)},
                                {"witness_det", hr.witness_det},
                                {"max_abs_det", hr.max_abs_det},
                                {"min_abs_det", hr.min_abs_det},
                                {"grad_norm", hr.grad_norm},
                                {"verdict",
                                 hr.verdict == HessianVerdict::uniqueness_evidence
                                     ? "uniqueness-evidence"
                                     : (hr.verdict == HessianVerdict::numerically_marginal
                                            ? "numerically-marginal"
                                            : "inconclusive")}};
            const Vec p = config.law_point ? *config.law_point : trajs.front().x0;
            KernelInclusionOptions ko;
            ko.seed = config.seed;
            const KernelInclusionReport kr = kernel_inclusion_test(law, *field, trajs.front(), p, ko);
            const char* kv = kr.verdict == KernelVerdict::uniqueness_evidence ? "uniqueness-evidence"
                             : kr.verdict == KernelVerdict::gate_failed       ? "gate failed"
                             : kr.verdict == KernelVerdict::inclusion_failed  ? "inclusion failed"
                                                                              : "inconclusive";
            jcons["kernel_inclusion"] = {{"point", vec_to_std(p)},
                                         {"ker_dim", kr.ker_dim},
                                         {"tangent_dim", kr.tangent_dim},
                                         {"max_principal_angle", kr.max_principal_angle},
                                         {"angle_tol", kr.angle_tol},
                                         {"gate", to_string(kr.gate.kind)},
                                         {"gate_max_asymmetry", kr.gate.max_asymmetry},
                                         {"verdict", kv}};
            ja["conservation"] = std::move(jcons);
        }
    }
    rep["analytic"] = std::move(ja);
    verdict.n_vanishing_certificates =
        vanishing_ran ? rep["analytic"]["vanishing"]["certificates"].size() : 0;

    // -- verdict precedence: certificates beat evidence beats inconclusive --
    std::ostringstream reason;
    if (verdict.first_integral_found) {
        verdict.overall = Overall::non_discoverable_certified;
        reason << "a polynomial first integral up to degree " << config.degree
               << " constrains every trajectory to a level set";
    } else if (vanishing_certified) {
        verdict.overall = Overall::non_discoverable_certified;
        reason << "a degree-" << config.degree
               << " polynomial vanishes on the data (off-sample divergence "
               << vanishing_divergence << ")";
    } else if (config.function_class == FunctionClass::continuous) {
        if (density.dense_evidence) {
            verdict.overall = Overall::discoverable_evidence;
            reason << "trajectory covers the domain at every tested resolution";
        } else {
            verdict.overall = Overall::inconclusive;
            reason << "coverage misses the density threshold at eps="
                   << (density.first_failing_eps ? *density.first_failing_eps : 0.0);
        }
    } else {
        if (dim_pass) {
            verdict.overall = Overall::discoverable_evidence;
            reason << "dimension criterion passed (estimate above ambient dimension minus one)";
        } else if (vanishing_ran && vanishing_empty) {
            verdict.overall = Overall::discoverable_evidence;
            reason << "no polynomial up to degree " << config.degree
                   << " vanishes on the data (evidence, not proof)";
        } else {
            verdict.overall = Overall::inconclusive;
            reason << "no certificate found and no positive evidence at degree " << config.degree;
        }
    }
    verdict.reason = reason.str();
    rep["overall"] = to_string(verdict.overall);
    rep["reason"] = verdict.reason;
    return verdict;
}

std::vector<std::string> write_report(const UniquenessVerdict& verdict, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_text_file(path, content);
        written.push_back(path);
    };

    emit("verdict.json", verdict.report.dump(2) + "\n");

    const json& rep = verdict.report;
    if (rep.contains("c0") && rep["c0"].contains("levels")) {
        std::ostringstream os;
        os << "eps,fraction\n";
        for (const auto& lvl : rep["c0"]["levels"]) {
            os << lvl["eps"].get<double>() << "," << lvl["fraction"].get<double>() << "\n";
        }
        emit("coverage.csv", os.str());
    }
    if (rep.contains("analytic") && rep["analytic"].contains("dimension")) {
        // scales.csv: the box-counting table; correlation.csv: the pair counts.
        for (const char* key : {"box", "correlation"}) {
            const auto& est = rep["analytic"]["dimension"][key];
            const bool box = std::string(key) == "box";
            std::ostringstream os;
            os << (box ? "eps,count\n" : "r,c\n");
            for (const auto& row : est["table"]) {
                os << row["scale"].get<double>() << "," << row["value"].get<double>() << "\n";
            }
            emit(box ? "scales.csv" : "correlation.csv", os.str());
        }
    }
    return written;
}

}  // namespace dynid
