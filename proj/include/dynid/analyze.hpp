#ifndef DYNID_ANALYZE_HPP
#define DYNID_ANALYZE_HPP

#include "dynid/conservation.hpp"
#include "dynid/coverage.hpp"
#include "dynid/dimension.hpp"
#include "dynid/ideal.hpp"
#include "dynid/integrate.hpp"
#include "dynid/io.hpp"

#include <optional>

namespace dynid {

enum class Overall { discoverable_evidence, non_discoverable_certified, inconclusive };
const char* to_string(Overall o);

enum class FunctionClass { continuous, analytic };

struct AnalyzeConfig {
    // Data source: a catalog system to simulate, or trajectory CSV files.
    std::string system;
    std::map<std::string, double> params;
    std::optional<Vec> x0;                  // defaults to the catalog entry's
    std::vector<std::string> trajectory_files;

    FunctionClass function_class = FunctionClass::analytic;
    int degree = 4;                          // polynomial truncation of the class
    std::vector<double> eps_schedule = {0.25, 0.1, 0.05};  // normalized units
    double tol_frac = 1e-3;

    IntegratorConfig integrator = default_integrator();

    bool run_dimension = true;
    bool run_vanishing = true;
    bool run_first_integral = true;
    double tol_vanishing = 1e-8;
    double tol_first_integral = 1e-6;
    std::optional<double> margin;            // dimension-criterion margin

    // Dimension scale schedules, in normalized units.
    double box_eps_hi = 0.5, box_eps_lo = 0.5 / 128.0;
    int box_levels = 8;
    double corr_r_hi = 1.0, corr_r_lo = 0.01;
    int corr_levels = 10;

    std::string law;                         // optional conservation-law id
    std::optional<Vec> law_point;            // witness point for the kernel test

    unsigned long seed = 0;

    static IntegratorConfig default_integrator() {
        IntegratorConfig c;
        c.t_end = 500.0;
        c.t_burn = 100.0;
        c.sample_dt = 0.01;
        return c;
    }

    json to_json() const;
    static AnalyzeConfig from_json(const json& j);
};

/// Per-function-class discoverability conclusion with its evidence. The
/// `report` member is the complete machine-readable record; rerunning
/// analyze on report["parameters"] reproduces it byte for byte.
struct UniquenessVerdict {
    Overall overall = Overall::inconclusive;
    std::string reason;
    bool dense_evidence = false;
    std::size_t n_vanishing_certificates = 0;
    bool first_integral_found = false;
    json report;
};

UniquenessVerdict analyze(const AnalyzeConfig& config);

/// Write the verdict JSON plus plot-data CSVs (coverage curve, dimension
/// scale tables, phase samples) into out_dir. Returns the file paths.
std::vector<std::string> write_report(const UniquenessVerdict& verdict,
                                      const std::string& out_dir);

}  // namespace dynid

#endif  // DYNID_ANALYZE_HPP
