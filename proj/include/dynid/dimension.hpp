#ifndef DYNID_DIMENSION_HPP
#define DYNID_DIMENSION_HPP

#include "dynid/core.hpp"

#include <optional>

namespace dynid {

enum class DimensionMethod { box_counting, correlation };

struct ScalePoint {
    double scale = 0;   // eps or r
    double value = 0;   // N(eps) or C(r)
};

struct DimensionEstimate {
    DimensionMethod method = DimensionMethod::box_counting;
    double value = 0;
    double ci_halfwidth = 0;
    double fit_scale_lo = 0, fit_scale_hi = 0;  // fitted window, in scale units
    double r2 = 0;
    std::size_t n_points = 0;
    std::vector<ScalePoint> table;  // full scale/count table for re-fitting
    bool degenerate_warning = false;
};

/// Geometric schedule of n values from hi down to lo (inclusive).
std::vector<double> geometric_schedule(double hi, double lo, int n);

/// Box-counting estimate: slope of log N(eps) against log(1/eps) over the
/// best-R^2 contiguous window of >= 4 levels. Points are normalized onto
/// [-1,1]^d internally; eps values are in normalized units.
DimensionEstimate box_counting_dimension(const std::vector<Vec>& points,
                                         const std::vector<double>& eps_schedule);

struct CorrelationOptions {
    std::size_t max_pairs_points = 20000;  // subsample cap (strided)
    int theiler_window = 5;                // skip near-in-time pairs
};

/// Correlation-integral estimate: slope of log C(r) against log r over the
/// best-R^2 window, with C(r) the fraction of pairs closer than r.
DimensionEstimate correlation_dimension(const std::vector<Vec>& points,
                                        const std::vector<double>& r_schedule,
                                        const CorrelationOptions& opts = {});

enum class CriterionVerdict { uniqueness_evidence, inconclusive };

struct DimensionCriterionReport {
    CriterionVerdict verdict = CriterionVerdict::inconclusive;
    double value = 0;
    double margin = 0;
    int ambient_dim = 0;
    double threshold = 0;  // ambient_dim - 1
    /// Box/correlation estimates approximate (and upper-bound) Hausdorff
    /// dimension, so a pass is evidence, not proof.
    std::string caveat;
};

/// Evidence that the sampled set is large enough for analytic uniqueness:
/// passes iff value - margin > d - 1. Default margin is 2x the estimate's
/// confidence halfwidth.
DimensionCriterionReport dimension_criterion(const DimensionEstimate& est, int ambient_dim,
                                             std::optional<double> margin = std::nullopt);

}  // namespace dynid

#endif  // DYNID_DIMENSION_HPP
