#include "dynid/dimension.hpp"

#include "dynid/coverage.hpp"

namespace dynid {

namespace {

struct FitResult {
    double slope = 0, stderr_slope = 0, r2 = 0;
    int lo = 0, hi = 0;  // window [lo, hi] inclusive
};

// Least squares y = a + b x; returns slope, its standard error and R^2.
void ols(const std::vector<double>& x, const std::vector<double>& y, int lo, int hi, double& slope,
         double& se, double& r2) {
    const int n = hi - lo + 1;
    double sx = 0, sy = 0;
    for (int i = lo; i <= hi; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = lo; i <= hi; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    slope = sxy / sxx;
    double ss_res = 0;
    for (int i = lo; i <= hi; ++i) {
        const double pred = my + slope * (x[i] - mx);
        ss_res += (y[i] - pred) * (y[i] - pred);
    }
    r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    se = (n > 2 && sxx > 0) ? std::sqrt(std::max(0.0, ss_res / (n - 2)) / sxx) : 0.0;
}

// Best-R^2 contiguous window of >= min_len points; ties go to longer, then
// earlier windows so the choice is deterministic.
FitResult best_window_fit(const std::vector<double>& x, const std::vector<double>& y,
                          int min_len) {
    const int n = static_cast<int>(x.size());
    if (n < min_len) throw DegenerateInputError("dimension fit: fewer scales than window length");
    FitResult best;
    bool have = false;
    for (int len = n; len >= min_len; --len) {
        for (int lo = 0; lo + len - 1 < n; ++lo) {
            const int hi = lo + len - 1;
            double slope, se, r2;
            ols(x, y, lo, hi, slope, se, r2);
            if (!have || r2 > best.r2 + 1e-12) {
                best = {slope, se, r2, lo, hi};
                have = true;
            }
        }
    }
    return best;
}

std::vector<Vec> normalize_points(const std::vector<Vec>& points) {
    const AffineRescale r = AffineRescale::fit(points);
    return r.is_identity() ? points : r.forward_all(points);
}

}  // namespace

std::vector<double> geometric_schedule(double hi, double lo, int n) {
    if (!(hi > lo) || lo <= 0 || n < 2) throw ValidationError("geometric_schedule: bad arguments");
    std::vector<double> s(n);
    const double q = std::pow(lo / hi, 1.0 / (n - 1));
    double v = hi;
    for (int i = 0; i < n; ++i, v *= q) s[i] = v;
    s.back() = lo;
    return s;
}

DimensionEstimate box_counting_dimension(const std::vector<Vec>& points,
                                         const std::vector<double>& eps_schedule) {
    if (points.size() < 10000) {
        throw ValidationError("box_counting_dimension: need >= 1e4 points");
    }
    if (eps_schedule.size() < 6) {
        throw ValidationError("box_counting_dimension: need >= 6 eps levels");
    }
    for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i + 1] < eps_schedule[i])) {
            throw ValidationError("box_counting_dimension: eps schedule must decrease");
        }
    }

    DimensionEstimate est;
    est.method = DimensionMethod::box_counting;
    est.n_points = points.size();

    const std::vector<Vec> pts = normalize_points(points);

    // Degenerate cloud: every point in one cell at all scales.
    Vec lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    if ((hi - lo).lpNorm<Eigen::Infinity>() == 0.0) {
        est.value = 0.0;
        est.degenerate_warning = true;
        return est;
    }

    // Grid over a slightly padded box so boundary points do not alias.
    const Domain box(Vec(lo.array() - 1e-9), Vec(hi.array() + 1e-9));
    std::vector<double> xs, ys;
    for (double eps : eps_schedule) {
        const BoxCover cover = box_cover(pts, box, eps);
        est.table.push_back({eps, static_cast<double>(cover.occupied.size())});
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(static_cast<double>(cover.occupied.size())));
    }

    const FitResult fit = best_window_fit(xs, ys, 4);
    est.value = fit.slope;
    est.ci_halfwidth = 2.0 * fit.stderr_slope;
    est.r2 = fit.r2;
    est.fit_scale_lo = eps_schedule[fit.hi];  // finer end of the window
    est.fit_scale_hi = eps_schedule[fit.lo];
    return est;
}

DimensionEstimate correlation_dimension(const std::vector<Vec>& points,
                                        const std::vector<double>& r_schedule,
                                        const CorrelationOptions& opts) {
    if (points.size() < 10000) {
        throw ValidationError("correlation_dimension: need >= 1e4 points");
    }
    if (r_schedule.size() < 6) {
        throw ValidationError("correlation_dimension: need >= 6 r levels");
    }
    for (std::size_t i = 0; i + 1 < r_schedule.size(); ++i) {
        if (!(r_schedule[i + 1] < r_schedule[i])) {
            throw ValidationError("correlation_dimension: r schedule must decrease");
        }
    }

    const std::vector<Vec> all = normalize_points(points);
    // Deterministic strided subsample for the O(n^2) pair pass.
    std::vector<Vec> pts;
    if (all.size() > opts.max_pairs_points) {
        const std::size_t stride = (all.size() + opts.max_pairs_points - 1) / opts.max_pairs_points;
        for (std::size_t i = 0; i < all.size(); i += stride) pts.push_back(all[i]);
    } else {
        pts = all;
    }
    const std::size_t n = pts.size();

    Vec lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    if ((hi - lo).lpNorm<Eigen::Infinity>() == 0.0) {
        throw DegenerateInputError("correlation_dimension: all points identical");
    }

    // One pass over pairs, binned by the schedule (descending): count of
    // pairs with dist < r accumulates over suffixes.
    std::vector<double> r2s;
    for (double r : r_schedule) r2s.push_back(r * r);
    std::vector<std::uint64_t> bins(r_schedule.size(), 0);
    std::uint64_t total_pairs = 0;
    const int w = opts.theiler_window;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + static_cast<std::size_t>(std::max(1, w + 1)); j < n; ++j) {
            const double d2 = (pts[i] - pts[j]).squaredNorm();
            ++total_pairs;
            // Find the finest level whose radius still exceeds the distance.
            int k = -1;
            for (int lvl = 0; lvl < static_cast<int>(r2s.size()); ++lvl) {
                if (d2 < r2s[lvl]) {
                    k = lvl;
                } else {
                    break;
                }
            }
            if (k >= 0) ++bins[k];
        }
    }
    if (total_pairs == 0) throw DegenerateInputError("correlation_dimension: no admissible pairs");

    // bins[k] holds pairs whose finest containing level is k, so the
    // correlation count at level k is the fine-side suffix sum.
    std::vector<std::uint64_t> cum(r_schedule.size(), 0);
    std::uint64_t acc = 0;
    for (int k = static_cast<int>(r_schedule.size()) - 1; k >= 0; --k) {
        acc += bins[k];
        cum[k] = acc;
    }

    DimensionEstimate est;
    est.method = DimensionMethod::correlation;
    est.n_points = n;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < r_schedule.size(); ++k) {
        const double c = static_cast<double>(cum[k]) / static_cast<double>(total_pairs);
        est.table.push_back({r_schedule[k], c});
        if (cum[k] > 0) {
            xs.push_back(std::log(r_schedule[k]));
            ys.push_back(std::log(c));
        }
    }
    if (xs.size() < 4) throw DegenerateInputError("correlation_dimension: too few populated levels");

    const FitResult fit = best_window_fit(xs, ys, 4);
    est.value = fit.slope;
    est.ci_halfwidth = 2.0 * fit.stderr_slope;
    est.r2 = fit.r2;
    est.fit_scale_lo = std::exp(xs[fit.hi]);
    est.fit_scale_hi = std::exp(xs[fit.lo]);
    return est;
}

DimensionCriterionReport dimension_criterion(const DimensionEstimate& est, int ambient_dim,
                                             std::optional<double> margin) {
    const double m = margin.value_or(2.0 * est.ci_halfwidth);
    if (m < 0) throw ValidationError("dimension_criterion: margin must be >= 0");
    DimensionCriterionReport rep;
    rep.value = est.value;
    rep.margin = m;
    rep.ambient_dim = ambient_dim;
    rep.threshold = ambient_dim - 1.0;
    rep.caveat =
        "box/correlation estimates approximate Hausdorff dimension from above; "
        "a pass is evidence, not proof";
    rep.verdict = (est.value - m > rep.threshold) ? CriterionVerdict::uniqueness_evidence
                                                  : CriterionVerdict::inconclusive;
    return rep;
}

}  // namespace dynid
