#include "dynid/ideal.hpp"

#include <random>

namespace dynid {

namespace {

// Blockwise QR reduction: feeds rows through a sliding [R; chunk] factor-
// ization so only an m x m triangle stays in memory. The right singular
// vectors and singular values of the accumulated matrix equal those of R.
class RowReducer {
  public:
    explicit RowReducer(int cols, int chunk = 4096)
        : m_(cols), chunk_(std::max(chunk, 2 * cols)), buf_(chunk_ + cols, cols), rows_in_buf_(0),
          have_r_(false) {}

    void add_row(const Eigen::RowVectorXd& row) {
        buf_.row(r_rows() + rows_in_buf_) = row;
        ++rows_in_buf_;
        ++total_rows_;
        if (rows_in_buf_ == chunk_) reduce();
    }

    std::size_t total_rows() const { return total_rows_; }

    Mat finish() {
        if (rows_in_buf_ > 0 || !have_r_) reduce();
        return r_;
    }

  private:
    int r_rows() const { return have_r_ ? m_ : 0; }

    void reduce() {
        const int rows = r_rows() + rows_in_buf_;
        if (rows == 0) {
            r_ = Mat::Zero(m_, m_);
            have_r_ = true;
            return;
        }
        Eigen::HouseholderQR<Mat> qr(buf_.topRows(rows));
        Mat R = qr.matrixQR().topRows(std::min(rows, m_)).triangularView<Eigen::Upper>();
        r_ = Mat::Zero(m_, m_);
        r_.topRows(R.rows()) = R;
        have_r_ = true;
        rows_in_buf_ = 0;
        buf_.topRows(m_) = r_;
    }

    int m_;
    int chunk_;
    Mat buf_;
    int rows_in_buf_;
    bool have_r_;
    Mat r_;
    std::size_t total_rows_ = 0;
};

// Fix the sign so the trailing significant coefficient is positive; keeps
// certificates comparable across runs and linear-algebra backends.
void canonicalize_sign(Vec& c) {
    const double top = c.cwiseAbs().maxCoeff();
    if (top == 0.0) return;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        if (std::abs(c[k]) >= 1e-9 * top) {
            if (c[k] < 0) c = -c;
            return;
        }
    }
}

int trailing_significant(const Vec& c, double rel = 1e-3) {
    const double top = c.cwiseAbs().maxCoeff();
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        if (std::abs(c[k]) >= rel * top) return k;
    }
    return -1;
}

}  // namespace

Mat monomial_matrix(const std::vector<Vec>& points, const MonomialBasis& basis) {
    Mat M(points.size(), basis.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        M.row(i) = basis.eval_row(points[i]).transpose();
    }
    return M;
}

VanishingResult find_vanishing(const std::vector<Vec>& points, int degree,
                               const VanishingOptions& opts) {
    if (points.empty()) throw ValidationError("find_vanishing: no points");
    const int d = static_cast<int>(points.front().size());
    auto basis = MonomialBasis::get(d, degree);
    const int m = basis->size();
    const std::size_t n = points.size();
    if (n < static_cast<std::size_t>(m)) {
        throw UnderdeterminedError("find_vanishing: " + std::to_string(n) + " samples for " +
                                   std::to_string(m) + " basis monomials");
    }

    VanishingResult result;
    result.degree = degree;
    result.undersampled_warning = n < static_cast<std::size_t>(2 * m);
    result.rescale = AffineRescale::fit(points);

    RowReducer red(m);
    for (const auto& p : points) {
        red.add_row(basis->eval_row(result.rescale.forward(p)).transpose());
    }
    const Mat R = red.finish();
    Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeFullV);
    const Vec& sig = svd.singularValues();
    const double sig_max = sig[0];
    if (sig_max == 0.0) throw DegenerateInputError("find_vanishing: zero data matrix");
    result.smallest_ratio = sig[m - 1] / sig_max;

    for (int k = 0; k < m; ++k) {
        const double ratio = sig[k] / sig_max;
        if (ratio > opts.tol) continue;
        Vec c = svd.matrixV().col(k);
        // Constant-only polynomials are excluded: they cannot vanish on data.
        if (c.tail(m - 1).norm() < opts.nonconstant_floor) continue;
        canonicalize_sign(c);

        VanishingCertificate cert;
        cert.basis = basis;
        cert.coeffs = c;
        cert.degree = degree;
        cert.singular_value = sig[k];
        cert.singular_ratio = ratio;
        cert.rescale = result.rescale;
        double res = 0;
        for (const auto& p : points) {
            res = std::max(res, std::abs(basis->eval(c, result.rescale.forward(p))));
        }
        cert.residual = res;
        result.certificates.push_back(std::move(cert));
    }
    // Most-null certificates first.
    std::sort(result.certificates.begin(), result.certificates.end(),
              [](const auto& a, const auto& b) { return a.singular_value < b.singular_value; });
    return result;
}

AlternativeField alternative_field(const VectorField& F, const VanishingCertificate& g,
                                   const VectorField& W, const std::vector<Vec>& points,
                                   double tol, int max_degree) {
    if (g.residual > tol) {
        throw PreconditionError("alternative_field: certificate residual " +
                                std::to_string(g.residual) + " exceeds tol");
    }
    const int m = g.basis->size();
    if (m < 2 || g.coeffs.tail(m - 1).norm() < 1e-9) {
        throw PreconditionError("alternative_field: certificate is (near-)constant");
    }
    if (points.empty()) throw ValidationError("alternative_field: no sample points");

    // Monic in the trailing graded-lex monomial: makes the constructed
    // field reproducible and matches hand-written generator polynomials.
    const int lead = trailing_significant(g.coeffs);
    Vec monic = g.coeffs / g.coeffs[lead];
    const double monic_factor = std::abs(1.0 / g.coeffs[lead]);

    // Certificate lives in normalized coordinates; push it back to raw ones.
    Poly g_hat(g.basis, monic);
    Poly g_raw = g.rescale.is_identity()
                     ? g_hat
                     : affine_substitute(g_hat, g.rescale.scale, g.rescale.offset);

    AlternativeField out;
    out.field = F.add_scaled(g_raw, W, max_degree, F.id() + "+certificate*W");

    for (const auto& p : points) {
        out.max_sample_deviation =
            std::max(out.max_sample_deviation, (out.field(p) - F(p)).norm());
        out.sample_scale = std::max(out.sample_scale, W(p).norm());
    }
    if (out.max_sample_deviation > tol * monic_factor * std::max(out.sample_scale, 1.0)) {
        throw NumericalError("alternative_field: constructed field deviates on the samples");
    }

    // Probe candidates: corners and axis points of the doubled data box.
    Vec lo = points.front(), hi = points.front();
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec center = 0.5 * (lo + hi);
    const Vec half = 0.5 * (hi - lo).cwiseMax(1e-6);
    const int d = F.dim();
    std::vector<Vec> candidates;
    for (double f : {1.5, 2.0}) {
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vec c = center;
            for (int i = 0; i < d; ++i) c[i] += ((mask >> i) & 1 ? f : -f) * half[i];
            candidates.push_back(c);
        }
        for (int i = 0; i < d; ++i) {
            for (double s : {-1.0, 1.0}) {
                Vec c = center;
                c[i] += s * 2.0 * f * half[i];
                candidates.push_back(c);
            }
        }
    }
    out.probe_divergence = -1;
    for (const auto& c : candidates) {
        const double dev = (out.field(c) - F(c)).norm();
        if (dev > out.probe_divergence) {
            out.probe_divergence = dev;
            out.probe = c;
        }
    }
    if (out.probe_divergence < 1e-3) {
        throw NumericalError(
            "alternative_field: could not exhibit an off-sample point where the fields differ");
    }
    return out;
}

FirstIntegralResult find_first_integral(const VectorField& F, const std::vector<Vec>& points,
                                        int degree, const FirstIntegralOptions& opts) {
    if (points.empty()) throw ValidationError("find_first_integral: no points");
    const int d = F.dim();
    check_dim(points.front(), d, "find_first_integral");
    auto basis = MonomialBasis::get(d, degree);
    const int m = basis->size();
    const int cols = m - 1;  // non-constant monomials only
    if (cols < 1) throw ValidationError("find_first_integral: degree must be >= 1");

    const AffineRescale rescale = AffineRescale::fit(points);

    // Row recipe: d/dv of each monomial contributes alpha_v * u^(alpha - e_v).
    struct Term {
        int var;
        int power;
        int src;  // basis index of alpha - e_v
    };
    std::vector<std::vector<Term>> terms(cols);
    for (int k = 1; k < m; ++k) {
        const auto& e = basis->exponent(k);
        for (int v = 0; v < d; ++v) {
            if (e[v] > 0) {
                Exponents de = e;
                de[v] -= 1;
                terms[k - 1].push_back({v, e[v], basis->index_of(de)});
            }
        }
    }

    RowReducer red(cols);
    std::size_t degenerate_rows = 0;
    Eigen::RowVectorXd row(cols);
    for (const auto& p : points) {
        const Vec u_hat = rescale.forward(p);
        const Vec f_hat = rescale.scale.cwiseProduct(F(p));
        const double fn = f_hat.norm();
        if (fn < 1e-12) {
            ++degenerate_rows;
            continue;
        }
        const Vec mono = basis->eval_row(u_hat);
        for (int k = 0; k < cols; ++k) {
            double v = 0;
            for (const auto& t : terms[k]) v += t.power * mono[t.src] * f_hat[t.var];
            row[k] = v / fn;
        }
        red.add_row(row);
    }
    if (red.total_rows() == 0) {
        throw DegenerateInputError("find_first_integral: all rows degenerate (field vanishes on data)");
    }
    if (red.total_rows() < static_cast<std::size_t>(cols)) {
        throw UnderdeterminedError("find_first_integral: fewer usable samples than monomials");
    }
    const Mat R = red.finish();
    Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeFullV);
    Vec c_small = svd.matrixV().col(cols - 1);
    canonicalize_sign(c_small);

    FirstIntegralResult result;
    Vec full = Vec::Zero(m);
    full.tail(cols) = c_small;

    // Residual straight from the data: RMS of the normalized directional
    // derivatives along the field.
    auto grad_dot = [&](const Vec& p) {
        const Vec u_hat = rescale.forward(p);
        const Vec f_hat = rescale.scale.cwiseProduct(F(p));
        const double fn = f_hat.norm();
        if (fn < 1e-12) return std::numeric_limits<double>::quiet_NaN();
        return basis->eval_grad(full, u_hat).dot(f_hat) / fn;
    };
    double ss = 0;
    std::size_t cnt = 0;
    for (const auto& p : points) {
        const double v = grad_dot(p);
        if (std::isfinite(v)) {
            ss += v * v;
            ++cnt;
        }
    }
    result.best_residual = std::sqrt(ss / std::max<std::size_t>(cnt, 1));

    // Fresh start for cross-validation: off the centroid, jittered by seed,
    // nudged until the field is non-degenerate there.
    Vec lo = points.front(), hi = points.front();
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec center = 0.5 * (lo + hi);
    const Vec half = (0.5 * (hi - lo)).cwiseMax(1e-3);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jit(-0.05, 0.05);
    Vec x0 = center;
    for (int i = 0; i < d; ++i) x0[i] += (opts.fresh_offset + jit(rng)) * half[i];
    for (int tries = 0; tries < 8 && F(x0).norm() < 1e-10; ++tries) {
        for (int i = 0; i < d; ++i) x0[i] = center[i] + (opts.fresh_offset + jit(rng)) * half[i];
    }
    result.fresh_x0 = x0;

    if (result.best_residual > opts.tol) {
        return result;  // no candidate worth validating
    }

    Trajectory fresh = flow(F, x0, opts.cv_config);
    double g0 = basis->eval(full, rescale.forward(fresh.states.front()));
    double drift = 0;
    double gmin = g0, gmax = g0;
    for (const auto& s : fresh.states) {
        const double gv = basis->eval(full, rescale.forward(s));
        drift = std::max(drift, std::abs(gv - g0));
        gmin = std::min(gmin, gv);
        gmax = std::max(gmax, gv);
    }
    for (const auto& p : points) {
        const double gv = basis->eval(full, rescale.forward(p));
        gmin = std::min(gmin, gv);
        gmax = std::max(gmax, gv);
    }
    const double range = gmax - gmin;
    result.best_cv_drift = drift;

    const double allowed = opts.cv_factor * opts.tol * std::max(range, 1e-3);
    if (drift <= allowed) {
        FirstIntegralCertificate cert;
        cert.basis = basis;
        cert.coeffs = full;
        cert.residual = result.best_residual;
        cert.cv_drift = drift;
        cert.g_range = range;
        cert.cv_drift_relative = drift / std::max(range, 1e-3);
        cert.degree = degree;
        cert.rescale = rescale;
        result.certificate = std::move(cert);
    }
    return result;
}

}  // namespace dynid
