#include "dynid/conservation.hpp"

#include <random>
#include <sstream>

namespace dynid {

const char* to_string(SymmetryKind k) {
    switch (k) {
        case SymmetryKind::symmetric: return "symmetric";
        case SymmetryKind::skew: return "skew";
        default: return "neither";
    }
}

SymmetryClass symmetry_class(const VectorField& F, int probes, const Domain* domain,
                             unsigned long seed, double tol) {
    if (probes < 10) throw ValidationError("symmetry_class: need >= 10 probes");
    const int d = F.dim();
    Domain box = domain ? *domain : Domain::centered_cube(d, 1.0);
    if (box.dim() != d) throw DimensionMismatchError("symmetry_class: domain/field dims differ");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst_sym = 0, worst_skew = 0;
    int used = 0;
    for (int k = 0; k < probes; ++k) {
        Vec u(d);
        for (int i = 0; i < d; ++i) u[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
        const Mat J = F.jacobian(u);
        const double nj = J.norm();
        if (nj < 1e-14) continue;  // exactly zero Jacobian constrains nothing
        worst_sym = std::max(worst_sym, (J - J.transpose()).norm() / nj);
        worst_skew = std::max(worst_skew, (J + J.transpose()).norm() / nj);
        ++used;
    }
    SymmetryClass out;
    if (used == 0) {
        // Zero Jacobian everywhere probed: symmetric (and skew) trivially.
        out.kind = SymmetryKind::symmetric;
        out.max_asymmetry = 0;
        return out;
    }
    if (worst_sym <= tol) {
        out.kind = SymmetryKind::symmetric;
        out.max_asymmetry = worst_sym;
    } else if (worst_skew <= tol) {
        out.kind = SymmetryKind::skew;
        out.max_asymmetry = worst_skew;
    } else {
        out.kind = SymmetryKind::neither;
        out.max_asymmetry = std::min(worst_sym, worst_skew);
    }
    return out;
}

HessianReport hessian_test(const ConservationLaw& H, const VectorField& F,
                           const std::vector<Vec>& points, double grad_tol, double det_tol,
                           double det_marginal, double grad_tol_hard) {
    if (points.empty()) throw ValidationError("hessian_test: no points");
    HessianReport rep;
    rep.min_abs_det = std::numeric_limits<double>::infinity();
    rep.max_abs_det = -1;

    double worst_grad = 0;
    Vec worst_point = points.front();
    for (const auto& u : points) {
        const Vec f = F(u);
        const double gn = H.grad_v(f, u).norm();
        if (gn > worst_grad) {
            worst_grad = gn;
            worst_point = u;
        }
        const double det = H.hess_v(f, u).determinant();
        const double ad = std::abs(det);
        rep.min_abs_det = std::min(rep.min_abs_det, ad);
        if (ad > rep.max_abs_det) {
            rep.max_abs_det = ad;
            rep.witness = u;
            rep.witness_det = det;
        }
    }
    rep.grad_norm = worst_grad;

    if (worst_grad > grad_tol_hard) {
        std::ostringstream os;
        os << "hessian_test: stationarity violated, |grad_v H(F(u),u)| = " << worst_grad
           << " at u = [" << worst_point.transpose() << "]";
        throw PreconditionError(os.str());
    }

    if (worst_grad <= grad_tol && rep.max_abs_det >= det_tol) {
        rep.verdict = HessianVerdict::uniqueness_evidence;
    } else if (worst_grad <= grad_tol && rep.max_abs_det >= det_marginal) {
        rep.verdict = HessianVerdict::numerically_marginal;
    } else {
        rep.verdict = HessianVerdict::inconclusive;
    }
    return rep;
}

namespace {

// Orthonormal basis of the span of the eigenvectors selected by `keep`.
Mat selected_columns(const Mat& basis, const std::vector<int>& keep) {
    Mat out(basis.rows(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) out.col(i) = basis.col(keep[i]);
    return out;
}

}  // namespace

KernelInclusionReport kernel_inclusion_test(const ConservationLaw& H, const VectorField& F,
                                            const Trajectory& traj, const Vec& p,
                                            const KernelInclusionOptions& opts) {
    const int d = F.dim();
    check_dim(p, d, "kernel_inclusion_test");

    // p must lie on (or within tolerance of) the trajectory.
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.states) best = std::min(best, (s - p).norm());
    if (best > opts.point_match_tol) {
        throw PreconditionError("kernel_inclusion_test: p is " + std::to_string(best) +
                                " away from the nearest trajectory sample");
    }

    KernelInclusionReport rep;
    rep.angle_tol = opts.angle_tol;

    // Numerical kernel of C = hess_v H(F(p), p).
    const Mat C = H.hess_v(F(p), p);
    Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
    const Vec& sig = svd.singularValues();
    const double smax = sig[0];
    std::vector<int> ker_idx;
    for (int i = 0; i < d; ++i) {
        if (smax == 0.0 || sig[i] <= opts.kernel_rel_tol * smax) ker_idx.push_back(i);
    }
    rep.ker_dim = static_cast<int>(ker_idx.size());

    // Tangent space at p from local PCA of the nearby samples.
    std::vector<const Vec*> local;
    for (const auto& s : traj.states) {
        if ((s - p).norm() <= opts.local_radius) local.push_back(&s);
    }
    rep.local_samples = static_cast<int>(local.size());
    if (rep.local_samples < opts.min_local_samples) {
        throw DegenerateInputError(
            "kernel_inclusion_test: only " + std::to_string(rep.local_samples) +
            " samples within radius " + std::to_string(opts.local_radius) +
            " of p; enlarge the radius or sample more densely");
    }
    Vec mean = Vec::Zero(d);
    for (const auto* s : local) mean += *s;
    mean /= static_cast<double>(local.size());
    Mat cov = Mat::Zero(d, d);
    for (const auto* s : local) {
        const Vec c = *s - mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(local.size());
    Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
    // Eigenvalues ascending; keep the leading components covering the
    // requested variance share.
    const Vec evals = eig.eigenvalues().reverse();
    const double total = std::max(evals.sum(), 1e-300);
    std::vector<int> tan_idx;
    double acc = 0;
    for (int i = 0; i < d; ++i) {
        tan_idx.push_back(d - 1 - i);  // descending order in the solver's basis
        acc += evals[i];
        if (acc / total >= opts.variance_kept) break;
    }
    rep.tangent_dim = static_cast<int>(tan_idx.size());

    // Principal angles between ker(C) and the tangent space.
    if (rep.ker_dim == 0) {
        rep.inclusion_holds = true;  // empty kernel is contained trivially
        rep.max_principal_angle = 0;
    } else if (rep.tangent_dim < rep.ker_dim) {
        rep.inclusion_holds = false;
        rep.max_principal_angle = M_PI / 2;
    } else {
        const Mat Qk = selected_columns(svd.matrixV(), ker_idx);
        const Mat Qt = selected_columns(eig.eigenvectors(), tan_idx);
        Eigen::JacobiSVD<Mat> ang(Qt.transpose() * Qk);
        const double cmin = std::clamp(ang.singularValues().minCoeff(), -1.0, 1.0);
        rep.max_principal_angle = std::acos(cmin);
        rep.inclusion_holds = rep.max_principal_angle <= opts.angle_tol;
    }

    rep.gate = symmetry_class(F, opts.gate_probes, nullptr, opts.seed);

    if (!rep.inclusion_holds) {
        rep.verdict = KernelVerdict::inclusion_failed;
    } else if (rep.gate.kind == SymmetryKind::neither) {
        rep.verdict = KernelVerdict::gate_failed;
    } else {
        rep.verdict = KernelVerdict::uniqueness_evidence;
    }
    return rep;
}

}  // namespace dynid
