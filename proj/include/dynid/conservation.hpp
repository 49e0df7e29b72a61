#ifndef DYNID_CONSERVATION_HPP
#define DYNID_CONSERVATION_HPP

#include "dynid/conservation_law.hpp"
#include "dynid/core.hpp"
#include "dynid/vector_field.hpp"

namespace dynid {

enum class SymmetryKind { symmetric, skew, neither };

struct SymmetryClass {
    SymmetryKind kind = SymmetryKind::neither;
    /// Worst-case relative deviation from the matching condition over the
    /// probes: min over {sym, skew} of max |J -/+ J^T| / |J|.
    double max_asymmetry = 0;
};

const char* to_string(SymmetryKind k);

/// Classify the Jacobian of F as symmetric, skew-symmetric or neither from
/// random probes in the given box (default [-1,1]^d).
SymmetryClass symmetry_class(const VectorField& F, int probes = 100,
                             const Domain* domain = nullptr, unsigned long seed = 0,
                             double tol = 1e-8);

enum class HessianVerdict { uniqueness_evidence, numerically_marginal, inconclusive };

struct HessianReport {
    Vec witness;              // point maximizing |det hess_v H(F(p), p)|
    double witness_det = 0;   // det at the witness
    double max_abs_det = 0;
    double min_abs_det = 0;   // over all points (diagnostic)
    double grad_norm = 0;     // max |grad_v H(F(u_i), u_i)| over points
    HessianVerdict verdict = HessianVerdict::inconclusive;
};

/// Checks the constraint-stationarity of H along F on the points and looks
/// for a witness where the v-Hessian is non-singular: evidence that H pins
/// the field down. Gross stationarity violations (worse than grad_tol_hard)
/// throw PreconditionError naming the worst point.
HessianReport hessian_test(const ConservationLaw& H, const VectorField& F,
                           const std::vector<Vec>& points, double grad_tol = 1e-8,
                           double det_tol = 1e-8, double det_marginal = 1e-12,
                           double grad_tol_hard = 1e-4);

enum class KernelVerdict { uniqueness_evidence, gate_failed, inclusion_failed, inconclusive };

struct KernelInclusionReport {
    int ker_dim = 0;
    int tangent_dim = 0;
    double max_principal_angle = 0;  // radians; 0 when the kernel is trivial
    SymmetryClass gate;
    bool inclusion_holds = false;
    KernelVerdict verdict = KernelVerdict::inconclusive;
    int local_samples = 0;
    double angle_tol = 0;
};

struct KernelInclusionOptions {
    double point_match_tol = 1e-3;   // p must sit on the trajectory
    double local_radius = 0.05;      // tangent-estimation neighborhood
    double variance_kept = 0.99;     // PCA components kept
    double kernel_rel_tol = 1e-8;    // sigma/sigma_max threshold for ker(C)
    double angle_tol = 1e-3;         // radians
    int min_local_samples = 5;
    int gate_probes = 100;
    unsigned long seed = 0;
};

/// Tests ker(hess_v H(F(p), p)) against the trajectory's tangent space at p
/// (local PCA). Uniqueness evidence requires the inclusion AND a symmetric
/// or skew-symmetric Jacobian gate; the gate is load-bearing.
KernelInclusionReport kernel_inclusion_test(const ConservationLaw& H, const VectorField& F,
                                            const Trajectory& traj, const Vec& p,
                                            const KernelInclusionOptions& opts = {});

}  // namespace dynid

#endif  // DYNID_CONSERVATION_HPP
