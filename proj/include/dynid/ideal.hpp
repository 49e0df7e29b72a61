#ifndef DYNID_IDEAL_HPP
#define DYNID_IDEAL_HPP

#include "dynid/integrate.hpp"
#include "dynid/monomial.hpp"
#include "dynid/vector_field.hpp"

#include <optional>

namespace dynid {

/// A nonzero polynomial that vanishes on the sampled set: constructive
/// evidence against analytic uniqueness up to the stated degree. The
/// coefficient vector has unit Euclidean norm and lives in the normalized
/// coordinates recorded in `rescale`.
struct VanishingCertificate {
    std::shared_ptr<const MonomialBasis> basis;
    Vec coeffs;            // unit norm, graded-lex order
    double residual = 0;   // max over samples of |g(u_i)|
    double singular_value = 0;
    double singular_ratio = 0;  // sigma / sigma_max
    int degree = 0;
    AffineRescale rescale;

    Poly poly() const { return Poly(basis, coeffs); }
    /// Evaluate on a raw (unnormalized) state.
    double eval_raw(const Vec& u) const { return poly()(rescale.forward(u)); }
};

struct VanishingOptions {
    double tol = 1e-8;               // relative singular-value threshold
    double nonconstant_floor = 1e-6; // reject near-constant null vectors
};

/// Values of every basis monomial at every point: M(i, alpha) = u_i^alpha.
/// Points are expected in normalized coordinates ([-1,1]^d).
Mat monomial_matrix(const std::vector<Vec>& points, const MonomialBasis& basis);

/// All polynomials of degree <= D vanishing on the points, found as the
/// near-null right singular vectors of the monomial matrix. An empty result
/// is evidence (not proof) that no polynomial obstruction exists up to D.
/// Throws UnderdeterminedError when there are fewer samples than basis
/// monomials; emits a warning flag below 2x that size.
struct VanishingResult {
    std::vector<VanishingCertificate> certificates;
    double smallest_ratio = 0;  // min sigma/sigma_max seen (diagnostic)
    bool undersampled_warning = false;
    AffineRescale rescale;
    int degree = 0;
};
VanishingResult find_vanishing(const std::vector<Vec>& points, int degree,
                               const VanishingOptions& opts = {});

/// F2 = F + g W: a distinct field agreeing with F on the samples where g
/// vanishes. Verifies agreement on the samples and reports an off-sample
/// probe where the two fields genuinely differ.
struct AlternativeField {
    VectorField field;
    double max_sample_deviation = 0;  // max_i |F2(u_i) - F(u_i)|
    double sample_scale = 0;          // max_i |W(u_i)|, deviation reference
    Vec probe;                        // off-sample point with F2 != F
    double probe_divergence = 0;      // |F2(probe) - F(probe)|
};
AlternativeField alternative_field(const VectorField& F, const VanishingCertificate& g,
                                   const VectorField& W, const std::vector<Vec>& points,
                                   double tol = 1e-6, int max_degree = 12);

/// A polynomial G with grad(G) . F ~ 0 on the data: a first integral
/// certificate. Its existence certifies analytic non-discoverability.
struct FirstIntegralCertificate {
    std::shared_ptr<const MonomialBasis> basis;
    Vec coeffs;                 // unit norm; constant monomial always zero
    double residual = 0;        // RMS of |grad G . F| / |F| over samples
    double cv_drift = 0;        // max |G(u(t)) - G(u(0))| on a fresh trajectory
    double cv_drift_relative = 0;
    double g_range = 0;         // spread of G over fit + validation samples
    int degree = 0;
    AffineRescale rescale;

    Poly poly() const { return Poly(basis, coeffs); }
    double eval_raw(const Vec& u) const { return poly()(rescale.forward(u)); }
};

struct FirstIntegralOptions {
    double tol = 1e-6;            // residual acceptance threshold
    double cv_factor = 10.0;      // drift allowed up to cv_factor * tol * range
    double fresh_offset = 0.37;   // fresh start: centroid + offset * halfwidth
    IntegratorConfig cv_config{};
    unsigned long seed = 0;       // jitters the fresh start deterministically
};

struct FirstIntegralResult {
    std::optional<FirstIntegralCertificate> certificate;
    double best_residual = 0;     // residual of the best candidate either way
    double best_cv_drift = 0;
    Vec fresh_x0;
};

/// Search for a polynomial first integral of F up to the given degree using
/// the sampled states; validated on a freshly integrated trajectory that
/// took no part in the fit. Returns no certificate when the best candidate
/// misses the residual or cross-validation gate.
FirstIntegralResult find_first_integral(const VectorField& F, const std::vector<Vec>& points,
                                        int degree, const FirstIntegralOptions& opts = {});

}  // namespace dynid

#endif  // DYNID_IDEAL_HPP
