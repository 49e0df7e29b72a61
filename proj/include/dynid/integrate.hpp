#ifndef DYNID_INTEGRATE_HPP
#define DYNID_INTEGRATE_HPP

#include "dynid/core.hpp"
#include "dynid/vector_field.hpp"

namespace dynid {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = 0.0;       // 0: no cap beyond the span
    double t_burn = 0.0;         // transient discarded before sampling
    double t_end = 100.0;
    double sample_dt = 0.01;     // fixed output stride (dense output)
    double blowup_norm = 1e8;    // sup-norm escape threshold
    long max_steps = 100000000;

    void validate() const {
        if (rel_tol <= 0 || abs_tol <= 0) throw ValidationError("IntegratorConfig: tolerances must be positive");
        if (t_burn < 0) throw ValidationError("IntegratorConfig: t_burn must be >= 0");
        if (!(t_end > t_burn)) throw ValidationError("IntegratorConfig: t_end must exceed t_burn");
        if (sample_dt <= 0) throw ValidationError("IntegratorConfig: sample_dt must be positive");
    }
};

/// Integrate u' = F(u) from x0 over [0, t_end] with an adaptive embedded
/// Runge-Kutta 5(4) pair; samples on the fixed stride via dense output,
/// discarding t < t_burn. Deterministic for fixed inputs.
///
/// Throws EscapeError when the state sup-norm exceeds cfg.blowup_norm and
/// StiffnessError on step-size underflow.
Trajectory flow(const VectorField& F, const Vec& x0, const IntegratorConfig& cfg);

/// States at caller-chosen times (strictly increasing, >= 0), evaluated
/// through the integrator's dense output.
std::vector<Vec> flow_at_times(const VectorField& F, const Vec& x0,
                               const std::vector<double>& times, const IntegratorConfig& cfg);

struct TrappingReport {
    int probes = 0;
    /// Probes still inside the open box when the horizon ends.
    double fraction_inside_end = 0.0;
    /// Probes that never left the closed box after leaving the start face.
    double fraction_never_left = 0.0;
    /// Worst distance outside the box over all probes and times (0 if none).
    double max_outward_excursion = 0.0;
    /// Smallest final distance to the boundary among retained probes.
    double min_final_boundary_distance = 0.0;
    int escaped_count = 0;  // probes that triggered blow-up
    bool trapping_evidence = false;
};

/// Numerical evidence that U is a trapping region: integrate from
/// boundary-sampled probes over the horizon and summarize containment.
/// Evidence only, never proof.
TrappingReport check_trapping(const VectorField& F, const Domain& U, int probes, double horizon,
                              const IntegratorConfig& cfg = {}, unsigned long seed = 0);

}  // namespace dynid

#endif  // DYNID_INTEGRATE_HPP
