#ifndef DYNID_CORE_HPP
#define DYNID_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynid {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// State of the system, u in R^d. Plain dense vector; dimension is fixed
/// per analysis session and checked at module boundaries.
using StateVector = Vec;

// ---------------------------------------------------------------------------
// Error types. Analyses throw; the CLI maps these onto exit codes
// (validation -> 2, numerical -> 3).
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration, unknown ids, dimension mismatches.
struct ValidationError : Error {
    using Error::Error;
};

struct DimensionMismatchError : ValidationError {
    using ValidationError::ValidationError;
};

/// Numerical failure modes.
struct NumericalError : Error {
    using Error::Error;
};

/// Trajectory left the configured norm bound. Carries the last valid state.
struct EscapeError : NumericalError {
    EscapeError(const std::string& msg, double t_last, Vec state_last)
        : NumericalError(msg), t(t_last), state(std::move(state_last)) {}
    double t;
    Vec state;
};

/// Adaptive step size underflowed.
struct StiffnessError : NumericalError {
    using NumericalError::NumericalError;
};

/// Fewer samples than unknowns in a least-squares/null-space problem.
struct UnderdeterminedError : ValidationError {
    using ValidationError::ValidationError;
};

/// Input degenerate for the requested analysis (all points identical, ...).
struct DegenerateInputError : NumericalError {
    using NumericalError::NumericalError;
};

/// A stated precondition of a test failed on the given data.
struct PreconditionError : ValidationError {
    using ValidationError::ValidationError;
};

struct DegreeOverflowError : ValidationError {
    using ValidationError::ValidationError;
};

struct IoError : Error {
    using Error::Error;
};

inline void check_dim(const Vec& u, Eigen::Index d, const char* where) {
    if (u.size() != d) {
        throw DimensionMismatchError(std::string(where) + ": expected dimension " +
                                     std::to_string(d) + ", got " + std::to_string(u.size()));
    }
}

// ---------------------------------------------------------------------------
// Axis-aligned box domain.
// ---------------------------------------------------------------------------

struct Domain {
    Vec lower;
    Vec upper;

    Domain() = default;
    Domain(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size()) {
            throw ValidationError("Domain: lower/upper dimension mismatch");
        }
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            if (!(lower[i] < upper[i])) {
                throw ValidationError("Domain: lower must be < upper componentwise");
            }
        }
    }

    /// Cube [-a,a]^d.
    static Domain centered_cube(int d, double a) {
        return Domain(Vec::Constant(d, -a), Vec::Constant(d, a));
    }

    int dim() const { return static_cast<int>(lower.size()); }
    Vec extent() const { return upper - lower; }

    bool contains(const Vec& u) const {
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            if (u[i] < lower[i] || u[i] > upper[i]) return false;
        }
        return true;
    }

    bool contains_interior(const Vec& u) const {
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            if (u[i] <= lower[i] || u[i] >= upper[i]) return false;
        }
        return true;
    }

    /// Distance from an interior point to the nearest face (negative outside:
    /// minus the max componentwise violation).
    double boundary_distance(const Vec& u) const {
        double inside = std::numeric_limits<double>::infinity();
        double outside = 0.0;
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            inside = std::min(inside, std::min(u[i] - lower[i], upper[i] - u[i]));
            outside = std::max(outside, std::max(lower[i] - u[i], u[i] - upper[i]));
        }
        return outside > 0.0 ? -outside : inside;
    }
};

// ---------------------------------------------------------------------------
// Time-ordered state samples plus integration metadata.
// ---------------------------------------------------------------------------

struct Trajectory {
    std::vector<double> times;   // strictly increasing
    std::vector<Vec> states;     // states[i] at times[i]; states[0] == x0
    Vec x0;                      // initial state of the retained samples
    std::string field_id;
    double rel_tol = 0.0;
    double abs_tol = 0.0;

    int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
    std::size_t size() const { return states.size(); }

    void validate() const {
        if (states.size() < 2) throw ValidationError("Trajectory: need at least 2 samples");
        if (times.size() != states.size()) {
            throw ValidationError("Trajectory: times/states size mismatch");
        }
        for (std::size_t i = 0; i + 1 < times.size(); ++i) {
            if (!(times[i] < times[i + 1])) {
                throw ValidationError("Trajectory: times must be strictly increasing");
            }
        }
        for (const auto& s : states) {
            if (!s.allFinite()) throw ValidationError("Trajectory: non-finite state");
        }
        if ((states.front() - x0).norm() != 0.0) {
            throw ValidationError("Trajectory: states[0] must equal x0");
        }
    }
};

/// Collect all states of several trajectories into one point list.
inline std::vector<Vec> gather_states(const std::vector<Trajectory>& trajs) {
    std::vector<Vec> pts;
    std::size_t n = 0;
    for (const auto& t : trajs) n += t.states.size();
    pts.reserve(n);
    for (const auto& t : trajs) pts.insert(pts.end(), t.states.begin(), t.states.end());
    return pts;
}

// ---------------------------------------------------------------------------
// Componentwise affine change of coordinates onto [-1,1]^d.
//
// All conditioning-sensitive analyses run in normalized coordinates; the map
// is recorded with every certificate so results can be evaluated on raw data.
// ---------------------------------------------------------------------------

struct AffineRescale {
    Vec scale;   // u_hat = scale .* u + offset
    Vec offset;

    static AffineRescale identity(int d) {
        AffineRescale r;
        r.scale = Vec::Ones(d);
        r.offset = Vec::Zero(d);
        return r;
    }

    /// Map the bounding box of `points` onto [-1,1]^d. Data that already
    /// fills a comparable box (inside [-1,1]^d up to slack, with at least
    /// one axis of halfwidth >= 0.5) is left untouched so certificates stay
    /// in the caller's coordinates. Much smaller clouds are always
    /// normalized: monomial columns otherwise collapse towards collinearity
    /// and scale-relative thresholds lose meaning. Degenerate axes get unit
    /// scale.
    static AffineRescale fit(const std::vector<Vec>& points, double slack = 1e-9) {
        if (points.empty()) throw ValidationError("AffineRescale::fit: no points");
        const int d = static_cast<int>(points.front().size());
        Vec lo = points.front(), hi = points.front();
        for (const auto& p : points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        bool inside = true;
        double widest = 0.0;
        for (int i = 0; i < d; ++i) {
            if (lo[i] < -1.0 - slack || hi[i] > 1.0 + slack) inside = false;
            widest = std::max(widest, 0.5 * (hi[i] - lo[i]));
        }
        if (inside && widest >= 0.5) return identity(d);
        AffineRescale r;
        r.scale = Vec::Ones(d);
        r.offset = Vec::Zero(d);
        for (int i = 0; i < d; ++i) {
            const double w = hi[i] - lo[i];
            if (w > 0.0) {
                r.scale[i] = 2.0 / w;
                r.offset[i] = -(hi[i] + lo[i]) / w;
            } else {
                r.offset[i] = -lo[i];  // collapse a constant axis to 0
            }
        }
        return r;
    }

    int dim() const { return static_cast<int>(scale.size()); }
    bool is_identity() const {
        return (scale.array() == 1.0).all() && (offset.array() == 0.0).all();
    }

    Vec forward(const Vec& u) const { return scale.cwiseProduct(u) + offset; }
    Vec inverse(const Vec& u_hat) const { return (u_hat - offset).cwiseQuotient(scale); }

    std::vector<Vec> forward_all(const std::vector<Vec>& pts) const {
        std::vector<Vec> out;
        out.reserve(pts.size());
        for (const auto& p : pts) out.push_back(forward(p));
        return out;
    }
};

}  // namespace dynid

#endif  // DYNID_CORE_HPP
