#include "dynid/integrate.hpp"

#include <random>

namespace dynid {

namespace {

// Dormand-Prince 5(4) coefficients (Hairer, Norsett, Wanner I).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafe = 0.9, kFacMin = 0.2, kFacMax = 10.0, kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;

struct DenseSegment {
    double t0 = 0, h = 0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

// One integrator pass; invokes on_segment for every accepted step.
template <typename SegmentFn>
void integrate(const VectorField& F, const Vec& x0, double t_end, const IntegratorConfig& cfg,
               SegmentFn&& on_segment) {
    cfg.validate();
    const int n = F.dim();
    check_dim(x0, n, "flow");
    if (!x0.allFinite()) throw ValidationError("flow: non-finite initial state");

    const double uround = std::numeric_limits<double>::epsilon();
    double t = 0.0;
    Vec y = x0;
    Vec k1 = F(y), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), yerr(n);

    // Initial step-size guess from the scaled norms of y and F(y).
    auto scaled_norm = [&](const Vec& v, const Vec& ref) {
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(ref[i]);
            const double q = v[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / n);
    };
    double h;
    {
        const double d0 = scaled_norm(y, y);
        const double dd1 = scaled_norm(k1, y);
        h = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * (d0 / dd1);
        h = std::min(h, t_end);
        if (cfg.max_step > 0) h = std::min(h, cfg.max_step);
    }

    double facold = 1e-4;
    long nstep = 0;
    bool last = false;
    while (!last) {
        if (++nstep > cfg.max_steps) {
            throw StiffnessError("flow: step budget exceeded at t=" + std::to_string(t));
        }
        if (h < 16.0 * uround * std::max(1.0, std::abs(t))) {
            throw StiffnessError("flow: step size underflow at t=" + std::to_string(t));
        }
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }

        k2 = F(y + h * (a21 * k1));
        k3 = F(y + h * (a31 * k1 + a32 * k2));
        k4 = F(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = F(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = F(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = F(ynew);
        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0;
        for (int i = 0; i < n; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = yerr[i] / sc;
            err += q * q;
        }
        err = std::sqrt(err / n);
        if (!std::isfinite(err)) err = 2.0;  // force rejection on overflow

        if (err <= 1.0) {
            // Accepted: build the dense-output segment before advancing.
            DenseSegment seg;
            seg.t0 = t;
            seg.h = h;
            seg.r1 = y;
            seg.r2 = ynew - y;
            seg.r3 = h * k1 - seg.r2;
            seg.r4 = seg.r2 - h * k7 - seg.r3;
            seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            t += h;
            y = ynew;
            k1 = k7;  // FSAL

            if (y.lpNorm<Eigen::Infinity>() > cfg.blowup_norm) {
                throw EscapeError("flow: state norm exceeded " + std::to_string(cfg.blowup_norm) +
                                      " at t=" + std::to_string(t),
                                  t, y);
            }
            on_segment(seg, t, y);

            const double fac11 = std::pow(std::max(err, 1e-10), kExpo);
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
            h = h / fac;
            if (cfg.max_step > 0) h = std::min(h, cfg.max_step);
            facold = std::max(err, 1e-4);
        } else {
            const double fac11 = std::pow(err, kExpo);
            h = h / std::min(1.0 / kFacMin, fac11 / kSafe);
            last = false;
        }
    }
}

}  // namespace

Trajectory flow(const VectorField& F, const Vec& x0, const IntegratorConfig& cfg) {
    Trajectory traj;
    traj.field_id = F.id();
    traj.rel_tol = cfg.rel_tol;
    traj.abs_tol = cfg.abs_tol;

    // First emitted sample sits at the first stride point >= t_burn.
    long k = static_cast<long>(std::ceil(cfg.t_burn / cfg.sample_dt - 1e-12));
    if (k * cfg.sample_dt < cfg.t_burn) ++k;
    const double t_first = k * cfg.sample_dt;

    if (t_first == 0.0) {
        traj.times.push_back(0.0);
        traj.states.push_back(x0);
        ++k;
    }
    integrate(F, x0, cfg.t_end, cfg, [&](const DenseSegment& seg, double t_cur, const Vec&) {
        const double slack = 1e-12 * std::max(1.0, std::abs(t_cur));
        while (true) {
            const double ts = k * cfg.sample_dt;
            if (ts > t_cur + slack || ts > cfg.t_end) break;
            traj.times.push_back(ts);
            traj.states.push_back(seg.eval(std::min(ts, t_cur)));
            ++k;
        }
    });

    if (traj.states.size() < 2) {
        throw ValidationError("flow: fewer than 2 samples retained; shrink sample_dt or extend t_end");
    }
    traj.x0 = traj.states.front();
    traj.validate();
    return traj;
}

std::vector<Vec> flow_at_times(const VectorField& F, const Vec& x0,
                               const std::vector<double>& times, const IntegratorConfig& cfg) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0 || (i > 0 && times[i] <= times[i - 1])) {
            throw ValidationError("flow_at_times: times must be strictly increasing and >= 0");
        }
    }
    if (times.empty()) return {};
    IntegratorConfig c = cfg;
    c.t_burn = 0;
    c.t_end = times.back() + 1e-12;

    std::vector<Vec> out;
    out.reserve(times.size());
    std::size_t idx = 0;
    if (times.front() == 0.0) {
        out.push_back(x0);
        ++idx;
    }
    integrate(F, x0, c.t_end, c, [&](const DenseSegment& seg, double t_cur, const Vec&) {
        const double slack = 1e-12 * std::max(1.0, std::abs(t_cur));
        while (idx < times.size() && times[idx] <= t_cur + slack) {
            out.push_back(seg.eval(std::min(times[idx], t_cur)));
            ++idx;
        }
    });
    if (out.size() != times.size()) {
        throw NumericalError("flow_at_times: integration ended before last query time");
    }
    return out;
}

TrappingReport check_trapping(const VectorField& F, const Domain& U, int probes, double horizon,
                              const IntegratorConfig& cfg, unsigned long seed) {
    if (probes < 1) throw ValidationError("check_trapping: probes must be >= 1");
    if (U.dim() != F.dim()) throw DimensionMismatchError("check_trapping: domain/field dims differ");
    const int d = U.dim();

    // Boundary probes: pick a face with probability proportional to its
    // area, then a uniform point on it.
    std::mt19937_64 rng(seed);
    const Vec ext = U.extent();
    std::vector<double> face_w(2 * d);
    for (int i = 0; i < d; ++i) {
        double a = 1.0;
        for (int j = 0; j < d; ++j) {
            if (j != i) a *= ext[j];
        }
        face_w[2 * i] = face_w[2 * i + 1] = a;
    }
    std::discrete_distribution<int> face_dist(face_w.begin(), face_w.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    TrappingReport rep;
    rep.probes = probes;
    rep.min_final_boundary_distance = std::numeric_limits<double>::infinity();
    int inside_end = 0, never_left = 0;

    IntegratorConfig c = cfg;
    c.t_burn = 0;
    c.t_end = horizon;

    for (int p = 0; p < probes; ++p) {
        const int face = face_dist(rng);
        Vec x0(d);
        for (int i = 0; i < d; ++i) x0[i] = U.lower[i] + ext[i] * unit(rng);
        x0[face / 2] = (face % 2 == 0) ? U.lower[face / 2] : U.upper[face / 2];

        bool escaped = false;
        double worst_outside = 0.0;
        Vec last = x0;
        try {
            Trajectory traj = flow(F, x0, c);
            // Skip the probe's own start sample when judging containment.
            for (std::size_t i = 1; i < traj.states.size(); ++i) {
                const double bd = U.boundary_distance(traj.states[i]);
                if (bd < 0) worst_outside = std::max(worst_outside, -bd);
            }
            last = traj.states.back();
        } catch (const EscapeError& e) {
            escaped = true;
            last = e.state;
        }

        if (escaped) {
            ++rep.escaped_count;
            worst_outside = std::max(worst_outside, std::max(1.0, -U.boundary_distance(last)));
        } else {
            if (U.contains_interior(last)) {
                ++inside_end;
                rep.min_final_boundary_distance =
                    std::min(rep.min_final_boundary_distance, U.boundary_distance(last));
            }
            if (worst_outside == 0.0) ++never_left;
        }
        rep.max_outward_excursion = std::max(rep.max_outward_excursion, worst_outside);
    }

    rep.fraction_inside_end = static_cast<double>(inside_end) / probes;
    rep.fraction_never_left = static_cast<double>(never_left) / probes;
    if (!std::isfinite(rep.min_final_boundary_distance)) rep.min_final_boundary_distance = 0.0;
    rep.trapping_evidence = (inside_end == probes) && rep.escaped_count == 0;
    return rep;
}

}  // namespace dynid
