// Test-side oracles, kept independent of the library implementations they
// check: finite differences for derivatives, Gram eigendecomposition for
// null spaces, Kosaraju for SCC counts, direct set-based box counting.
#ifndef DYNID_TESTS_ORACLES_HPP
#define DYNID_TESTS_ORACLES_HPP

#include "dynid/conservation_law.hpp"
#include "dynid/core.hpp"
#include "dynid/vector_field.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <set>

namespace oracles {

using dynid::Mat;
using dynid::Vec;

inline Mat fd_jacobian(const dynid::VectorField& F, const Vec& u, double h = 1e-6) {
    const int d = F.dim();
    Mat J(d, d);
    for (int j = 0; j < d; ++j) {
        Vec up = u, um = u;
        up[j] += h;
        um[j] -= h;
        J.col(j) = (F(up) - F(um)) / (2 * h);
    }
    return J;
}

inline Vec fd_grad_v(const dynid::ConservationLaw& H, const Vec& v, const Vec& u, double h = 1e-6) {
    const int d = static_cast<int>(v.size());
    Vec g(d);
    for (int j = 0; j < d; ++j) {
        Vec vp = v, vm = v;
        vp[j] += h;
        vm[j] -= h;
        g[j] = (H.value(vp, u) - H.value(vm, u)) / (2 * h);
    }
    return g;
}

inline Mat fd_hess_v(const dynid::ConservationLaw& H, const Vec& v, const Vec& u, double h = 1e-5) {
    const int d = static_cast<int>(v.size());
    Mat m(d, d);
    for (int j = 0; j < d; ++j) {
        Vec vp = v, vm = v;
        vp[j] += h;
        vm[j] -= h;
        m.col(j) = (fd_grad_v(H, vp, u, h) - fd_grad_v(H, vm, u, h)) / (2 * h);
    }
    return 0.5 * (m + m.transpose());
}

struct GramNull {
    Vec eigenvalues;   // ascending
    Mat eigenvectors;  // columns aligned with eigenvalues
};

/// Null-space oracle: exhaustive eigendecomposition of the Gram matrix
/// M^T M. Right singular vectors of M are its eigenvectors; singular values
/// are sqrt(eigenvalues).
inline GramNull gram_null_oracle(const Mat& M) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(M.transpose() * M);
    return {eig.eigenvalues(), eig.eigenvectors()};
}

/// SCC count by Kosaraju's two-pass algorithm (vs Tarjan in the library).
inline int kosaraju_scc_count(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> radj(n);
    for (int v = 0; v < n; ++v) {
        for (int w : adj[v]) radj[w].push_back(v);
    }
    std::vector<bool> seen(n, false);
    std::vector<int> order;
    order.reserve(n);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
        seen[s] = true;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < adj[v].size()) {
                const int w = adj[v][i++];
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back({w, 0});
                }
            } else {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    std::fill(seen.begin(), seen.end(), false);
    int comps = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (seen[*it]) continue;
        ++comps;
        std::vector<int> stack{*it};
        seen[*it] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : radj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
    }
    return comps;
}

/// Direct occupied-cell count with an ordered set of integer tuples.
inline std::size_t direct_box_count(const std::vector<Vec>& points, const Vec& lower,
                                    const Vec& upper, double eps) {
    std::set<std::vector<long>> cells;
    const int d = static_cast<int>(lower.size());
    for (const auto& p : points) {
        bool inside = true;
        std::vector<long> idx(d);
        for (int i = 0; i < d; ++i) {
            if (p[i] < lower[i] || p[i] > upper[i]) {
                inside = false;
                break;
            }
            const long cells_i = std::max<long>(1, static_cast<long>(std::ceil((upper[i] - lower[i]) / eps - 1e-12)));
            long k = static_cast<long>(std::floor((p[i] - lower[i]) / eps));
            if (k >= cells_i) k = cells_i - 1;
            idx[i] = k;
        }
        if (inside) cells.insert(idx);
    }
    return cells.size();
}

// --- deterministic sample generators ---------------------------------------

inline std::vector<Vec> circle_points(std::size_t n, double radius = 1.0, double phase = 0.0) {
    std::vector<Vec> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = phase + 2 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        Vec p(2);
        p << radius * std::cos(th), radius * std::sin(th);
        pts.push_back(p);
    }
    return pts;
}

inline std::vector<Vec> uniform_box(std::size_t n, int d, double lo, double hi,
                                    unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Vec> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec p(d);
        for (int k = 0; k < d; ++k) p[k] = u(rng);
        pts.push_back(p);
    }
    return pts;
}

}  // namespace oracles

#endif  // DYNID_TESTS_ORACLES_HPP
