#ifndef DYNID_COVERAGE_HPP
#define DYNID_COVERAGE_HPP

#include "dynid/core.hpp"

#include <cstdint>
#include <optional>
#include <unordered_set>

namespace dynid {

/// Uniform grid over a box domain, anchored at domain.lower. Cell index per
/// axis is floor((x - lower)/eps), clamped onto the last cell at the upper
/// face. Flat keys are row-major over the axes.
class Grid {
  public:
    Grid(Domain domain, double eps);

    const Domain& domain() const { return domain_; }
    double eps() const { return eps_; }
    int dim() const { return domain_.dim(); }
    std::uint64_t total_cells() const { return total_; }
    long cells_per_axis(int axis) const { return cells_[axis]; }

    /// Flat key of the cell containing u; nullopt if u lies outside the
    /// closed domain box.
    std::optional<std::uint64_t> key_of(const Vec& u) const;
    std::vector<long> multi_index(std::uint64_t key) const;

  private:
    Domain domain_;
    double eps_;
    std::vector<long> cells_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t total_ = 1;
};

/// Occupancy of an eps-grid over a compact domain by a point set.
struct BoxCover {
    Grid grid;
    std::unordered_set<std::uint64_t> occupied;
    std::size_t points_total = 0;
    std::size_t points_outside = 0;  // counted and reported, not an error
    bool single_cell_warning = false;

    double coverage_fraction() const {
        return static_cast<double>(occupied.size()) / static_cast<double>(grid.total_cells());
    }
    /// Occupied keys in ascending order (deterministic reporting).
    std::vector<std::uint64_t> sorted_keys() const;
};

BoxCover box_cover(const std::vector<Vec>& points, const Domain& domain, double eps);

// ---------------------------------------------------------------------------

struct DensityLevel {
    double eps = 0;
    double fraction = 0;
    std::uint64_t occupied = 0;
    std::uint64_t total = 0;
};

struct DensityVerdict {
    bool dense_evidence = false;
    double tol_frac = 1e-3;
    std::vector<DensityLevel> levels;
    /// Coarsest eps whose cover misses the threshold (unset when dense).
    std::optional<double> first_failing_eps;
};

/// Density evidence across a strictly decreasing eps schedule (>= 3 levels):
/// dense-evidence iff every level covers at least 1 - tol_frac of the grid.
/// Resolution-bounded evidence, not proof.
DensityVerdict density_verdict(const std::vector<BoxCover>& covers, double tol_frac = 1e-3);

// ---------------------------------------------------------------------------

/// Directed graph over occupied boxes: an edge A -> B whenever consecutive
/// samples of one trajectory pass from box A to box B.
struct BoxGraph {
    Grid grid;
    std::vector<std::uint64_t> boxes;               // sorted occupied keys
    std::vector<std::vector<int>> adj;              // adjacency by box index
    std::vector<int> scc_of;                        // box index -> component id
    int n_sccs = 0;
    std::size_t largest_scc = 0;
    std::size_t n_edges = 0;
    /// Consecutive samples more than 3 cells apart (Chebyshev): evidence of
    /// undersampling; the edge is still recorded.
    std::size_t undersampling_warnings = 0;

    bool single_scc() const { return n_sccs == 1; }
};

BoxGraph transitivity_graph(const std::vector<Trajectory>& trajectories, const Domain& domain,
                            double eps);

// ---------------------------------------------------------------------------

struct Cell {
    std::vector<int> trajectory_ids;        // indices into the input list
    std::vector<std::uint64_t> boxes;       // sorted union of member covers
    bool transitive = false;                // member box graph is one SCC
};

/// Grouping of trajectories whose eps-covers intersect, with per-component
/// transitivity evidence and a domain-coverage flag.
struct CellDecomposition {
    double eps = 0;
    std::vector<Cell> components;
    double union_fraction = 0.0;
    bool covers_domain = false;   // union fraction >= 1 - tol_frac
    bool is_transitive_whole = false;  // single component and it is transitive
};

CellDecomposition cell_decomposition(const std::vector<Trajectory>& trajectories,
                                     const Domain& domain, double eps, double tol_frac = 1e-3);

}  // namespace dynid

#endif  // DYNID_COVERAGE_HPP
