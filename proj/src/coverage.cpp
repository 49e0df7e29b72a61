#include "dynid/coverage.hpp"

#include <functional>
#include <unordered_map>

namespace dynid {

Grid::Grid(Domain domain, double eps) : domain_(std::move(domain)), eps_(eps) {
    if (!(eps > 0)) throw ValidationError("Grid: eps must be positive");
    const int d = domain_.dim();
    cells_.resize(d);
    strides_.resize(d);
    for (int i = 0; i < d; ++i) {
        cells_[i] = std::max<long>(1, static_cast<long>(std::ceil((domain_.upper[i] - domain_.lower[i]) / eps_ - 1e-12)));
    }
    std::uint64_t s = 1;
    for (int i = d - 1; i >= 0; --i) {
        strides_[i] = s;
        s *= static_cast<std::uint64_t>(cells_[i]);
    }
    total_ = s;
}

std::optional<std::uint64_t> Grid::key_of(const Vec& u) const {
    check_dim(u, dim(), "Grid::key_of");
    std::uint64_t key = 0;
    for (int i = 0; i < dim(); ++i) {
        if (u[i] < domain_.lower[i] || u[i] > domain_.upper[i]) return std::nullopt;
        long idx = static_cast<long>(std::floor((u[i] - domain_.lower[i]) / eps_));
        if (idx >= cells_[i]) idx = cells_[i] - 1;  // clamp at the upper face
        if (idx < 0) idx = 0;
        key += static_cast<std::uint64_t>(idx) * strides_[i];
    }
    return key;
}

std::vector<long> Grid::multi_index(std::uint64_t key) const {
    std::vector<long> mi(dim());
    for (int i = 0; i < dim(); ++i) {
        mi[i] = static_cast<long>(key / strides_[i]);
        key %= strides_[i];
    }
    return mi;
}

std::vector<std::uint64_t> BoxCover::sorted_keys() const {
    std::vector<std::uint64_t> keys(occupied.begin(), occupied.end());
    std::sort(keys.begin(), keys.end());
    return keys;
}

BoxCover box_cover(const std::vector<Vec>& points, const Domain& domain, double eps) {
    Grid grid(domain, eps);
    BoxCover cover{grid, {}, points.size(), 0, false};
    for (int i = 0; i < grid.dim(); ++i) {
        if (eps > domain.upper[i] - domain.lower[i]) cover.single_cell_warning = true;
    }
    cover.occupied.reserve(points.size() / 4 + 16);
    for (const auto& p : points) {
        if (auto key = grid.key_of(p)) {
            cover.occupied.insert(*key);
        } else {
            ++cover.points_outside;
        }
    }
    return cover;
}

DensityVerdict density_verdict(const std::vector<BoxCover>& covers, double tol_frac) {
    if (covers.size() < 3) throw ValidationError("density_verdict: need >= 3 eps levels");
    for (std::size_t i = 0; i + 1 < covers.size(); ++i) {
        if (!(covers[i + 1].grid.eps() < covers[i].grid.eps())) {
            throw ValidationError("density_verdict: eps schedule must be strictly decreasing");
        }
    }
    DensityVerdict v;
    v.tol_frac = tol_frac;
    v.dense_evidence = true;
    for (const auto& c : covers) {
        DensityLevel lvl;
        lvl.eps = c.grid.eps();
        lvl.occupied = c.occupied.size();
        lvl.total = c.grid.total_cells();
        lvl.fraction = c.coverage_fraction();
        v.levels.push_back(lvl);
        if (v.dense_evidence && lvl.fraction < 1.0 - tol_frac) {
            v.dense_evidence = false;
            v.first_failing_eps = lvl.eps;
        }
    }
    return v;
}

namespace {

// Iterative Tarjan; recursion depth would be unbounded on path-like graphs.
void tarjan_scc(const std::vector<std::vector<int>>& adj, std::vector<int>& comp, int& n_comp) {
    const int n = static_cast<int>(adj.size());
    comp.assign(n, -1);
    n_comp = 0;
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& f = call.back();
            const int v = f.v;
            if (f.child == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (f.child < adj[v].size()) {
                const int w = adj[v][f.child++];
                if (index[w] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = n_comp;
                    if (w == v) break;
                }
                ++n_comp;
            }
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().v;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
}

long chebyshev(const std::vector<long>& a, const std::vector<long>& b) {
    long m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::labs(a[i] - b[i]));
    return m;
}

struct EdgeSet {
    std::unordered_set<std::uint64_t> seen;  // packed (from, to) for small graphs
    std::vector<std::pair<int, int>> edges;
    void add(int a, int b) {
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        if (seen.insert(key).second) edges.emplace_back(a, b);
    }
};

}  // namespace

BoxGraph transitivity_graph(const std::vector<Trajectory>& trajectories, const Domain& domain,
                            double eps) {
    if (trajectories.empty()) throw ValidationError("transitivity_graph: need >= 1 trajectory");
    Grid grid(domain, eps);

    // Occupied boxes over all trajectories, sorted for deterministic ids.
    std::unordered_set<std::uint64_t> occ;
    for (const auto& traj : trajectories) {
        for (const auto& s : traj.states) {
            if (auto key = grid.key_of(s)) occ.insert(*key);
        }
    }
    if (occ.empty()) throw DegenerateInputError("transitivity_graph: no samples inside the domain");

    BoxGraph g{grid, {}, {}, {}, 0, 0, 0, 0};
    g.boxes.assign(occ.begin(), occ.end());
    std::sort(g.boxes.begin(), g.boxes.end());
    std::unordered_map<std::uint64_t, int> id;
    id.reserve(g.boxes.size() * 2);
    for (int i = 0; i < static_cast<int>(g.boxes.size()); ++i) id[g.boxes[i]] = i;

    EdgeSet es;
    for (const auto& traj : trajectories) {
        std::optional<std::uint64_t> prev;
        for (const auto& s : traj.states) {
            const auto key = grid.key_of(s);
            if (key && prev && *key != *prev) {
                const int a = id[*prev], b = id[*key];
                if (chebyshev(grid.multi_index(*prev), grid.multi_index(*key)) > 3) {
                    ++g.undersampling_warnings;
                }
                es.add(a, b);
            }
            prev = key;  // samples outside the domain break the chain
        }
    }
    g.adj.assign(g.boxes.size(), {});
    for (const auto& [a, b] : es.edges) g.adj[a].push_back(b);
    for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
    g.n_edges = es.edges.size();

    tarjan_scc(g.adj, g.scc_of, g.n_sccs);
    std::vector<std::size_t> sizes(g.n_sccs, 0);
    for (int c : g.scc_of) ++sizes[c];
    for (auto s : sizes) g.largest_scc = std::max(g.largest_scc, s);
    return g;
}

CellDecomposition cell_decomposition(const std::vector<Trajectory>& trajectories,
                                     const Domain& domain, double eps, double tol_frac) {
    if (trajectories.empty()) throw ValidationError("cell_decomposition: need >= 1 trajectory");
    const int n = static_cast<int>(trajectories.size());
    Grid grid(domain, eps);

    // Per-trajectory covers.
    std::vector<std::unordered_set<std::uint64_t>> covers(n);
    std::unordered_map<std::uint64_t, int> first_owner;  // box -> first trajectory seen
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (int i = 0; i < n; ++i) {
        for (const auto& s : trajectories[i].states) {
            if (auto key = grid.key_of(s)) {
                covers[i].insert(*key);
                auto [it, inserted] = first_owner.try_emplace(*key, i);
                if (!inserted) unite(i, it->second);  // covers intersect
            }
        }
    }

    // Components in order of their smallest trajectory index.
    std::vector<int> roots;
    std::unordered_map<int, int> comp_of_root;
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (!comp_of_root.count(r)) {
            comp_of_root[r] = static_cast<int>(roots.size());
            roots.push_back(r);
        }
    }

    CellDecomposition dec;
    dec.eps = eps;
    dec.components.resize(roots.size());
    std::unordered_set<std::uint64_t> all;
    for (int i = 0; i < n; ++i) {
        Cell& cell = dec.components[comp_of_root[find(i)]];
        cell.trajectory_ids.push_back(i);
        for (auto key : covers[i]) {
            cell.boxes.push_back(key);
            all.insert(key);
        }
    }
    for (auto& cell : dec.components) {
        std::sort(cell.boxes.begin(), cell.boxes.end());
        cell.boxes.erase(std::unique(cell.boxes.begin(), cell.boxes.end()), cell.boxes.end());
        std::vector<Trajectory> members;
        for (int id : cell.trajectory_ids) members.push_back(trajectories[id]);
        cell.transitive = transitivity_graph(members, domain, eps).single_scc();
    }

    dec.union_fraction = static_cast<double>(all.size()) / static_cast<double>(grid.total_cells());
    dec.covers_domain = dec.union_fraction >= 1.0 - tol_frac;
    dec.is_transitive_whole = dec.components.size() == 1 && dec.components.front().transitive;
    return dec;
}

}  // namespace dynid
