#include "dynid/monomial.hpp"

#include <mutex>

namespace dynid {

namespace {

// Graded-lex comparison: degree first, then earlier variables with higher
// exponents first within a degree block.
bool grlex_less(const Exponents& a, const Exponents& b) {
    int da = 0, db = 0;
    for (int v : a) da += v;
    for (int v : b) db += v;
    if (da != db) return da < db;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

void enumerate_rec(int dim, int var, int remaining, Exponents& cur, std::vector<Exponents>& out) {
    if (var == dim - 1) {
        cur[var] = remaining;
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[var] = e;
        enumerate_rec(dim, var + 1, remaining - e, cur, out);
    }
}

}  // namespace

MonomialBasis::MonomialBasis(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
    if (dim < 1) throw ValidationError("MonomialBasis: dim must be >= 1");
    if (max_degree < 0) throw ValidationError("MonomialBasis: max_degree must be >= 0");
    Exponents cur(dim, 0);
    for (int deg = 0; deg <= max_degree; ++deg) {
        enumerate_rec(dim, 0, deg, cur, exponents_);
    }
    // The per-degree recursion already emits graded-lex order; keep the
    // comparator as the single source of truth anyway.
    std::sort(exponents_.begin(), exponents_.end(), grlex_less);
    for (int k = 0; k < static_cast<int>(exponents_.size()); ++k) {
        index_[exponents_[k]] = k;
    }
}

int MonomialBasis::total_degree(int k) const {
    int d = 0;
    for (int v : exponents_[k]) d += v;
    return d;
}

int MonomialBasis::index_of(const Exponents& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) {
        throw DegreeOverflowError("MonomialBasis: multi-index exceeds max degree " +
                                  std::to_string(max_degree_));
    }
    return it->second;
}

Vec MonomialBasis::eval_row(const Vec& u) const {
    check_dim(u, dim_, "MonomialBasis::eval_row");
    // Powers table u_i^k up to max_degree, then products per multi-index.
    Mat pw(dim_, max_degree_ + 1);
    pw.col(0).setOnes();
    for (int k = 1; k <= max_degree_; ++k) {
        pw.col(k) = pw.col(k - 1).cwiseProduct(u);
    }
    Vec row(size());
    for (int k = 0; k < size(); ++k) {
        double v = 1.0;
        const auto& e = exponents_[k];
        for (int i = 0; i < dim_; ++i) {
            if (e[i] > 0) v *= pw(i, e[i]);
        }
        row[k] = v;
    }
    return row;
}

double MonomialBasis::eval(const Vec& coeffs, const Vec& u) const {
    if (coeffs.size() != size()) throw ValidationError("MonomialBasis::eval: bad coefficient size");
    return coeffs.dot(eval_row(u));
}

Vec MonomialBasis::eval_grad(const Vec& coeffs, const Vec& u) const {
    Vec g = Vec::Zero(dim_);
    for (int v = 0; v < dim_; ++v) {
        g[v] = eval(derivative(coeffs, v), u);
    }
    return g;
}

Vec MonomialBasis::derivative(const Vec& coeffs, int var) const {
    if (var < 0 || var >= dim_) throw ValidationError("MonomialBasis::derivative: bad variable");
    Vec out = Vec::Zero(size());
    for (int k = 0; k < size(); ++k) {
        if (coeffs[k] == 0.0) continue;
        const auto& e = exponents_[k];
        if (e[var] == 0) continue;
        Exponents de = e;
        de[var] -= 1;
        out[index_.at(de)] += coeffs[k] * e[var];
    }
    return out;
}

long long MonomialBasis::basis_size(int dim, int max_degree) {
    long long n = 1;
    for (int i = 1; i <= dim; ++i) {
        n = n * (max_degree + i) / i;
    }
    return n;
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int dim, int max_degree) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dim, max_degree);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = std::make_shared<const MonomialBasis>(dim, max_degree);
    cache[key] = b;
    return b;
}

Poly Poly::monomial(int dim, const Exponents& e, double c) {
    int deg = 0;
    for (int v : e) deg += v;
    Poly p = zero(dim, deg);
    p.coeffs[p.basis->index_of(e)] = c;
    return p;
}

Poly Poly::lifted(int target_degree) const {
    if (target_degree < degree()) {
        // Allowed only when the dropped coefficients are zero.
        for (int k = 0; k < basis->size(); ++k) {
            if (basis->total_degree(k) > target_degree && coeffs[k] != 0.0) {
                throw DegreeOverflowError("Poly::lifted: nonzero coefficient above target degree");
            }
        }
    }
    auto nb = MonomialBasis::get(dim(), target_degree);
    Vec c = Vec::Zero(nb->size());
    for (int k = 0; k < basis->size(); ++k) {
        if (coeffs[k] != 0.0) c[nb->index_of(basis->exponent(k))] = coeffs[k];
    }
    return Poly(nb, c);
}

int Poly::effective_degree(double tol) const {
    int deg = 0;
    for (int k = 0; k < basis->size(); ++k) {
        if (std::abs(coeffs[k]) > tol) deg = std::max(deg, basis->total_degree(k));
    }
    return deg;
}

Poly operator+(const Poly& a, const Poly& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("Poly +: dimension mismatch");
    const int deg = std::max(a.degree(), b.degree());
    Poly la = a.lifted(deg), lb = b.lifted(deg);
    return Poly(la.basis, la.coeffs + lb.coeffs);
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0 * b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("Poly *: dimension mismatch");
    auto nb = MonomialBasis::get(a.dim(), a.degree() + b.degree());
    Vec c = Vec::Zero(nb->size());
    for (int i = 0; i < a.basis->size(); ++i) {
        if (a.coeffs[i] == 0.0) continue;
        const auto& ea = a.basis->exponent(i);
        for (int j = 0; j < b.basis->size(); ++j) {
            if (b.coeffs[j] == 0.0) continue;
            Exponents e = ea;
            const auto& eb = b.basis->exponent(j);
            for (std::size_t v = 0; v < e.size(); ++v) e[v] += eb[v];
            c[nb->index_of(e)] += a.coeffs[i] * b.coeffs[j];
        }
    }
    return Poly(nb, c);
}

Poly operator*(double s, const Poly& p) { return Poly(p.basis, s * p.coeffs); }

Poly affine_substitute(const Poly& p, const Vec& scale, const Vec& offset) {
    check_dim(scale, p.dim(), "affine_substitute");
    check_dim(offset, p.dim(), "affine_substitute");
    const int d = p.dim();
    const int D = p.degree();
    // (scale_i u_i + offset_i)^k expanded once per axis and power, then
    // combined per multi-index by convolution of the axis expansions.
    // axis_pow[i][k][j] = coefficient of u_i^j in (a_i u_i + b_i)^k.
    std::vector<std::vector<std::vector<double>>> axis_pow(d);
    for (int i = 0; i < d; ++i) {
        axis_pow[i].resize(D + 1);
        axis_pow[i][0] = {1.0};
        for (int k = 1; k <= D; ++k) {
            const auto& prev = axis_pow[i][k - 1];
            std::vector<double> cur(k + 1, 0.0);
            for (int j = 0; j < static_cast<int>(prev.size()); ++j) {
                cur[j] += prev[j] * offset[i];
                cur[j + 1] += prev[j] * scale[i];
            }
            axis_pow[i][k] = std::move(cur);
        }
    }
    Vec out = Vec::Zero(p.basis->size());
    Exponents e(d, 0);
    // Accumulate the expansion of each source monomial.
    for (int k = 0; k < p.basis->size(); ++k) {
        if (p.coeffs[k] == 0.0) continue;
        const auto& src = p.basis->exponent(k);
        // Cartesian product over axis expansions.
        std::vector<int> j(d, 0);
        while (true) {
            double c = p.coeffs[k];
            for (int i = 0; i < d; ++i) {
                c *= axis_pow[i][src[i]][j[i]];
                e[i] = j[i];
            }
            if (c != 0.0) out[p.basis->index_of(e)] += c;
            int axis = d - 1;
            while (axis >= 0) {
                if (j[axis] < src[axis]) {
                    ++j[axis];
                    break;
                }
                j[axis] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    return Poly(p.basis, out);
}

}  // namespace dynid
