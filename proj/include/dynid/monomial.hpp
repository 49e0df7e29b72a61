#ifndef DYNID_MONOMIAL_HPP
#define DYNID_MONOMIAL_HPP

#include "dynid/core.hpp"

#include <map>
#include <memory>

namespace dynid {

/// Multi-index alpha with |alpha| <= max_degree, one entry per variable.
using Exponents = std::vector<int>;

/// Ordered dictionary of the monomials u^alpha with |alpha| <= D.
///
/// Ordering is graded lexicographic: total degree ascending, ties broken so
/// that earlier variables carry higher exponents first. For d=2, D=2 the
/// enumeration is exactly {1, x, y, x^2, xy, y^2}. The constant monomial is
/// always index 0 and the size is C(d+D, D).
class MonomialBasis {
  public:
    MonomialBasis(int dim, int max_degree);

    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const std::vector<Exponents>& exponents() const { return exponents_; }
    const Exponents& exponent(int k) const { return exponents_[k]; }
    int total_degree(int k) const;

    /// Index of a multi-index in this basis; throws DegreeOverflowError if
    /// its degree exceeds max_degree.
    int index_of(const Exponents& e) const;

    /// Row of monomial values [u^alpha]_alpha at one point.
    Vec eval_row(const Vec& u) const;

    /// Value of the polynomial with the given coefficient vector.
    double eval(const Vec& coeffs, const Vec& u) const;

    /// Gradient of the polynomial at u.
    Vec eval_grad(const Vec& coeffs, const Vec& u) const;

    /// Coefficients of d/du_var of the polynomial, in this same basis.
    Vec derivative(const Vec& coeffs, int var) const;

    /// Shared, cached basis instance for (dim, max_degree).
    static std::shared_ptr<const MonomialBasis> get(int dim, int max_degree);

    static long long basis_size(int dim, int max_degree);

  private:
    int dim_;
    int max_degree_;
    std::vector<Exponents> exponents_;
    std::map<Exponents, int> index_;
};

/// Dense polynomial over a shared monomial basis. Value type; coefficient
/// vectors are aligned with the basis enumeration.
struct Poly {
    std::shared_ptr<const MonomialBasis> basis;
    Vec coeffs;

    Poly() = default;
    Poly(std::shared_ptr<const MonomialBasis> b, Vec c) : basis(std::move(b)), coeffs(std::move(c)) {
        if (coeffs.size() != basis->size()) throw ValidationError("Poly: coefficient size mismatch");
    }

    static Poly zero(int dim, int degree) {
        auto b = MonomialBasis::get(dim, degree);
        return Poly(b, Vec::Zero(b->size()));
    }
    static Poly constant(int dim, double c) {
        Poly p = zero(dim, 0);
        p.coeffs[0] = c;
        return p;
    }
    /// The monomial u^e.
    static Poly monomial(int dim, const Exponents& e, double c = 1.0);

    int dim() const { return basis->dim(); }
    int degree() const { return basis->max_degree(); }
    double operator()(const Vec& u) const { return basis->eval(coeffs, u); }
    Vec grad(const Vec& u) const { return basis->eval_grad(coeffs, u); }
    Poly derivative(int var) const { return Poly(basis, basis->derivative(coeffs, var)); }

    /// Same polynomial re-expressed over the degree-`target` basis.
    Poly lifted(int target_degree) const;
    /// Smallest degree that actually carries nonzero coefficients.
    int effective_degree(double tol = 0.0) const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(double s, const Poly& p);

/// p(scale .* u + offset) expanded over the same-degree basis.
Poly affine_substitute(const Poly& p, const Vec& scale, const Vec& offset);

}  // namespace dynid

#endif  // DYNID_MONOMIAL_HPP
