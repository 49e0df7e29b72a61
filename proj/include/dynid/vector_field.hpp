#ifndef DYNID_VECTOR_FIELD_HPP
#define DYNID_VECTOR_FIELD_HPP

#include "dynid/monomial.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace dynid {

/// Polynomial vector field: F_i(u) = sum_alpha coeffs(i, alpha) u^alpha,
/// coefficients in graded-lex column order over a shared basis.
struct PolynomialField {
    std::shared_ptr<const MonomialBasis> basis;
    Mat coeffs;  // d x |basis|

    int dim() const { return static_cast<int>(coeffs.rows()); }
    Poly component(int i) const { return Poly(basis, coeffs.row(i).transpose()); }

    Vec eval(const Vec& u) const {
        return coeffs * basis->eval_row(u);
    }
    Mat jacobian(const Vec& u) const {
        const int d = dim();
        Mat J(d, d);
        for (int v = 0; v < d; ++v) {
            Mat dc(d, basis->size());
            for (int i = 0; i < d; ++i) {
                dc.row(i) = basis->derivative(coeffs.row(i).transpose(), v).transpose();
            }
            J.col(v) = dc * basis->eval_row(u);
        }
        return J;
    }
};

/// A d-dimensional vector field, either a catalog closed form or a
/// coefficient matrix over a monomial basis. Immutable value type; copies
/// share the underlying definition.
class VectorField {
  public:
    using EvalFn = std::function<Vec(const Vec&)>;
    using JacFn = std::function<Mat(const Vec&)>;

    VectorField() = default;

    static VectorField polynomial(std::shared_ptr<const MonomialBasis> basis, Mat coeffs,
                                  std::string id = "polynomial");
    static VectorField polynomial(const std::vector<Poly>& components, std::string id = "polynomial");

    /// Closed-form field. The Jacobian callback is authoritative (no
    /// fallback differencing).
    static VectorField closed_form(std::string id, int dim, EvalFn f, JacFn jac,
                                   std::map<std::string, double> params = {});

    int dim() const;
    const std::string& id() const;
    const std::map<std::string, double>& params() const;

    Vec operator()(const Vec& u) const { return eval(u); }
    Vec eval(const Vec& u) const;
    Mat jacobian(const Vec& u) const;

    bool is_polynomial() const;
    const PolynomialField& poly() const;  // throws ValidationError if closed-form

    /// F + g * W with a scalar polynomial g and polynomial field W. Both
    /// this field and W must be polynomial; result degree is checked
    /// against max_degree.
    VectorField add_scaled(const Poly& g, const VectorField& W, int max_degree,
                           std::string id = "modified") const;

    /// Field with all signs flipped (time reversal).
    VectorField reversed() const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace dynid

#endif  // DYNID_VECTOR_FIELD_HPP
