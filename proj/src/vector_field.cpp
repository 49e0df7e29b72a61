#include "dynid/vector_field.hpp"

namespace dynid {

struct VectorField::Impl {
    std::string id;
    int dim = 0;
    std::map<std::string, double> params;
    std::optional<PolynomialField> poly;
    EvalFn eval;
    JacFn jac;
};

VectorField VectorField::polynomial(std::shared_ptr<const MonomialBasis> basis, Mat coeffs,
                                    std::string id) {
    if (coeffs.rows() != basis->dim() || coeffs.cols() != basis->size()) {
        throw ValidationError("VectorField::polynomial: coefficient matrix must be d x |basis|");
    }
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->dim = basis->dim();
    impl->poly = PolynomialField{std::move(basis), std::move(coeffs)};
    auto v = VectorField();
    v.impl_ = std::move(impl);
    return v;
}

VectorField VectorField::polynomial(const std::vector<Poly>& components, std::string id) {
    if (components.empty()) throw ValidationError("VectorField::polynomial: no components");
    const int d = components.front().dim();
    if (static_cast<int>(components.size()) != d) {
        throw ValidationError("VectorField::polynomial: need exactly d components");
    }
    int deg = 0;
    for (const auto& p : components) deg = std::max(deg, p.degree());
    auto basis = MonomialBasis::get(d, deg);
    Mat coeffs = Mat::Zero(d, basis->size());
    for (int i = 0; i < d; ++i) {
        coeffs.row(i) = components[i].lifted(deg).coeffs.transpose();
    }
    return polynomial(std::move(basis), std::move(coeffs), std::move(id));
}

VectorField VectorField::closed_form(std::string id, int dim, EvalFn f, JacFn jac,
                                     std::map<std::string, double> params) {
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->dim = dim;
    impl->eval = std::move(f);
    impl->jac = std::move(jac);
    impl->params = std::move(params);
    auto v = VectorField();
    v.impl_ = std::move(impl);
    return v;
}

int VectorField::dim() const { return impl_->dim; }
const std::string& VectorField::id() const { return impl_->id; }
const std::map<std::string, double>& VectorField::params() const { return impl_->params; }

Vec VectorField::eval(const Vec& u) const {
    check_dim(u, impl_->dim, "VectorField::eval");
    return impl_->poly ? impl_->poly->eval(u) : impl_->eval(u);
}

Mat VectorField::jacobian(const Vec& u) const {
    check_dim(u, impl_->dim, "VectorField::jacobian");
    return impl_->poly ? impl_->poly->jacobian(u) : impl_->jac(u);
}

bool VectorField::is_polynomial() const { return impl_->poly.has_value(); }

const PolynomialField& VectorField::poly() const {
    if (!impl_->poly) {
        throw ValidationError("VectorField: '" + impl_->id + "' has no polynomial form");
    }
    return *impl_->poly;
}

VectorField VectorField::add_scaled(const Poly& g, const VectorField& W, int max_degree,
                                    std::string id) const {
    const auto& base = poly();
    const auto& w = W.poly();
    if (g.dim() != dim() || W.dim() != dim()) {
        throw DimensionMismatchError("VectorField::add_scaled: dimension mismatch");
    }
    const int out_deg = std::max(base.basis->max_degree(),
                                 g.effective_degree() + w.basis->max_degree());
    if (out_deg > max_degree) {
        throw DegreeOverflowError("VectorField::add_scaled: result degree " +
                                  std::to_string(out_deg) + " exceeds limit " +
                                  std::to_string(max_degree));
    }
    std::vector<Poly> comps;
    comps.reserve(dim());
    for (int i = 0; i < dim(); ++i) {
        comps.push_back(base.component(i) + g * w.component(i));
    }
    return polynomial(comps, std::move(id));
}

VectorField VectorField::reversed() const {
    if (impl_->poly) {
        return polynomial(impl_->poly->basis, -impl_->poly->coeffs, impl_->id + "-reversed");
    }
    auto self = *this;
    return closed_form(impl_->id + "-reversed", impl_->dim,
                       [self](const Vec& u) -> Vec { return -self.eval(u); },
                       [self](const Vec& u) -> Mat { return -self.jacobian(u); }, impl_->params);
}

}  // namespace dynid
