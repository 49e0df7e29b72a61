#include "dynid/conservation_law.hpp"

namespace dynid {

struct ConservationLaw::Impl {
    std::string id;
    int dim = 0;
    ValueFn value;
    GradFn grad;
    HessFn hess;
};

ConservationLaw ConservationLaw::closed_form(std::string id, int dim, ValueFn h, GradFn grad_v,
                                             HessFn hess_v) {
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->dim = dim;
    impl->value = std::move(h);
    impl->grad = std::move(grad_v);
    impl->hess = std::move(hess_v);
    ConservationLaw law;
    law.impl_ = std::move(impl);
    return law;
}

ConservationLaw ConservationLaw::polynomial(std::string id, int dim, Poly h_vu) {
    if (h_vu.dim() != 2 * dim) {
        throw ValidationError("ConservationLaw::polynomial: H must be over (v, u) in R^{2d}");
    }
    // Precompute first and second v-derivatives as polynomials.
    std::vector<Poly> grads;
    grads.reserve(dim);
    for (int i = 0; i < dim; ++i) grads.push_back(h_vu.derivative(i));
    std::vector<std::vector<Poly>> hess(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) hess[i].push_back(grads[i].derivative(j));
    }
    auto stack = [dim](const Vec& v, const Vec& u) {
        Vec w(2 * dim);
        w.head(dim) = v;
        w.tail(dim) = u;
        return w;
    };
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->dim = dim;
    impl->value = [h_vu, stack](const Vec& v, const Vec& u) { return h_vu(stack(v, u)); };
    impl->grad = [grads, stack, dim](const Vec& v, const Vec& u) {
        const Vec w = stack(v, u);
        Vec g(dim);
        for (int i = 0; i < dim; ++i) g[i] = grads[i](w);
        return g;
    };
    impl->hess = [hess, stack, dim](const Vec& v, const Vec& u) {
        const Vec w = stack(v, u);
        Mat m(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j <= i; ++j) {
                m(i, j) = hess[i][j](w);
                m(j, i) = m(i, j);
            }
        }
        return m;
    };
    ConservationLaw law;
    law.impl_ = std::move(impl);
    return law;
}

int ConservationLaw::dim() const { return impl_->dim; }
const std::string& ConservationLaw::id() const { return impl_->id; }

double ConservationLaw::value(const Vec& v, const Vec& u) const {
    check_dim(v, impl_->dim, "ConservationLaw::value");
    check_dim(u, impl_->dim, "ConservationLaw::value");
    return impl_->value(v, u);
}

Vec ConservationLaw::grad_v(const Vec& v, const Vec& u) const {
    check_dim(v, impl_->dim, "ConservationLaw::grad_v");
    check_dim(u, impl_->dim, "ConservationLaw::grad_v");
    return impl_->grad(v, u);
}

Mat ConservationLaw::hess_v(const Vec& v, const Vec& u) const {
    check_dim(v, impl_->dim, "ConservationLaw::hess_v");
    check_dim(u, impl_->dim, "ConservationLaw::hess_v");
    return impl_->hess(v, u);
}

}  // namespace dynid
