#ifndef DYNID_CONSERVATION_LAW_HPP
#define DYNID_CONSERVATION_LAW_HPP

#include "dynid/monomial.hpp"

#include <functional>
#include <memory>

namespace dynid {

/// Scalar constraint H(v, u) tying admissible derivatives v to states u.
/// Exposes value, gradient and Hessian in the first argument; either a
/// catalog closed form or a polynomial over the stacked variables
/// (v_1..v_d, u_1..u_d).
class ConservationLaw {
  public:
    using ValueFn = std::function<double(const Vec&, const Vec&)>;
    using GradFn = std::function<Vec(const Vec&, const Vec&)>;
    using HessFn = std::function<Mat(const Vec&, const Vec&)>;

    ConservationLaw() = default;

    static ConservationLaw closed_form(std::string id, int dim, ValueFn h, GradFn grad_v,
                                       HessFn hess_v);

    /// Polynomial law over (v, u) in R^{2d}; derivatives in v are exact.
    static ConservationLaw polynomial(std::string id, int dim, Poly h_vu);

    int dim() const;  // d (state dimension; H takes 2d arguments)
    const std::string& id() const;

    double value(const Vec& v, const Vec& u) const;
    Vec grad_v(const Vec& v, const Vec& u) const;
    Mat hess_v(const Vec& v, const Vec& u) const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace dynid

#endif  // DYNID_CONSERVATION_LAW_HPP
