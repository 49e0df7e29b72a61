#include "dynid/catalog.hpp"

#include <sstream>

namespace dynid {
namespace catalog {

namespace {

std::map<std::string, double> merged(const std::map<std::string, double>& defaults,
                                     const std::map<std::string, double>& overrides) {
    std::map<std::string, double> out = defaults;
    for (const auto& [k, v] : overrides) {
        if (!defaults.count(k)) {
            throw ValidationError("catalog: unknown parameter '" + k + "'");
        }
        out[k] = v;
    }
    return out;
}

// Equal-mass, unit-length double pendulum in canonical (angle, momentum)
// coordinates; expressions machine-generated from the Hamiltonian
//   H = (p1^2 + 2 p2^2 - 2 p1 p2 cos(th1-th2)) / (2 (1 + sin^2(th1-th2)))
//       - 2 g cos(th1) - g cos(th2)
// and verified symbolically (grad H . F == 0).
Vec double_pendulum_field(const Vec& u, double g) {
    const double th1 = u[0], th2 = u[1], p1 = u[2], p2 = u[3];
    Vec f(4);
    const double x0 = th1 - th2;
    const double x1 = std::cos(x0);
    const double x2 = p2 * x1;
    const double x3 = std::sin(x0);
    const double x4 = x3 * x3 + 1;
    const double x5 = 1.0 / x4;
    const double x6 = x4 * x4;
    const double x7 = 1.0 / x6;
    const double x8 = g * x6;
    const double x9 = p1 * p2 * x3 * x4;
    const double x10 = x1 * x3 * (p1 * p1 - 2 * p1 * x2 + 2 * p2 * p2);
    f[0] = x5 * (p1 - x2);
    f[1] = -x5 * (p1 * x1 - 2 * p2);
    f[2] = -x7 * (-x10 + 2 * x8 * std::sin(th1) + x9);
    f[3] = -x7 * (x10 + x8 * std::sin(th2) - x9);
    return f;
}

Mat double_pendulum_jacobian(const Vec& u, double g) {
    const double th1 = u[0], th2 = u[1], p1 = u[2], p2 = u[3];
    Mat J(4, 4);
    const double x0 = th1 - th2;
    const double x1 = 2 * x0;
    const double c1 = std::cos(x1) - 3;
    const double x2 = 1.0 / (c1 * c1);
    const double x3 = std::sin(x0);
    const double x4 = 9 * x3;
    const double x5 = std::sin(3 * x0);
    const double x6 = std::sin(x1);
    const double x7 = x2 * (-4 * p1 * x6 + p2 * x4 + p2 * x5);
    const double x8 = -x7;
    const double x9 = x3 * x3;
    const double x10 = x9 + 1;
    const double x11 = 1.0 / x10;
    const double x12 = std::cos(x0);
    const double x13 = -x11 * x12;
    const double x14 = x2 * (p1 * x4 + p1 * x5 - 8 * p2 * x6);
    const double x15 = -x14;
    const double x16 = 1.0 / (x10 * x10 * x10);
    const double x17 = std::sin(th1);
    const double x18 = g * x10 * x10;
    const double x19 = 2 * x18;
    const double x20 = p1 * p2;
    const double x21 = x10 * x20 * x3;
    const double x22 = x12 * x20;
    const double x23 = p1 * p1 + 2 * p2 * p2 - 2 * x22;
    const double x24 = x12 * x3;
    const double x25 = x23 * x24;
    const double x26 = 4 * x24;
    const double x27 = -x26 * (x17 * x19 + x21 - x25);
    const double x28 = x12 * x12 * x23;
    const double x29 = -x28;
    const double x30 = x10 * x22;
    const double x31 = g * x10;
    const double x32 = 8 * x17 * x24 * x31 + x29 + x30;
    const double x33 = x23 * x9;
    const double x34 = std::sin(th2);
    const double x35 = x18 * x34 - x21 + x25;
    const double x36 = x26 * x31 * x34;
    J(0, 0) = x7;
    J(0, 1) = x8;
    J(0, 2) = x11;
    J(0, 3) = x13;
    J(1, 0) = x14;
    J(1, 1) = x15;
    J(1, 2) = x13;
    J(1, 3) = 2 * x11;
    J(2, 0) = -x16 * (x10 * (x19 * std::cos(th1) + x23 * x9 + x32) + x27);
    J(2, 1) = x16 * (x10 * (x32 + x33) + x27);
    J(2, 2) = x8;
    J(2, 3) = x15;
    J(3, 0) = x16 * (-x10 * (x28 - x30 - x33 + x36) + 4 * x12 * x3 * x35);
    J(3, 1) = -x16 * (x10 * (x18 * std::cos(th2) + x29 + x30 + x33 - x36) + x26 * x35);
    J(3, 2) = x7;
    J(3, 3) = x14;
    return J;
}

std::vector<Entry> build_entries() {
    std::vector<Entry> es;
    auto v2 = [](double a, double b) {
        Vec v(2);
        v << a, b;
        return v;
    };
    auto v3 = [](double a, double b, double c) {
        Vec v(3);
        v << a, b, c;
        return v;
    };
    auto v4 = [](double a, double b, double c, double d) {
        Vec v(4);
        v << a, b, c, d;
        return v;
    };

    es.push_back({"sho", 2, "harmonic oscillator: (y, -x)", {},
                  {"has-first-integral", "periodic", "non-discoverable-c0"},
                  v2(1, 0), v2(-2, -2), v2(2, 2), std::nullopt});
    es.push_back({"sho-cubic", 2, "cubic oscillator: (y, -x) scaled by x^2+y^2", {},
                  {"has-first-integral", "periodic", "non-discoverable-c0"},
                  v2(1, 0), v2(-2, -2), v2(2, 2), std::nullopt});
    es.push_back({"spiral", 2, "linear focus: (-y + eps x, x + eps y)", {{"eps", -0.05}},
                  {"analytic-discoverable", "non-dense-trajectories"},
                  v2(1, 0), v2(-2, -2), v2(2, 2), std::nullopt});
    es.push_back({"lorenz", 3, "Lorenz system", {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}},
                  {"chaotic-attractor", "expected-dimension", "analytic-discoverable"},
                  v3(1, 1, 1), v3(-30, -30, -5), v3(30, 30, 60), 2.06});
    es.push_back({"rossler", 3, "Roessler system", {{"a", 0.2}, {"b", 0.2}, {"c", 5.7}},
                  {"chaotic-attractor", "expected-dimension"},
                  v3(0.1, 0.0, 0.1), v3(-15, -15, -2), v3(15, 15, 30), 2.01});
    es.push_back({"nilpotent-f1", 2, "shear fixture: (y, 0)", {},
                  {"fixture", "asymmetric-jacobian"},
                  v2(0, 1), v2(-2, -2), v2(2, 2), std::nullopt});
    es.push_back({"nilpotent-f2", 2, "shear fixture: (y^2/2, 0)", {},
                  {"fixture", "asymmetric-jacobian"},
                  v2(0, 1), v2(-2, -2), v2(2, 2), std::nullopt});
    es.push_back({"bistable", 2, "double-well relaxation: (x - x^3, -y)", {},
                  {"fixture", "multi-attractor"},
                  v2(1.5, 1), v2(-2, -2), v2(2, 2), std::nullopt});
    es.push_back({"henon-heiles", 4, "Henon-Heiles Hamiltonian flow, state (x, y, px, py)", {},
                  {"has-first-integral", "hamiltonian"},
                  v4(0.0, 0.1, 0.4, 0.0), v4(-1, -1, -1, -1), v4(1, 1, 1, 1), std::nullopt});
    es.push_back({"double-pendulum", 4,
                  "double pendulum in angle/momentum coordinates, state (th1, th2, p1, p2)",
                  {{"g", 1.0}},
                  {"has-transcendental-first-integral", "hamiltonian",
                   "not-chaotic-in-position-momentum"},
                  v4(0.5, 0.5, 0, 0), v4(-3.2, -3.2, -3, -3), v4(3.2, 3.2, 3, 3), std::nullopt});
    return es;
}

[[noreturn]] void unknown_id(const std::string& id) {
    std::ostringstream os;
    os << "catalog: unknown system '" << id << "'; available:";
    for (const auto& e : entries()) os << " " << e.id;
    throw ValidationError(os.str());
}

}  // namespace

const std::vector<Entry>& entries() {
    static const std::vector<Entry> es = build_entries();
    return es;
}

const Entry& entry(const std::string& id) {
    for (const auto& e : entries()) {
        if (e.id == id) return e;
    }
    unknown_id(id);
}

VectorField get(const std::string& id, const std::map<std::string, double>& params) {
    const Entry& e = entry(id);
    const auto p = merged(e.default_params, params);

    if (id == "sho") {
        return VectorField::closed_form(id, 2,
            [](const Vec& u) {
                Vec f(2);
                f << u[1], -u[0];
                return f;
            },
            [](const Vec&) {
                Mat J(2, 2);
                J << 0, 1, -1, 0;
                return J;
            });
    }
    if (id == "sho-cubic") {
        return VectorField::closed_form(id, 2,
            [](const Vec& u) {
                const double r2 = u[0] * u[0] + u[1] * u[1];
                Vec f(2);
                f << u[1] * r2, -u[0] * r2;
                return f;
            },
            [](const Vec& u) {
                const double x = u[0], y = u[1];
                Mat J(2, 2);
                J << 2 * x * y, x * x + 3 * y * y, -(3 * x * x + y * y), -2 * x * y;
                return J;
            });
    }
    if (id == "spiral") {
        const double eps = p.at("eps");
        return VectorField::closed_form(id, 2,
            [eps](const Vec& u) {
                Vec f(2);
                f << -u[1] + eps * u[0], u[0] + eps * u[1];
                return f;
            },
            [eps](const Vec&) {
                Mat J(2, 2);
                J << eps, -1, 1, eps;
                return J;
            },
            p);
    }
    if (id == "lorenz") {
        const double s = p.at("sigma"), r = p.at("rho"), b = p.at("beta");
        return VectorField::closed_form(id, 3,
            [s, r, b](const Vec& u) {
                Vec f(3);
                f << s * (u[1] - u[0]), u[0] * (r - u[2]) - u[1], u[0] * u[1] - b * u[2];
                return f;
            },
            [s, r, b](const Vec& u) {
                Mat J(3, 3);
                J << -s, s, 0, r - u[2], -1, -u[0], u[1], u[0], -b;
                return J;
            },
            p);
    }
    if (id == "rossler") {
        const double a = p.at("a"), b = p.at("b"), c = p.at("c");
        return VectorField::closed_form(id, 3,
            [a, b, c](const Vec& u) {
                Vec f(3);
                f << -u[1] - u[2], u[0] + a * u[1], b + u[2] * (u[0] - c);
                return f;
            },
            [a, c](const Vec& u) {
                Mat J(3, 3);
                J << 0, -1, -1, 1, a, 0, u[2], 0, u[0] - c;
                return J;
            },
            p);
    }
    if (id == "nilpotent-f1") {
        return VectorField::closed_form(id, 2,
            [](const Vec& u) {
                Vec f(2);
                f << u[1], 0;
                return f;
            },
            [](const Vec&) {
                Mat J(2, 2);
                J << 0, 1, 0, 0;
                return J;
            });
    }
    if (id == "nilpotent-f2") {
        return VectorField::closed_form(id, 2,
            [](const Vec& u) {
                Vec f(2);
                f << 0.5 * u[1] * u[1], 0;
                return f;
            },
            [](const Vec& u) {
                Mat J(2, 2);
                J << 0, u[1], 0, 0;
                return J;
            });
    }
    if (id == "bistable") {
        return VectorField::closed_form(id, 2,
            [](const Vec& u) {
                Vec f(2);
                f << u[0] - u[0] * u[0] * u[0], -u[1];
                return f;
            },
            [](const Vec& u) {
                Mat J(2, 2);
                J << 1 - 3 * u[0] * u[0], 0, 0, -1;
                return J;
            });
    }
    if (id == "henon-heiles") {
        return VectorField::closed_form(id, 4,
            [](const Vec& u) {
                const double x = u[0], y = u[1];
                Vec f(4);
                f << u[2], u[3], -x - 2 * x * y, -y - x * x + y * y;
                return f;
            },
            [](const Vec& u) {
                const double x = u[0], y = u[1];
                Mat J = Mat::Zero(4, 4);
                J(0, 2) = 1;
                J(1, 3) = 1;
                J(2, 0) = -1 - 2 * y;
                J(2, 1) = -2 * x;
                J(3, 0) = -2 * x;
                J(3, 1) = -1 + 2 * y;
                return J;
            });
    }
    if (id == "double-pendulum") {
        const double g = p.at("g");
        return VectorField::closed_form(id, 4,
            [g](const Vec& u) { return double_pendulum_field(u, g); },
            [g](const Vec& u) { return double_pendulum_jacobian(u, g); },
            p);
    }
    unknown_id(id);
}

bool has_polynomial(const std::string& id) {
    return id == "sho" || id == "sho-cubic" || id == "spiral" || id == "lorenz" ||
           id == "rossler" || id == "nilpotent-f1" || id == "nilpotent-f2" || id == "bistable" ||
           id == "henon-heiles";
}

VectorField get_polynomial(const std::string& id, const std::map<std::string, double>& params) {
    const Entry& e = entry(id);
    const auto p = merged(e.default_params, params);
    auto mono = [&](const Exponents& ex, double c) { return Poly::monomial(e.dim, ex, c); };

    if (id == "sho") {
        return VectorField::polynomial({mono({0, 1}, 1), mono({1, 0}, -1)}, id);
    }
    if (id == "sho-cubic") {
        return VectorField::polynomial(
            {mono({2, 1}, 1) + mono({0, 3}, 1), mono({3, 0}, -1) + mono({1, 2}, -1)}, id);
    }
    if (id == "spiral") {
        const double eps = p.at("eps");
        return VectorField::polynomial(
            {mono({0, 1}, -1) + mono({1, 0}, eps), mono({1, 0}, 1) + mono({0, 1}, eps)}, id);
    }
    if (id == "lorenz") {
        const double s = p.at("sigma"), r = p.at("rho"), b = p.at("beta");
        return VectorField::polynomial(
            {mono({0, 1, 0}, s) + mono({1, 0, 0}, -s),
             mono({1, 0, 0}, r) + mono({1, 0, 1}, -1) + mono({0, 1, 0}, -1),
             mono({1, 1, 0}, 1) + mono({0, 0, 1}, -b)},
            id);
    }
    if (id == "rossler") {
        const double a = p.at("a"), b = p.at("b"), c = p.at("c");
        return VectorField::polynomial(
            {mono({0, 1, 0}, -1) + mono({0, 0, 1}, -1),
             mono({1, 0, 0}, 1) + mono({0, 1, 0}, a),
             Poly::constant(3, b) + mono({1, 0, 1}, 1) + mono({0, 0, 1}, -c)},
            id);
    }
    if (id == "nilpotent-f1") {
        return VectorField::polynomial({mono({0, 1}, 1), Poly::zero(2, 0)}, id);
    }
    if (id == "nilpotent-f2") {
        return VectorField::polynomial({mono({0, 2}, 0.5), Poly::zero(2, 0)}, id);
    }
    if (id == "bistable") {
        return VectorField::polynomial(
            {mono({1, 0}, 1) + mono({3, 0}, -1), mono({0, 1}, -1)}, id);
    }
    if (id == "henon-heiles") {
        return VectorField::polynomial(
            {mono({0, 0, 1, 0}, 1), mono({0, 0, 0, 1}, 1),
             mono({1, 0, 0, 0}, -1) + mono({1, 1, 0, 0}, -2),
             mono({0, 1, 0, 0}, -1) + mono({2, 0, 0, 0}, -1) + mono({0, 2, 0, 0}, 1)},
            id);
    }
    throw ValidationError("catalog: '" + id + "' has no polynomial form");
}

std::optional<Poly> known_first_integral(const std::string& id,
                                         const std::map<std::string, double>&) {
    if (id == "sho" || id == "sho-cubic") {
        return Poly::monomial(2, {2, 0}, 1) + Poly::monomial(2, {0, 2}, 1);  // x^2 + y^2
    }
    if (id == "henon-heiles") {
        // H = (px^2 + py^2)/2 + (x^2 + y^2)/2 + x^2 y - y^3/3
        return Poly::monomial(4, {0, 0, 2, 0}, 0.5) + Poly::monomial(4, {0, 0, 0, 2}, 0.5) +
               Poly::monomial(4, {2, 0, 0, 0}, 0.5) + Poly::monomial(4, {0, 2, 0, 0}, 0.5) +
               Poly::monomial(4, {2, 1, 0, 0}, 1.0) + Poly::monomial(4, {0, 3, 0, 0}, -1.0 / 3.0);
    }
    return std::nullopt;
}

std::vector<std::string> law_ids() { return {"sho-full", "sho-radial", "nilpotent"}; }

ConservationLaw get_law(const std::string& id) {
    if (id == "sho-full") {
        // H(v,u) = ((u.v)^2 + (|v|^2 - |u|^2)^2) / 2
        return ConservationLaw::closed_form(id, 2,
            [](const Vec& v, const Vec& u) {
                const double a = u.dot(v);
                const double b = v.squaredNorm() - u.squaredNorm();
                return 0.5 * a * a + 0.5 * b * b;
            },
            [](const Vec& v, const Vec& u) {
                const double a = u.dot(v);
                const double b = v.squaredNorm() - u.squaredNorm();
                return Vec(a * u + 2.0 * b * v);
            },
            [](const Vec& v, const Vec& u) {
                const double b = v.squaredNorm() - u.squaredNorm();
                Mat m = u * u.transpose() + 4.0 * v * v.transpose();
                m += 2.0 * b * Mat::Identity(2, 2);
                return m;
            });
    }
    if (id == "sho-radial") {
        // H(v,u) = (u.v)^2
        return ConservationLaw::closed_form(id, 2,
            [](const Vec& v, const Vec& u) {
                const double a = u.dot(v);
                return a * a;
            },
            [](const Vec& v, const Vec& u) { return Vec(2.0 * u.dot(v) * u); },
            [](const Vec&, const Vec& u) { return Mat(2.0 * u * u.transpose()); });
    }
    if (id == "nilpotent") {
        // H(v,u) = v2^2 / 2
        return ConservationLaw::closed_form(id, 2,
            [](const Vec& v, const Vec&) { return 0.5 * v[1] * v[1]; },
            [](const Vec& v, const Vec&) {
                Vec g(2);
                g << 0, v[1];
                return g;
            },
            [](const Vec&, const Vec&) {
                Mat m = Mat::Zero(2, 2);
                m(1, 1) = 1;
                return m;
            });
    }
    std::ostringstream os;
    os << "catalog: unknown law '" << id << "'; available:";
    for (const auto& lid : law_ids()) os << " " << lid;
    throw ValidationError(os.str());
}

}  // namespace catalog
}  // namespace dynid
