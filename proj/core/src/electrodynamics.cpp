#include "varfield/electrodynamics.hpp"

#include "varfield/errors.hpp"

namespace varfield {

namespace {

Expr atom(const Atom& a) { return Expr::atom(a); }

Vec3 vector_field(const std::string& name) {
    return {atom(Atom::field(name, 1)), atom(Atom::field(name, 2)), atom(Atom::field(name, 3))};
}

} // namespace

std::pair<Vec3, Vec3> potentials_to_fields(const Expr& phi, const Vec3& A) {
    Vec3 B = curl(A);
    Vec3 E = -grad(phi) - dt(A);
    return {E, B};
}

EmSystem build_em_system() {
    EmSystem sys;

    LagrangianDef& L = sys.lagrangian;
    L.fields = {{"phi", 1, false}, {"A", 3, false}, {"rho", 1, true}, {"j", 3, true}};

    Expr phi = atom(Atom::field("phi", 0));
    Vec3 A = vector_field("A");
    Expr rho = atom(Atom::field("rho", 0));
    Vec3 j = vector_field("j");
    Expr eps0 = atom(Atom::constant("eps0"));
    Expr c = atom(Atom::constant("c"));

    auto [E, B] = potentials_to_fields(phi, A);
    // L = eps0*(E^2 - c^2 B^2)/2 - rho*phi + j.A
    L.density = eps0.div_const(2) * (dot(E, E) - c.pow(2) * dot(B, B)) - rho * phi + dot(j, A);
    L.validate();

    // phi target in the printed normalization: 0 = -rho - div[eps0(grad phi + dA/dt)]
    Expr phi_lhs = -rho - eps0 * divergence(grad(phi) + dt(A));
    sys.targets.push_back({"phi", 0, phi_lhs});
    sys.target_normalizations.push_back("1");

    // A_k target: the mu0-form Maxwell equation cleared by eps0*c^2, oriented
    // so the derived equation matches with a positive factor:
    //   j_k + eps0*d/dt(-dphi/dx_k - dA_k/dt) - eps0*c^2*[curl curl A]_k = 0
    Vec3 curl_curl = curl(curl(A));
    for (int k = 1; k <= 3; ++k) {
        Expr e_k = -total_derivative(phi, k) - total_derivative(A[k - 1], 0);
        Expr lhs = j[k - 1] + eps0 * total_derivative(e_k, 0) -
                   eps0 * c.pow(2) * curl_curl[k - 1];
        sys.targets.push_back({"A", k, lhs});
        sys.target_normalizations.push_back("eps0*c^2");
    }
    return sys;
}

bool verify_curl_curl_identity() {
    Vec3 A = vector_field("A");
    Vec3 lhs = curl(curl(A));
    Expr div_A = divergence(A);
    for (int k = 0; k < 3; ++k) {
        Expr rhs = total_derivative(div_A, k + 1) - laplacian(A[k]);
        if (!struct_equal(lhs[k], rhs)) return false;
    }
    return true;
}

std::optional<std::string> proportional_up_to_const(const Expr& derived, const Expr& target) {
    if (struct_equal(derived, target)) return std::string("1");
    if (derived.is_zero() || target.is_zero()) return std::nullopt;

    // Factor each polynomial as sum over non-constant monomial parts with
    // constant-polynomial coefficients, then require one common ratio.
    auto split = [](const Expr& e) {
        std::map<Monomial, Expr> parts;
        for (const auto& [m, coeff] : e.terms()) {
            Monomial consts, rest;
            for (const auto& [a, p] : m)
                (a.kind == AtomKind::Constant ? consts : rest).emplace_back(a, p);
            Expr cpart;
            cpart.add_term(std::move(consts), coeff);
            parts[rest] += cpart;
        }
        return parts;
    };
    auto d = split(derived);
    auto t = split(target);
    if (d.size() != t.size()) return std::nullopt;

    auto di = d.begin();
    auto ti = t.begin();
    const Expr& d0 = di->second;
    const Expr& t0 = ti->second;
    for (; di != d.end(); ++di, ++ti) {
        if (di->first != ti->first) return std::nullopt;
        // d_i / t_i == d_0 / t_0, cross-multiplied.
        if (!struct_equal(di->second * t0, ti->second * d0)) return std::nullopt;
    }
    if (auto f = try_divide(d0, t0)) return f->str();
    return "(" + d0.str() + ")/(" + t0.str() + ")";
}

bool EmReport::all_match() const {
    if (!curl_curl_identity) return false;
    for (const auto& c : comparisons)
        if (!c.match) return false;
    return !comparisons.empty();
}

EmReport verify_em(const EmSystem& sys) {
    EmReport rep;
    rep.curl_curl_identity = verify_curl_curl_identity();
    std::vector<Equation> derived = derive_all(sys.lagrangian);
    for (std::size_t i = 0; i < derived.size() && i < sys.targets.size(); ++i) {
        EmComparison cmp;
        cmp.field = derived[i].field;
        cmp.comp = derived[i].comp;
        auto factor = proportional_up_to_const(derived[i].lhs, sys.targets[i].lhs);
        cmp.match = factor.has_value();
        if (factor) {
            cmp.normalization = *factor == "1" ? sys.target_normalizations[i]
                                               : *factor + " * " + sys.target_normalizations[i];
        }
        rep.comparisons.push_back(std::move(cmp));
    }
    return rep;
}

EmReport verify_em() { return verify_em(build_em_system()); }

} // namespace varfield
