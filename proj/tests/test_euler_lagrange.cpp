#include "varfield/errors.hpp"
#include "varfield/euler_lagrange.hpp"
#include "varfield/parser.hpp"
#include "varfield/vector_ops.hpp"

#include <doctest.h>

using namespace varfield;

namespace {

LagrangianDef scalar_lagrangian(Expr density) {
    LagrangianDef L;
    L.fields.push_back({"psi", 1, false});
    L.density = std::move(density);
    L.validate();
    return L;
}

Expr psi() { return Expr::atom(Atom::field("psi", 0)); }

} // namespace

TEST_CASE("potential term: L = psi^2/2 gives lhs = psi") {
    LagrangianDef L = scalar_lagrangian(Expr::rational(Rational(1, 2)) * psi() * psi());
    Equation eq = derive(L, "psi", 0);
    CHECK(eq.field == "psi");
    CHECK(eq.comp == 0);
    CHECK(struct_equal(eq.lhs, psi()));
}

TEST_CASE("wave Lagrangian reproduces the wave equation") {
    // L = 1/2 psi_t^2 - c^2/2 |grad psi|^2.  Hand-applied operator:
    //   dL/dpsi = 0
    //   d/dt(dL/dpsi_t) = psi_tt
    //   d/dx_i(dL/dpsi_xi) = -c^2 psi_xixi
    // so lhs = -psi_tt + c^2 laplacian(psi).
    Expr c2 = Expr::atom(Atom::constant("c")).pow(2);
    Expr half = Expr::rational(Rational(1, 2));
    Expr density = half * total_derivative(psi(), 0).pow(2) -
                   half * c2 * dot(grad(psi()), grad(psi()));
    LagrangianDef L = scalar_lagrangian(density);
    L.constants.declare("c");
    Equation eq = derive(L, "psi", 0);
    Expr expected = -Expr::atom(Atom::deriv("psi", 0, {2, 0, 0, 0})) + c2 * laplacian(psi());
    CHECK(struct_equal(eq.lhs, expected));
}

TEST_CASE("EL operator is linear in the density") {
    Expr d1 = psi() * psi();
    Expr d2 = total_derivative(psi(), 1).pow(2) + psi();
    Expr a = Expr::rational(Rational(3, 7));
    Expr b = Expr::integer(-2);

    LagrangianDef La = scalar_lagrangian(d1);
    LagrangianDef Lb = scalar_lagrangian(d2);
    LagrangianDef Lc = scalar_lagrangian(a * d1 + b * d2);
    CHECK(struct_equal(derive(Lc, "psi", 0).lhs,
                       a * derive(La, "psi", 0).lhs + b * derive(Lb, "psi", 0).lhs));
}

TEST_CASE("null Lagrangians (total divergences) are annihilated") {
    // d/dx1 of psi^2 and d/dt of psi^3 are total derivatives, so they must
    // contribute nothing to the field equations.
    for (int coord : {0, 1, 2, 3}) {
        Expr density = total_derivative(psi() * psi(), coord);
        LagrangianDef L = scalar_lagrangian(density);
        CHECK(derive(L, "psi", 0).lhs.is_zero());
    }
    Expr density = total_derivative(psi() * psi() * psi(), 0) +
                   total_derivative(psi() * psi(), 2);
    CHECK(derive(scalar_lagrangian(density), "psi", 0).lhs.is_zero());
}

TEST_CASE("derived equations contain derivatives of order at most two") {
    Expr c2 = Expr::atom(Atom::constant("c")).pow(2);
    Expr density = Expr::rational(Rational(1, 2)) * total_derivative(psi(), 0).pow(2) -
                   Expr::rational(Rational(1, 2)) * c2 * dot(grad(psi()), grad(psi())) +
                   psi() * total_derivative(psi(), 1);
    LagrangianDef L = scalar_lagrangian(density);
    L.constants.declare("c");
    for (const Atom& a : atoms_of(derive(L, "psi", 0).lhs))
        CHECK(a.deriv_order() <= 2);
}

TEST_CASE("derive_all covers varied fields in declaration order and skips sources") {
    LagrangianDef L;
    L.fields.push_back({"phi", 1, false});
    L.fields.push_back({"A", 3, false});
    L.fields.push_back({"rho", 1, true});
    Expr phi = Expr::atom(Atom::field("phi", 0));
    Expr rho = Expr::atom(Atom::field("rho", 0));
    Vec3 A{Expr::atom(Atom::field("A", 1)), Expr::atom(Atom::field("A", 2)),
           Expr::atom(Atom::field("A", 3))};
    L.density = phi * phi + dot(A, A) - rho * phi;
    L.validate();

    std::vector<Equation> eqs = derive_all(L);
    REQUIRE(eqs.size() == 4);
    CHECK(eqs[0].field == "phi");
    CHECK(eqs[0].comp == 0);
    CHECK(struct_equal(eqs[0].lhs, Expr::integer(2) * phi - rho));
    for (int k = 1; k <= 3; ++k) {
        CHECK(eqs[static_cast<std::size_t>(k)].field == "A");
        CHECK(eqs[static_cast<std::size_t>(k)].comp == k);
        CHECK(struct_equal(eqs[static_cast<std::size_t>(k)].lhs,
                           Expr::integer(2) * A[static_cast<std::size_t>(k - 1)]));
    }
}

TEST_CASE("validate rejects undeclared fields and higher derivatives") {
    LagrangianDef L;
    L.fields.push_back({"psi", 1, false});
    L.density = Expr::atom(Atom::field("chi", 0));
    CHECK_THROWS_AS(L.validate(), Error);

    L.density = Expr::atom(Atom::deriv("psi", 0, {1, 1, 0, 0}));
    CHECK_THROWS_AS(L.validate(), Error);

    LagrangianDef S;
    S.fields.push_back({"rho", 1, true});
    S.density = Expr::atom(Atom::d1("rho", 0, 1));
    CHECK_THROWS_AS(S.validate(), Error);
}
