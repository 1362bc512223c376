#include "varfield/expr.hpp"
#include "varfield/errors.hpp"
#include "varfield/tree.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

using namespace varfield;

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Pool of atoms the random generators pick from.
const std::vector<Atom>& atom_pool() {
    static const std::vector<Atom> pool{
        Atom::time(),         Atom::space(1),          Atom::space(2),
        Atom::space(3),       Atom::constant("c"),     Atom::field("psi", 0),
        Atom::field("A", 2),  Atom::d1("psi", 0, 0),   Atom::d1("psi", 0, 1),
        Atom::d1("A", 2, 3),
    };
    return pool;
}

ExprTree random_tree(std::mt19937_64& rng, int depth) {
    int pick = draw(rng, 0, depth <= 0 ? 1 : 4);
    switch (pick) {
    case 0:
        return ExprTree::rational(Rational(draw(rng, -6, 6), draw(rng, 1, 4)));
    case 1:
        return ExprTree::leaf(atom_pool()[static_cast<std::size_t>(
            draw(rng, 0, static_cast<int>(atom_pool().size()) - 1))]);
    case 2: {
        std::vector<ExprTree> kids;
        int n = draw(rng, 2, 3);
        for (int i = 0; i < n; ++i) kids.push_back(random_tree(rng, depth - 1));
        return ExprTree::sum(std::move(kids));
    }
    case 3: {
        std::vector<ExprTree> kids;
        int n = draw(rng, 2, 3);
        for (int i = 0; i < n; ++i) kids.push_back(random_tree(rng, depth - 1));
        return ExprTree::product(std::move(kids));
    }
    default:
        return ExprTree::pow(random_tree(rng, depth - 1), draw(rng, 0, 3));
    }
}

// Independent reference evaluator: walks the tree directly, never touching
// the canonical representation.
double eval_tree(const ExprTree& t, const std::map<Atom, double>& vals) {
    switch (t.kind) {
    case ExprTree::Kind::Rational:
        return to_double(t.value);
    case ExprTree::Kind::Leaf:
        return vals.at(t.atom);
    case ExprTree::Kind::Sum: {
        double s = 0;
        for (const auto& k : t.children) s += eval_tree(k, vals);
        return s;
    }
    case ExprTree::Kind::Product: {
        double p = 1;
        for (const auto& k : t.children) p *= eval_tree(k, vals);
        return p;
    }
    case ExprTree::Kind::IntPow:
        return std::pow(eval_tree(t.children.front(), vals), t.exponent);
    }
    return 0;
}

Expr random_poly(std::mt19937_64& rng) { return canonicalize(random_tree(rng, 3)); }

} // namespace

TEST_CASE("canonical form basics") {
    Expr zero;
    CHECK(zero.is_zero());
    CHECK(zero.str() == "0");

    Expr x = Expr::atom(Atom::space(1));
    Expr psi = Expr::atom(Atom::field("psi", 0));
    CHECK(struct_equal(x + psi, psi + x));
    CHECK(struct_equal(x * psi, psi * x));
    CHECK((x - x).is_zero());
    CHECK(struct_equal((x + psi) * (x - psi), x * x - psi * psi));
    CHECK(struct_equal(x.pow(0), Expr::integer(1)));
    CHECK(struct_equal(Expr::rational(Rational(2, 3)).pow(-2), Expr::rational(Rational(9, 4))));
    CHECK_THROWS_AS(x.pow(-1), Error);
}

TEST_CASE("canonicalization is idempotent on random trees") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        Expr once = canonicalize(random_tree(rng, 4));
        Expr twice = canonicalize(to_tree(once));
        CHECK(once == twice);
    }
}

TEST_CASE("evaluation matches an independent tree evaluator") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        ExprTree t = random_tree(rng, 4);
        Expr e = canonicalize(t);
        std::map<Atom, double> vals;
        for (const Atom& a : atom_pool())
            vals[a] = draw(rng, -20, 20) / 8.0;
        double ref = eval_tree(t, vals);
        double got = evaluate(e, vals);
        double scale = std::max({1.0, std::abs(ref), std::abs(got)});
        CHECK(std::abs(ref - got) <= 1e-12 * scale);
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("partial derivative wrt an atom") {
    Atom p = Atom::field("psi", 0);
    Expr psi = Expr::atom(p);
    Expr x = Expr::atom(Atom::space(1));
    // d/dpsi (3 psi^2 x + psi + x) = 6 psi x + 1
    Expr e = Expr::integer(3) * psi * psi * x + psi + x;
    CHECK(struct_equal(partial_wrt_atom(e, p), Expr::integer(6) * psi * x + Expr::integer(1)));
    // Atoms are independent: d/dpsi of a derivative symbol is zero.
    CHECK(partial_wrt_atom(Expr::atom(Atom::d1("psi", 0, 1)), p).is_zero());
}

TEST_CASE("total derivative: linearity and product rule") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        Expr a = random_poly(rng);
        Expr b = random_poly(rng);
        for (int coord = 0; coord < 4; ++coord) {
            CHECK(struct_equal(total_derivative(a + b, coord),
                               total_derivative(a, coord) + total_derivative(b, coord)));
            CHECK(struct_equal(total_derivative(a * b, coord),
                               total_derivative(a, coord) * b + a * total_derivative(b, coord)));
        }
    }
}

TEST_CASE("total derivatives commute") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        Expr e = random_poly(rng);
        for (int c1 = 0; c1 < 4; ++c1)
            for (int c2 = c1 + 1; c2 < 4; ++c2)
                CHECK(struct_equal(total_derivative(total_derivative(e, c1), c2),
                                   total_derivative(total_derivative(e, c2), c1)));
    }
}

TEST_CASE("total derivative raises derivative symbols") {
    // d/dx1 (psi) = dpsi/dx1; d/dt (dpsi/dx1) = mixed second derivative.
    Expr psi = Expr::atom(Atom::field("psi", 0));
    Expr d1 = total_derivative(psi, 1);
    CHECK(struct_equal(d1, Expr::atom(Atom::d1("psi", 0, 1))));
    Expr d2 = total_derivative(d1, 0);
    CHECK(struct_equal(d2, Expr::atom(Atom::deriv("psi", 0, {1, 1, 0, 0}))));
    // Coordinates differentiate to 0/1, constants to 0.
    CHECK(struct_equal(total_derivative(Expr::atom(Atom::space(2)), 2), Expr::integer(1)));
    CHECK(total_derivative(Expr::atom(Atom::space(2)), 1).is_zero());
    CHECK(total_derivative(Expr::atom(Atom::constant("c")), 1).is_zero());
}

TEST_CASE("substitution is simultaneous and canonical") {
    Expr x = Expr::atom(Atom::space(1));
    Expr y = Expr::atom(Atom::space(2));
    // {x -> y, y -> x} swaps, it must not cascade.
    Expr e = x + Expr::integer(2) * y;
    Expr swapped = substitute(e, {{Atom::space(1), y}, {Atom::space(2), x}});
    CHECK(struct_equal(swapped, y + Expr::integer(2) * x));
}

TEST_CASE("try_divide performs exact polynomial division") {
    Expr x = Expr::atom(Atom::space(1));
    Expr y = Expr::atom(Atom::space(2));
    Expr num = (x + y) * (x - y);
    auto q = try_divide(num, x + y);
    REQUIRE(q.has_value());
    CHECK(struct_equal(*q, x - y));
    CHECK(!try_divide(x * x + y, x).has_value());
    auto self = try_divide(num, num);
    REQUIRE(self.has_value());
    CHECK(struct_equal(*self, Expr::integer(1)));
}

TEST_CASE("evaluate folds exact coefficients and reports unbound atoms") {
    Expr e = Expr::rational(Rational(1, 3)) * Expr::atom(Atom::space(1));
    CHECK(evaluate(e, {{Atom::space(1), 3.0}}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(evaluate(e, {}), Error);

    // Constants resolve through a table.
    ConstantTable tab;
    tab.set_value("c", Rational(2));
    Expr ce = Expr::atom(Atom::constant("c")).pow(2);
    CHECK(evaluate(ce, {}, &tab) == doctest::Approx(4.0));
    // mu0 derives from eps0 and c.
    tab.set_value("eps0", Rational(1, 4));
    CHECK(evaluate(Expr::atom(Atom::constant("mu0")), {}, &tab) == doctest::Approx(1.0));
}
