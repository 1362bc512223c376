#include "varfield/tree.hpp"

#include "varfield/errors.hpp"

namespace varfield {

ExprTree ExprTree::rational(Rational r) {
    ExprTree t;
    t.kind = Kind::Rational;
    t.value = std::move(r);
    return t;
}

ExprTree ExprTree::leaf(Atom a) {
    ExprTree t;
    t.kind = Kind::Leaf;
    t.atom = std::move(a);
    return t;
}

ExprTree ExprTree::sum(std::vector<ExprTree> children) {
    ExprTree t;
    t.kind = Kind::Sum;
    t.children = std::move(children);
    return t;
}

ExprTree ExprTree::product(std::vector<ExprTree> children) {
    ExprTree t;
    t.kind = Kind::Product;
    t.children = std::move(children);
    return t;
}

ExprTree ExprTree::pow(ExprTree base, int exponent) {
    ExprTree t;
    t.kind = Kind::IntPow;
    t.children.push_back(std::move(base));
    t.exponent = exponent;
    return t;
}

Expr canonicalize(const ExprTree& t) {
    switch (t.kind) {
    case ExprTree::Kind::Rational:
        return Expr::rational(t.value);
    case ExprTree::Kind::Leaf:
        return Expr::atom(t.atom);
    case ExprTree::Kind::Sum: {
        Expr out;
        for (const auto& c : t.children) out += canonicalize(c);
        return out;
    }
    case ExprTree::Kind::Product: {
        Expr out = Expr::integer(1);
        for (const auto& c : t.children) out *= canonicalize(c);
        return out;
    }
    case ExprTree::Kind::IntPow:
        return canonicalize(t.children.at(0)).pow(t.exponent);
    }
    throw Error(ErrorCode::UnsupportedForm, "malformed expression tree");
}

ExprTree to_tree(const Expr& e) {
    std::vector<ExprTree> terms;
    for (const auto& [m, c] : e.terms()) {
        std::vector<ExprTree> factors;
        factors.push_back(ExprTree::rational(c));
        for (const auto& [a, p] : m) {
            if (p == 1)
                factors.push_back(ExprTree::leaf(a));
            else
                factors.push_back(ExprTree::pow(ExprTree::leaf(a), p));
        }
        terms.push_back(ExprTree::product(std::move(factors)));
    }
    return ExprTree::sum(std::move(terms));
}

} // namespace varfield
