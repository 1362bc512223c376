#pragma once

#include "varfield/expr.hpp"

#include <vector>

namespace varfield {

// Uncanonicalized expression tree, the input side of canonicalize().
// The parser and the random-expression test generators build these.
struct ExprTree {
    enum class Kind { Rational, Leaf, Sum, Product, IntPow };

    Kind kind{Kind::Rational};
    Rational value;                 // Rational
    Atom atom;                      // Leaf
    std::vector<ExprTree> children; // Sum, Product; IntPow has one child
    int exponent{0};                // IntPow

    static ExprTree rational(Rational r);
    static ExprTree leaf(Atom a);
    static ExprTree sum(std::vector<ExprTree> children);
    static ExprTree product(std::vector<ExprTree> children);
    static ExprTree pow(ExprTree base, int exponent);
};

// Unique canonical polynomial form.  Idempotent in the sense that
// re-canonicalizing any tree rendering of the result reproduces it.
// Negative exponents are only admitted on nonzero rational-constant bases;
// anything else throws Error(UnsupportedForm).
Expr canonicalize(const ExprTree& t);

// Tree rendering of a canonical form (sum of products of powers).
ExprTree to_tree(const Expr& e);

} // namespace varfield
