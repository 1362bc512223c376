#pragma once

#include "varfield/atom.hpp"
#include "varfield/constants.hpp"
#include "varfield/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace varfield {

// Power product of atoms, sorted by the canonical atom order, all powers >= 1.
using Monomial = std::vector<std::pair<Atom, int>>;

// Canonical multivariate polynomial over atoms with exact rational
// coefficients.  Every constructor and operator maintains canonical form,
// so two Exprs are mathematically equal as polynomials iff they compare
// equal structurally.
class Expr {
public:
    Expr() = default; // zero

    static Expr rational(Rational r);
    static Expr integer(long long n);
    static Expr atom(const Atom& a);

    bool is_zero() const { return terms_.empty(); }
    // Non-null iff the expression is a single rational constant (or zero).
    std::optional<Rational> as_rational() const;

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    Expr operator-() const;
    Expr& operator+=(const Expr& rhs);
    Expr& operator-=(const Expr& rhs);
    Expr& operator*=(const Expr& rhs);

    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);

    // exponent >= 0, or any integer when the base is a nonzero rational.
    Expr pow(int exponent) const;
    // Division by a nonzero rational constant.
    Expr div_const(const Rational& r) const;

    bool operator==(const Expr&) const = default;

    // Deterministic canonical rendering (sorted monomials, explicit
    // coefficients); the golden-file format.
    std::string str() const;

    // Internal: insert coeff * monomial (monomial must be sorted).
    void add_term(Monomial m, Rational coeff);

private:
    std::map<Monomial, Rational> terms_;
};

// Derivative treating every atom as an independent variable.
Expr partial_wrt_atom(const Expr& e, const Atom& a);

// Derivative wrt a coordinate (index 0 = t, 1..3 = x_i), chain rule through
// field atoms: each field/derivative atom contributes its raised derivative
// symbol; coordinates differentiate to 1 or 0; constants to 0.
Expr total_derivative(const Expr& e, int coord);
Expr total_derivative(const Expr& e, const Atom& coord_atom);

// Simultaneous substitution; result is canonical.
Expr substitute(const Expr& e, const std::map<Atom, Expr>& bindings);

// Exact coefficients folded first, then floating evaluation in the fixed
// term order.  Unbound atoms throw Error(MissingBinding) unless they are
// constants resolvable through `consts`.
double evaluate(const Expr& e, const std::map<Atom, double>& vals,
                const ConstantTable* consts = nullptr);

inline bool struct_equal(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

// Exact polynomial division; nullopt when den does not divide num.
std::optional<Expr> try_divide(const Expr& num, const Expr& den);

// All distinct atoms appearing in e, in canonical order.
std::vector<Atom> atoms_of(const Expr& e);

} // namespace varfield
