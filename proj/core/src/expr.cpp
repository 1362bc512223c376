#include "varfield/expr.hpp"

#include "varfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace varfield {

Rational dyadic_from_double(double x) {
    const double scale = 1099511627776.0; // 2^40
    boost::multiprecision::cpp_int num(static_cast<long long>(std::llround(x * scale)));
    return Rational(num, boost::multiprecision::cpp_int(1) << 40);
}

Expr Expr::rational(Rational r) {
    Expr e;
    if (r != 0) e.terms_.emplace(Monomial{}, std::move(r));
    return e;
}

Expr Expr::integer(long long n) { return rational(Rational(n)); }

Expr Expr::atom(const Atom& a) {
    Expr e;
    e.terms_.emplace(Monomial{{a, 1}}, Rational(1));
    return e;
}

std::optional<Rational> Expr::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
    return std::nullopt;
}

void Expr::add_term(Monomial m, Rational coeff) {
    if (coeff == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), std::move(coeff));
    } else {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

Expr Expr::operator-() const {
    Expr e;
    for (const auto& [m, c] : terms_) e.terms_.emplace(m, -c);
    return e;
}

Expr& Expr::operator+=(const Expr& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
}

Expr& Expr::operator-=(const Expr& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
}

namespace {

Monomial mul_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            out.push_back(a[i++]);
        } else if (b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

} // namespace

Expr operator*(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.add_term(mul_monomials(ma, mb), ca * cb);
    return out;
}

Expr& Expr::operator*=(const Expr& rhs) {
    *this = *this * rhs;
    return *this;
}

Expr Expr::pow(int exponent) const {
    if (exponent < 0) {
        auto r = as_rational();
        if (!r || *r == 0)
            throw Error(ErrorCode::UnsupportedForm,
                        "negative exponent on a non-constant base");
        Rational inv = Rational(1) / *r;
        Expr out = Expr::rational(1);
        Expr base = Expr::rational(inv);
        for (int k = 0; k < -exponent; ++k) out *= base;
        return out;
    }
    Expr out = Expr::rational(1);
    for (int k = 0; k < exponent; ++k) out *= *this;
    return out;
}

Expr Expr::div_const(const Rational& r) const {
    if (r == 0) throw Error(ErrorCode::UnsupportedForm, "division by zero");
    Expr out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c / r);
    return out;
}

std::string Expr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational coeff = c;
        if (first) {
            if (coeff < 0) {
                os << "-";
                coeff = -coeff;
            }
        } else {
            os << (coeff < 0 ? " - " : " + ");
            if (coeff < 0) coeff = -coeff;
        }
        first = false;
        bool need_star = false;
        if (coeff != 1 || m.empty()) {
            os << coeff.str();
            need_star = true;
        }
        for (const auto& [a, p] : m) {
            if (need_star) os << "*";
            need_star = true;
            os << a.str();
            if (p > 1) os << "^" << p;
        }
    }
    return os.str();
}

Expr partial_wrt_atom(const Expr& e, const Atom& a) {
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (!(m[k].first == a)) continue;
            Monomial rest = m;
            if (rest[k].second == 1)
                rest.erase(rest.begin() + static_cast<long>(k));
            else
                rest[k].second--;
            out.add_term(std::move(rest), c * m[k].second);
            break; // atoms are unique within a monomial
        }
    }
    return out;
}

namespace {

// d(atom)/d(coord) as an Expr; zero for constants, 0/1 for coordinates,
// the raised derivative symbol for field atoms.
Expr atom_derivative(const Atom& a, int coord) {
    switch (a.kind) {
    case AtomKind::Constant:
        return Expr{};
    case AtomKind::Time:
        return coord == 0 ? Expr::integer(1) : Expr{};
    case AtomKind::Space:
        return coord == a.comp ? Expr::integer(1) : Expr{};
    case AtomKind::Field:
    case AtomKind::Deriv:
        return Expr::atom(a.raise(coord));
    }
    return Expr{};
}

} // namespace

Expr total_derivative(const Expr& e, int coord) {
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            Expr da = atom_derivative(m[k].first, coord);
            if (da.is_zero()) continue;
            Expr factor = Expr::rational(c * m[k].second);
            for (std::size_t j = 0; j < m.size(); ++j) {
                int p = m[j].second - (j == k ? 1 : 0);
                if (p > 0) factor *= Expr::atom(m[j].first).pow(p);
            }
            out += factor * da;
        }
    }
    return out;
}

Expr total_derivative(const Expr& e, const Atom& coord_atom) {
    return total_derivative(e, coord_atom.coord_index());
}

Expr substitute(const Expr& e, const std::map<Atom, Expr>& bindings) {
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        Expr term = Expr::rational(c);
        for (const auto& [a, p] : m) {
            auto it = bindings.find(a);
            if (it != bindings.end())
                term *= it->second.pow(p);
            else
                term *= Expr::atom(a).pow(p);
        }
        out += term;
    }
    return out;
}

double evaluate(const Expr& e, const std::map<Atom, double>& vals,
                const ConstantTable* consts) {
    double sum = 0.0;
    for (const auto& [m, c] : e.terms()) {
        double term = to_double(c);
        for (const auto& [a, p] : m) {
            double v;
            auto it = vals.find(a);
            if (it != vals.end()) {
                v = it->second;
            } else if (a.kind == AtomKind::Constant && consts) {
                auto num = consts->numeric(a.name);
                if (!num)
                    throw Error(ErrorCode::MissingBinding,
                                "unbound constant '" + a.name + "'");
                v = *num;
            } else {
                throw Error(ErrorCode::MissingBinding, "unbound atom '" + a.str() + "'");
            }
            for (int k = 0; k < p; ++k) term *= v;
        }
        sum += term;
    }
    return sum;
}

std::vector<Atom> atoms_of(const Expr& e) {
    std::set<Atom> atoms;
    for (const auto& [m, c] : e.terms())
        for (const auto& [a, p] : m) atoms.insert(a);
    return {atoms.begin(), atoms.end()};
}

std::optional<Expr> try_divide(const Expr& num, const Expr& den) {
    if (den.is_zero()) throw Error(ErrorCode::UnsupportedForm, "division by zero expression");
    if (num.is_zero()) return Expr{};
    if (auto r = den.as_rational()) return num.div_const(*r);

    // Exponent-vector representation over the union of atoms; plain lex
    // order, single-divisor division algorithm.
    std::vector<Atom> universe;
    {
        std::set<Atom> atoms;
        for (const Expr* e : {&num, &den})
            for (const auto& [m, c] : e->terms())
                for (const auto& [a, p] : m) atoms.insert(a);
        universe.assign(atoms.begin(), atoms.end());
    }
    auto to_vec = [&](const Monomial& m) {
        std::vector<int> v(universe.size(), 0);
        for (const auto& [a, p] : m) {
            auto it = std::lower_bound(universe.begin(), universe.end(), a);
            v[static_cast<std::size_t>(it - universe.begin())] = p;
        }
        return v;
    };
    using Poly = std::map<std::vector<int>, Rational>;
    auto to_poly = [&](const Expr& e) {
        Poly p;
        for (const auto& [m, c] : e.terms()) p.emplace(to_vec(m), c);
        return p;
    };
    Poly r = to_poly(num);
    const Poly d = to_poly(den);
    const auto& [lead_d, lead_dc] = *d.rbegin();

    Poly q;
    while (!r.empty()) {
        const auto& [lead_r, lead_rc] = *r.rbegin();
        std::vector<int> quot(universe.size());
        bool divisible = true;
        for (std::size_t i = 0; i < quot.size(); ++i) {
            quot[i] = lead_r[i] - lead_d[i];
            if (quot[i] < 0) { divisible = false; break; }
        }
        if (!divisible) return std::nullopt;
        Rational qc = lead_rc / lead_dc;
        q[quot] += qc;
        // r -= (qc * quot) * d
        for (const auto& [md, cd] : d) {
            std::vector<int> mm(universe.size());
            for (std::size_t i = 0; i < mm.size(); ++i) mm[i] = md[i] + quot[i];
            auto it = r.find(mm);
            Rational delta = qc * cd;
            if (it == r.end()) {
                r.emplace(std::move(mm), -delta);
            } else {
                it->second -= delta;
                if (it->second == 0) r.erase(it);
            }
        }
    }
    Expr out;
    for (const auto& [mv, c] : q) {
        Monomial m;
        for (std::size_t i = 0; i < mv.size(); ++i)
            if (mv[i] > 0) m.emplace_back(universe[i], mv[i]);
        out.add_term(std::move(m), c);
    }
    return out;
}

} // namespace varfield
