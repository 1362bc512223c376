#include "varfield/parser.hpp"

#include "varfield/errors.hpp"
#include "varfield/vector_ops.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <utility>
#include <variant>

namespace varfield {

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind{Kind::End};
    std::string text;
    Rational number;
    int line{1};
    int col{1};
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
        fail_at(tok_, code, msg);
    }

    [[noreturn]] static void fail_at(const Token& t, ErrorCode code, const std::string& msg) {
        std::ostringstream os;
        os << "line " << t.line << ", col " << t.col << ": " << msg;
        throw Error(code, os.str());
    }

private:
    void advance() {
        skip_ws();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text = "<end of input>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                id += take();
            tok_.kind = Token::Kind::Ident;
            tok_.text = std::move(id);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                digits += take();
            std::string frac;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                take();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    frac += take();
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = digits + (frac.empty() ? "" : "." + frac);
            boost::multiprecision::cpp_int num(digits.empty() ? "0" : digits);
            boost::multiprecision::cpp_int den(1);
            for (char d : frac) {
                num = num * 10 + (d - '0');
                den *= 10;
            }
            tok_.number = Rational(num, den);
            return;
        }
        static const std::string punct = "+-*/^()[]{},;=";
        if (punct.find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Punct;
            tok_.text = std::string(1, take());
            return;
        }
        std::ostringstream os;
        os << "unexpected character '" << c << "'";
        fail(ErrorCode::Syntax, os.str());
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') take();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }

    char take() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    const std::string& src_;
    std::size_t pos_{0};
    int line_{1};
    int col_{1};
    Token tok_;
};

// Scalar-or-vector intermediate during elaboration.
struct Value {
    std::variant<Expr, Vec3> v;

    bool is_vec() const { return v.index() == 1; }
    const Expr& scalar(const Token& at) const {
        if (is_vec())
            Lexer::fail_at(at, ErrorCode::ArityMismatch, "expected a scalar expression");
        return std::get<Expr>(v);
    }
    const Vec3& vec(const Token& at) const {
        if (!is_vec())
            Lexer::fail_at(at, ErrorCode::ArityMismatch, "expected a 3-component expression");
        return std::get<Vec3>(v);
    }
};

Value scalar_value(Expr e) { return Value{std::move(e)}; }
Value vector_value(Vec3 v) { return Value{std::move(v)}; }

// Resolves identifiers to atoms; the two DSLs differ only here.
class SymbolResolver {
public:
    virtual ~SymbolResolver() = default;
    virtual std::optional<Value> resolve(const std::string& name,
                                         std::optional<int> index, const Token& at) const = 0;
};

class ExprParser {
public:
    ExprParser(Lexer& lex, const SymbolResolver& symbols) : lex_(lex), symbols_(symbols) {}

    Value parse() { return parse_sum(); }

private:
    bool peek_punct(const std::string& p) const {
        return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
    }

    Token expect_punct(const std::string& p) {
        if (!peek_punct(p))
            lex_.fail(ErrorCode::Syntax, "expected '" + p + "', found '" + lex_.peek().text + "'");
        return lex_.next();
    }

    Value parse_sum() {
        Token at = lex_.peek();
        Value acc = parse_term();
        while (peek_punct("+") || peek_punct("-")) {
            bool plus = lex_.next().text == "+";
            Token rhs_at = lex_.peek();
            Value rhs = parse_term();
            if (acc.is_vec() || rhs.is_vec()) {
                Vec3 a = acc.vec(at), b = rhs.vec(rhs_at);
                acc = vector_value(plus ? a + b : a - b);
            } else {
                acc = scalar_value(plus ? acc.scalar(at) + rhs.scalar(rhs_at)
                                        : acc.scalar(at) - rhs.scalar(rhs_at));
            }
        }
        return acc;
    }

    Value parse_term() {
        Token at = lex_.peek();
        Value acc = parse_factor();
        while (peek_punct("*") || peek_punct("/")) {
            bool mul = lex_.next().text == "*";
            Token rhs_at = lex_.peek();
            Value rhs = parse_factor();
            if (mul) {
                if (acc.is_vec() && rhs.is_vec())
                    Lexer::fail_at(rhs_at, ErrorCode::ArityMismatch,
                                   "use dot() for vector-vector products");
                if (acc.is_vec())
                    acc = vector_value(rhs.scalar(rhs_at) * acc.vec(at));
                else if (rhs.is_vec())
                    acc = vector_value(acc.scalar(at) * rhs.vec(rhs_at));
                else
                    acc = scalar_value(acc.scalar(at) * rhs.scalar(rhs_at));
            } else {
                auto r = rhs.scalar(rhs_at).as_rational();
                if (!r || *r == 0)
                    Lexer::fail_at(rhs_at, ErrorCode::UnsupportedForm,
                                   "division is only defined by nonzero numeric constants");
                if (acc.is_vec()) {
                    Vec3 a = acc.vec(at);
                    acc = vector_value(
                        Vec3{a[0].div_const(*r), a[1].div_const(*r), a[2].div_const(*r)});
                } else {
                    acc = scalar_value(acc.scalar(at).div_const(*r));
                }
            }
        }
        return acc;
    }

    Value parse_factor() {
        if (peek_punct("-")) {
            Token at = lex_.next();
            Value v = parse_factor();
            if (v.is_vec()) return vector_value(-v.vec(at));
            return scalar_value(-v.scalar(at));
        }
        return parse_power();
    }

    Value parse_power() {
        Token at = lex_.peek();
        Value base = parse_primary();
        if (!peek_punct("^")) return base;
        lex_.next();
        bool neg = false;
        if (peek_punct("-")) {
            lex_.next();
            neg = true;
        }
        Token e = lex_.peek();
        if (e.kind != Token::Kind::Number || e.text.find('.') != std::string::npos)
            lex_.fail(ErrorCode::UnsupportedForm, "exponent must be an integer literal");
        lex_.next();
        int exp = static_cast<int>(e.number.convert_to<long long>());
        if (neg) exp = -exp;
        return scalar_value(base.scalar(at).pow(exp));
    }

    Value parse_primary() {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Number) {
            lex_.next();
            return scalar_value(Expr::rational(t.number));
        }
        if (peek_punct("(")) {
            lex_.next();
            Value v = parse_sum();
            expect_punct(")");
            return v;
        }
        if (t.kind != Token::Kind::Ident)
            lex_.fail(ErrorCode::Syntax, "expected an expression, found '" + t.text + "'");
        lex_.next();

        if (peek_punct("(")) return parse_call(t);

        std::optional<int> index;
        if (peek_punct("[")) {
            lex_.next();
            Token i = lex_.peek();
            if (i.kind != Token::Kind::Number)
                lex_.fail(ErrorCode::Syntax, "expected a component index");
            lex_.next();
            index = static_cast<int>(i.number.convert_to<long long>());
            expect_punct("]");
        }
        auto v = symbols_.resolve(t.text, index, t);
        if (!v)
            Lexer::fail_at(t, ErrorCode::UnknownIdentifier,
                           "unknown identifier '" + t.text + "'");
        return *v;
    }

    Value parse_call(const Token& fn) {
        expect_punct("(");
        std::vector<std::pair<Value, Token>> args;
        std::vector<Token> idents; // raw ident args, for d(expr, x1)
        if (!peek_punct(")")) {
            while (true) {
                Token at = lex_.peek();
                args.emplace_back(parse_sum(), at);
                if (peek_punct(",")) {
                    lex_.next();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");

        auto arity = [&](std::size_t n) {
            if (args.size() != n)
                Lexer::fail_at(fn, ErrorCode::ArityMismatch,
                               fn.text + "() takes " + std::to_string(n) + " argument(s)");
        };
        const std::string& name = fn.text;
        if (name == "grad") {
            arity(1);
            return vector_value(grad(args[0].first.scalar(args[0].second)));
        }
        if (name == "div") {
            arity(1);
            return scalar_value(divergence(args[0].first.vec(args[0].second)));
        }
        if (name == "curl") {
            arity(1);
            return vector_value(curl(args[0].first.vec(args[0].second)));
        }
        if (name == "dot") {
            arity(2);
            return scalar_value(
                dot(args[0].first.vec(args[0].second), args[1].first.vec(args[1].second)));
        }
        if (name == "dt") {
            arity(1);
            return apply_derivative(args[0].first, 0);
        }
        if (name == "d") {
            arity(2);
            int coord = coordinate_of(args[1].first, args[1].second);
            return apply_derivative(args[0].first, coord);
        }
        Lexer::fail_at(fn, ErrorCode::UnknownIdentifier, "unknown function '" + name + "'");
    }

    static Value apply_derivative(const Value& v, int coord) {
        if (v.is_vec()) {
            const Vec3& a = std::get<Vec3>(v.v);
            return vector_value(Vec3{total_derivative(a[0], coord),
                                     total_derivative(a[1], coord),
                                     total_derivative(a[2], coord)});
        }
        return scalar_value(total_derivative(std::get<Expr>(v.v), coord));
    }

    // Second argument of d(): must elaborate to a bare coordinate atom.
    static int coordinate_of(const Value& v, const Token& at) {
        if (!v.is_vec()) {
            const Expr& e = std::get<Expr>(v.v);
            if (e.term_count() == 1) {
                const auto& [m, c] = *e.terms().begin();
                if (c == 1 && m.size() == 1 && m[0].second == 1 && m[0].first.is_coordinate())
                    return m[0].first.coord_index();
            }
        }
        Lexer::fail_at(at, ErrorCode::Syntax, "expected a coordinate (t, x1, x2, x3)");
    }

    Lexer& lex_;
    const SymbolResolver& symbols_;
};

// ---------------------------------------------------------------------------
// Lagrangian files

class LagSymbols : public SymbolResolver {
public:
    explicit LagSymbols(const LagrangianDef& def) : def_(def) {}

    std::optional<Value> resolve(const std::string& name, std::optional<int> index,
                                 const Token& at) const override {
        if (!index) {
            if (name == "t") return scalar_value(Expr::atom(Atom::time()));
            if (name == "x1") return scalar_value(Expr::atom(Atom::space(1)));
            if (name == "x2") return scalar_value(Expr::atom(Atom::space(2)));
            if (name == "x3") return scalar_value(Expr::atom(Atom::space(3)));
            if (def_.constants.is_declared(name))
                return scalar_value(Expr::atom(Atom::constant(name)));
        }
        const FieldDecl* f = def_.find_field(name);
        if (!f) return std::nullopt;
        if (index) {
            if (f->ncomp == 1)
                Lexer::fail_at(at, ErrorCode::ArityMismatch,
                               "scalar field '" + name + "' cannot be indexed");
            if (*index < 1 || *index > 3)
                Lexer::fail_at(at, ErrorCode::ArityMismatch,
                               "component index out of range for '" + name + "'");
            return scalar_value(Expr::atom(Atom::field(name, *index)));
        }
        if (f->ncomp == 1) return scalar_value(Expr::atom(Atom::field(name, 0)));
        return vector_value(Vec3{Expr::atom(Atom::field(name, 1)),
                                 Expr::atom(Atom::field(name, 2)),
                                 Expr::atom(Atom::field(name, 3))});
    }

private:
    const LagrangianDef& def_;
};

} // namespace

LagrangianDef parse_lagrangian(const std::string& src) {
    Lexer lex(src);
    LagrangianDef def;

    bool saw_density = false;
    while (lex.peek().kind != Token::Kind::End) {
        Token t = lex.peek();
        if (t.kind != Token::Kind::Ident)
            lex.fail(ErrorCode::Syntax, "expected a declaration, found '" + t.text + "'");

        if (t.text == "field" || t.text == "source") {
            lex.next();
            bool is_source = t.text == "source";
            Token name = lex.next();
            if (name.kind != Token::Kind::Ident)
                Lexer::fail_at(name, ErrorCode::Syntax, "expected a field name");
            if (def.find_field(name.text) || def.constants.value(name.text).has_value())
                Lexer::fail_at(name, ErrorCode::Syntax, "duplicate name '" + name.text + "'");
            Token open = lex.next();
            if (open.text != "[")
                Lexer::fail_at(open, ErrorCode::Syntax, "expected '[' after field name");
            Token n = lex.next();
            if (n.kind != Token::Kind::Number || (n.number != 1 && n.number != 3))
                Lexer::fail_at(n, ErrorCode::Syntax, "field component count must be 1 or 3");
            Token close = lex.next();
            if (close.text != "]")
                Lexer::fail_at(close, ErrorCode::Syntax, "expected ']'");
            def.fields.push_back(
                {name.text, static_cast<int>(n.number.convert_to<long long>()), is_source});
        } else if (t.text == "const") {
            lex.next();
            Token name = lex.next();
            if (name.kind != Token::Kind::Ident)
                Lexer::fail_at(name, ErrorCode::Syntax, "expected a constant name");
            std::optional<Rational> value;
            if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == "=") {
                lex.next();
                bool neg = false;
                if (lex.peek().text == "-") {
                    lex.next();
                    neg = true;
                }
                Token v = lex.next();
                if (v.kind != Token::Kind::Number)
                    Lexer::fail_at(v, ErrorCode::Syntax, "expected a numeric constant value");
                value = neg ? -v.number : v.number;
            }
            def.constants.declare(name.text, value);
        } else if (t.text == "L") {
            lex.next();
            Token eq = lex.next();
            if (eq.text != "=")
                Lexer::fail_at(eq, ErrorCode::Syntax, "expected '=' after L");
            LagSymbols symbols(def);
            ExprParser parser(lex, symbols);
            Token at = lex.peek();
            Value density = parser.parse();
            def.density = density.scalar(at);
            saw_density = true;
            if (lex.peek().text == ";") lex.next();
            if (lex.peek().kind != Token::Kind::End)
                lex.fail(ErrorCode::Syntax, "unexpected input after the density");
            break;
        } else {
            lex.fail(ErrorCode::Syntax, "unexpected '" + t.text + "'");
        }
        Token semi = lex.next();
        if (semi.text != ";")
            Lexer::fail_at(semi, ErrorCode::Syntax, "expected ';' after declaration");
    }
    if (!saw_density)
        throw Error(ErrorCode::Syntax, "missing density definition 'L = ...'");
    def.validate();
    return def;
}

// ---------------------------------------------------------------------------
// Transform files

namespace {

// Coordinate lines admit only xb1..xb3; field lines only barred field atoms.
// In the inverse block the spellings swap: targets are barred, right-hand
// sides unbarred.
class MapSymbols : public SymbolResolver {
public:
    MapSymbols(bool coordinate_context, bool inverse)
        : coordinate_(coordinate_context), inverse_(inverse) {}

    std::optional<Value> resolve(const std::string& name, std::optional<int> index,
                                 const Token& at) const override {
        bool is_barred_coord =
            name.size() == 3 && name[0] == 'x' && name[1] == 'b' && name[2] >= '1' && name[2] <= '3';
        bool is_plain_coord =
            name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3';
        if (coordinate_) {
            bool admitted = inverse_ ? is_plain_coord : is_barred_coord;
            if (admitted && !index)
                return scalar_value(Expr::atom(Atom::space(name.back() - '0')));
            Lexer::fail_at(at, ErrorCode::MixedMap,
                           std::string("coordinate maps may reference only ") +
                               (inverse_ ? "x1..x3" : "xb1..xb3") + ", found '" + name + "'");
        }
        if (is_barred_coord || is_plain_coord || name == "t")
            Lexer::fail_at(at, ErrorCode::MixedMap,
                           "field maps are pointwise and may not reference coordinates");
        if (index) {
            if (*index < 1 || *index > 3)
                Lexer::fail_at(at, ErrorCode::ArityMismatch, "component index out of range");
            return scalar_value(Expr::atom(Atom::field(name, *index)));
        }
        return scalar_value(Expr::atom(Atom::field(name, 0)));
    }

private:
    bool coordinate_;
    bool inverse_;
};

struct MapBlock {
    std::array<std::optional<Expr>, 3> coords;
    std::map<std::string, std::map<int, Expr>> fields; // comp index (0 scalar) -> expr
};

// Parses assignments until end of input, a closing '}' (braced blocks), or
// the `inverse` keyword (top level).
MapBlock parse_map_block(Lexer& lex, bool braced) {
    MapBlock block;
    while (true) {
        if (lex.peek().kind == Token::Kind::End) {
            if (braced) lex.fail(ErrorCode::Syntax, "unterminated inverse block");
            break;
        }
        if (braced && lex.peek().text == "}") break;
        if (!braced && lex.peek().kind == Token::Kind::Ident && lex.peek().text == "inverse")
            break;

        Token lhs = lex.next();
        if (lhs.kind != Token::Kind::Ident)
            Lexer::fail_at(lhs, ErrorCode::Syntax, "expected an assignment target");
        std::optional<int> index;
        if (lex.peek().text == "[") {
            lex.next();
            Token i = lex.next();
            if (i.kind != Token::Kind::Number)
                Lexer::fail_at(i, ErrorCode::Syntax, "expected a component index");
            index = static_cast<int>(i.number.convert_to<long long>());
            if (*index < 1 || *index > 3)
                Lexer::fail_at(i, ErrorCode::ArityMismatch, "component index out of range");
            Token close = lex.next();
            if (close.text != "]") Lexer::fail_at(close, ErrorCode::Syntax, "expected ']'");
        }
        Token eq = lex.next();
        if (eq.text != "=") Lexer::fail_at(eq, ErrorCode::Syntax, "expected '='");

        // The braced block is the declared inverse, whose targets are barred.
        bool coord_target =
            braced ? (!index && lhs.text.size() == 3 && lhs.text[0] == 'x' &&
                      lhs.text[1] == 'b' && lhs.text[2] >= '1' && lhs.text[2] <= '3')
                   : (!index && lhs.text.size() == 2 && lhs.text[0] == 'x' &&
                      lhs.text[1] >= '1' && lhs.text[1] <= '3');
        MapSymbols symbols(coord_target, braced);
        ExprParser parser(lex, symbols);
        Token at = lex.peek();
        Expr rhs = parser.parse().scalar(at);

        if (coord_target) {
            int axis = lhs.text.back() - '0';
            if (block.coords[axis - 1])
                Lexer::fail_at(lhs, ErrorCode::Syntax, "duplicate assignment to " + lhs.text);
            block.coords[axis - 1] = std::move(rhs);
        } else {
            int comp = index.value_or(0);
            auto& comps = block.fields[lhs.text];
            if (comps.count(comp))
                Lexer::fail_at(lhs, ErrorCode::Syntax,
                               "duplicate assignment to field '" + lhs.text + "'");
            comps.emplace(comp, std::move(rhs));
        }
        if (lex.peek().text == ";") lex.next();
    }
    for (int i = 0; i < 3; ++i)
        if (!block.coords[i])
            throw Error(ErrorCode::MissingComponent,
                        "coordinate map is missing x" + std::to_string(i + 1));
    for (const auto& [name, comps] : block.fields) {
        bool scalar = comps.count(0) != 0;
        if (scalar && comps.size() != 1)
            throw Error(ErrorCode::MissingComponent,
                        "field '" + name + "' mixes scalar and component assignments");
        if (!scalar && comps.size() != 3)
            throw Error(ErrorCode::MissingComponent,
                        "field '" + name + "' is missing components");
    }
    return block;
}

std::map<std::string, std::vector<Expr>> flatten_fields(MapBlock& block) {
    std::map<std::string, std::vector<Expr>> out;
    for (auto& [name, comps] : block.fields) {
        std::vector<Expr> v;
        if (comps.count(0)) {
            v.push_back(std::move(comps.at(0)));
        } else {
            for (int k = 1; k <= 3; ++k) v.push_back(std::move(comps.at(k)));
        }
        out.emplace(name, std::move(v));
    }
    return out;
}

} // namespace

TransformDef parse_transform(const std::string& src) {
    Lexer lex(src);
    TransformDef def;

    MapBlock main_block = parse_map_block(lex, false);
    for (int i = 0; i < 3; ++i) def.coord_map[i] = std::move(*main_block.coords[i]);
    def.field_map = flatten_fields(main_block);

    if (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "inverse") {
        lex.next();
        Token open = lex.next();
        if (open.text != "{")
            Lexer::fail_at(open, ErrorCode::Syntax, "expected '{' after inverse");
        MapBlock inv_block = parse_map_block(lex, true);
        Token close = lex.next();
        if (close.text != "}")
            Lexer::fail_at(close, ErrorCode::Syntax, "expected '}'");
        TransformDef::Inverse inv;
        for (int i = 0; i < 3; ++i) inv.coord_map[i] = std::move(*inv_block.coords[i]);
        inv.field_map = flatten_fields(inv_block);
        def.declared_inverse = std::move(inv);
    }
    if (lex.peek().kind != Token::Kind::End)
        lex.fail(ErrorCode::Syntax, "unexpected input after transform definition");
    return def;
}

std::string barred_name(const std::string& name) { return name + "b"; }

std::string render_lagrangian(const LagrangianDef& def) {
    std::ostringstream os;
    for (const auto& f : def.fields)
        os << (f.is_source ? "source " : "field ") << f.name << "[" << f.ncomp << "];\n";
    for (const auto& name : def.constants.names()) {
        if (name == "mu0") continue; // built-in derived constant
        auto v = def.constants.value(name);
        if (!v && (name == "eps0" || name == "c")) {
            // Built-ins without values are implicit; only emit when used.
            bool used = false;
            for (const Atom& a : atoms_of(def.density))
                if (a.kind == AtomKind::Constant && a.name == name) used = true;
            if (!used) continue;
        }
        os << "const " << name;
        if (v) os << " = " << v->str();
        os << ";\n";
    }
    os << "L = ";
    if (def.density.is_zero()) {
        os << "0";
    } else {
        bool first = true;
        for (const auto& [m, c] : def.density.terms()) {
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
                auto num = boost::multiprecision::numerator(coeff);
                auto den = boost::multiprecision::denominator(coeff);
                os << num.str();
                if (den != 1) os << "/" << den.str();
                need_star = true;
            }
            for (const auto& [a, p] : m) {
                if (need_star) os << "*";
                need_star = true;
                switch (a.kind) {
                case AtomKind::Constant:
                    os << a.name;
                    break;
                case AtomKind::Time:
                    os << "t";
                    break;
                case AtomKind::Space:
                    os << "x" << a.comp;
                    break;
                case AtomKind::Field:
                    os << a.name;
                    if (a.comp > 0) os << "[" << a.comp << "]";
                    break;
                case AtomKind::Deriv: {
                    if (a.deriv_order() != 1)
                        throw Error(ErrorCode::UnsupportedForm,
                                    "cannot render derivative of order > 1 in DSL form");
                    std::string ref = a.name;
                    if (a.comp > 0) ref += "[" + std::to_string(a.comp) + "]";
                    if (a.multi[0] == 1)
                        os << "dt(" << ref << ")";
                    else
                        for (int i = 1; i <= 3; ++i)
                            if (a.multi[i] == 1) os << "d(" << ref << ", x" << i << ")";
                    break;
                }
                }
                if (p > 1) os << "^" << p;
            }
        }
    }
    os << ";\n";
    return os.str();
}

} // namespace varfield
