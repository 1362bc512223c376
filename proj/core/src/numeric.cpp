#include "varfield/numeric.hpp"

#include "varfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace varfield {

void GridSpec::validate() const {
    if (n_t < 5 || n_x < 5)
        throw Error(ErrorCode::GridTooCoarse, "grids need at least 5 nodes per axis");
    if (!(t2 > t1)) throw Error(ErrorCode::GridTooCoarse, "empty time range");
    for (const auto& [a, b] : box)
        if (!(b > a)) throw Error(ErrorCode::GridTooCoarse, "empty box range");
}

double GridSpec::spacing(int coord) const {
    if (coord == 0) return (t2 - t1) / (n_t - 1);
    return (box[coord - 1][1] - box[coord - 1][0]) / (n_x - 1);
}

double GridSpec::node(int coord, int idx) const {
    if (coord == 0) return t1 + spacing(0) * idx;
    return box[coord - 1][0] + spacing(coord) * idx;
}

GridSpec GridSpec::refined() const {
    GridSpec g = *this;
    g.n_t = 2 * n_t - 1;
    g.n_x = 2 * n_x - 1;
    return g;
}

// ---------------------------------------------------------------------------

AnalyticField::AnalyticField(std::string name, std::vector<Expr> components,
                             ConstantTable constants)
    : name_(std::move(name)), components_(std::move(components)),
      constants_(std::move(constants)) {
    if (components_.size() != 1 && components_.size() != 3)
        throw Error(ErrorCode::ArityMismatch, "analytic fields have 1 or 3 components");
    comp_base_ = components_.size() == 1 ? 0 : 1;
    for (const auto& c : components_) {
        for (const Atom& a : atoms_of(c))
            if (!a.is_coordinate() && a.kind != AtomKind::Constant)
                throw Error(ErrorCode::UnsupportedForm,
                            "analytic field components must be expressions in the coordinates");
        std::array<Expr, kCoordCount> d;
        for (int coord = 0; coord < kCoordCount; ++coord)
            d[coord] = total_derivative(c, coord);
        derivs_.push_back(std::move(d));
    }
    for (std::size_t i = 0; i < components_.size(); ++i) {
        compiled_.push_back(compile(components_[i]));
        std::array<CompiledPoly, kCoordCount> cd;
        for (int coord = 0; coord < kCoordCount; ++coord)
            cd[coord] = compile(derivs_[i][coord]);
        compiled_derivs_.push_back(std::move(cd));
    }
}

AnalyticField::CompiledPoly AnalyticField::compile(const Expr& e) const {
    CompiledPoly p;
    for (const auto& [m, c] : e.terms()) {
        double coeff = to_double(c);
        std::array<int, kCoordCount> exps{0, 0, 0, 0};
        for (const auto& [a, pw] : m) {
            if (a.kind == AtomKind::Constant) {
                auto v = constants_.numeric(a.name);
                if (!v)
                    throw Error(ErrorCode::MissingBinding,
                                "unbound constant '" + a.name + "' in analytic field");
                for (int k = 0; k < pw; ++k) coeff *= *v;
            } else {
                exps[a.coord_index()] += pw;
            }
        }
        p.coeffs.push_back(coeff);
        p.exps.push_back(exps);
    }
    return p;
}

double AnalyticField::CompiledPoly::eval(double t, const std::array<double, 3>& x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        double v = coeffs[i];
        const auto& e = exps[i];
        for (int k = 0; k < e[0]; ++k) v *= t;
        for (int c = 1; c < kCoordCount; ++c)
            for (int k = 0; k < e[c]; ++k) v *= x[c - 1];
        sum += v;
    }
    return sum;
}

std::vector<int> AnalyticField::comp_indices() const {
    if (components_.size() == 1) return {0};
    return {1, 2, 3};
}

const Expr& AnalyticField::component(int comp) const {
    return components_.at(static_cast<std::size_t>(comp - comp_base_));
}

const Expr& AnalyticField::first_derivative(int comp, int coord) const {
    return derivs_.at(static_cast<std::size_t>(comp - comp_base_)).at(coord);
}

double AnalyticField::value(int comp, double t, const std::array<double, 3>& x) const {
    return compiled_.at(static_cast<std::size_t>(comp - comp_base_)).eval(t, x);
}

double AnalyticField::d1(int comp, int coord, double t, const std::array<double, 3>& x) const {
    return compiled_derivs_.at(static_cast<std::size_t>(comp - comp_base_)).at(coord).eval(t, x);
}

AnalyticField AnalyticField::axpy(const Rational& eps, const AnalyticField& other) const {
    if (other.ncomp() != ncomp())
        throw Error(ErrorCode::ArityMismatch, "component count mismatch in axpy");
    std::vector<Expr> comps;
    Expr scale = Expr::rational(eps);
    for (std::size_t i = 0; i < components_.size(); ++i)
        comps.push_back(components_[i] + scale * other.components_[i]);
    return AnalyticField(name_, std::move(comps), constants_);
}

double AnalyticField::max_abs_on_grid(const GridSpec& g) const {
    double m = 0.0;
    for (const auto& comp_values : samples(g).value)
        for (double v : comp_values) m = std::max(m, std::abs(v));
    return m;
}

const AnalyticField::GridSamples& AnalyticField::samples(const GridSpec& g) const {
    if (samples_grid_ && *samples_grid_ == g) return samples_;
    const long nn = static_cast<long>(g.n_t) * g.n_x * g.n_x * g.n_x;
    GridSamples s;
    s.value.resize(components_.size());
    s.d1.resize(components_.size());
    for (std::size_t ci = 0; ci < components_.size(); ++ci) {
        s.value[ci].resize(nn);
        for (int coord = 0; coord < kCoordCount; ++coord) s.d1[ci][coord].resize(nn);
        long idx = 0;
        for (int it = 0; it < g.n_t; ++it) {
            double t = g.node(0, it);
            for (int i1 = 0; i1 < g.n_x; ++i1)
                for (int i2 = 0; i2 < g.n_x; ++i2)
                    for (int i3 = 0; i3 < g.n_x; ++i3, ++idx) {
                        std::array<double, 3> x{g.node(1, i1), g.node(2, i2), g.node(3, i3)};
                        s.value[ci][idx] = compiled_[ci].eval(t, x);
                        for (int coord = 0; coord < kCoordCount; ++coord)
                            s.d1[ci][coord][idx] = compiled_derivs_[ci][coord].eval(t, x);
                    }
        }
    }
    samples_grid_ = g;
    samples_ = std::move(s);
    return samples_;
}

namespace {

// Portable small-integer draws; uniform_int_distribution is not
// reproducible across standard libraries.
int draw(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Expr coordinate_monomials_poly(std::mt19937_64& rng, int max_total_degree,
                               bool force_constant) {
    // Monomial basis t^a x1^b x2^c x3^d with a+b+c+d <= max_total_degree.
    Expr out;
    std::array<Atom, 4> coords{Atom::time(), Atom::space(1), Atom::space(2), Atom::space(3)};
    for (int a = 0; a <= max_total_degree; ++a)
        for (int b = 0; a + b <= max_total_degree; ++b)
            for (int c = 0; a + b + c <= max_total_degree; ++c)
                for (int d = 0; a + b + c + d <= max_total_degree; ++d) {
                    int coeff = draw(rng, -2, 2);
                    if (force_constant && a == 0 && b == 0 && c == 0 && d == 0 && coeff == 0)
                        coeff = 1;
                    if (coeff == 0) continue;
                    Expr term = Expr::integer(coeff);
                    std::array<int, 4> exps{a, b, c, d};
                    for (int k = 0; k < 4; ++k)
                        if (exps[k] > 0) term *= Expr::atom(coords[k]).pow(exps[k]);
                    out += term;
                }
    return out;
}

} // namespace

AnalyticField make_variation(const std::string& name, int ncomp, const GridSpec& g,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Expr t = Expr::atom(Atom::time());
    Expr bubble = (t - Expr::rational(dyadic_from_double(g.t1))) *
                  (Expr::rational(dyadic_from_double(g.t2)) - t);
    for (int i = 1; i <= 3; ++i) {
        Expr xi = Expr::atom(Atom::space(i));
        bubble *= (xi - Expr::rational(dyadic_from_double(g.box[i - 1][0]))) *
                  (Expr::rational(dyadic_from_double(g.box[i - 1][1])) - xi);
    }
    std::vector<Expr> comps;
    for (int k = 0; k < ncomp; ++k)
        comps.push_back(bubble * coordinate_monomials_poly(rng, 1, true));
    return AnalyticField(name, std::move(comps));
}

AnalyticField make_trial_field(const std::string& name, int ncomp, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Expr> comps;
    for (int k = 0; k < ncomp; ++k)
        comps.push_back(coordinate_monomials_poly(rng, 3, true));
    return AnalyticField(name, std::move(comps));
}

// ---------------------------------------------------------------------------

namespace {

// Flattened evaluator for repeated per-node evaluation: atoms resolved to
// slots once, coefficients folded to doubles once.
class CompiledExpr {
public:
    CompiledExpr(const Expr& e, const FieldSet& fields, const ConstantTable& constants,
                 const GridSpec& g) {
        std::vector<Atom> atoms = atoms_of(e);
        std::map<Atom, int> index;
        for (const Atom& a : atoms) {
            Slot s;
            s.atom = a;
            switch (a.kind) {
            case AtomKind::Time:
                s.kind = Kind::Time;
                break;
            case AtomKind::Space:
                s.kind = Kind::Space;
                s.coord = a.comp;
                break;
            case AtomKind::Constant: {
                auto v = constants.numeric(a.name);
                if (!v)
                    throw Error(ErrorCode::MissingBinding,
                                "unbound constant '" + a.name + "'");
                s.kind = Kind::Const;
                s.value = *v;
                break;
            }
            case AtomKind::Field:
            case AtomKind::Deriv: {
                auto it = fields.find(a.name);
                if (it == fields.end())
                    throw Error(ErrorCode::MissingBinding,
                                "no field values for '" + a.name + "'");
                s.field = &it->second;
                s.comp = a.comp;
                if (a.kind == AtomKind::Field) {
                    s.kind = Kind::Field;
                } else if (a.deriv_order() == 1) {
                    s.kind = Kind::D1;
                    for (int c = 0; c < kCoordCount; ++c)
                        if (a.multi[c] == 1) s.coord = c;
                } else if (a.deriv_order() == 2) {
                    // Central difference of the exact first derivative along
                    // the highest involved coordinate.
                    s.kind = Kind::D2;
                    for (int c = 0; c < kCoordCount; ++c)
                        if (a.multi[c] > 0) s.coord = c;
                    std::array<int, kCoordCount> rest = a.multi;
                    rest[s.coord]--;
                    for (int c = 0; c < kCoordCount; ++c)
                        if (rest[c] > 0) s.inner = c;
                    s.value = g.spacing(s.coord); // step size
                } else {
                    throw Error(ErrorCode::UnsupportedForm,
                                "grid evaluation supports derivative order <= 2, got " +
                                    a.str());
                }
                break;
            }
            }
            index.emplace(a, static_cast<int>(slots_.size()));
            slots_.push_back(std::move(s));
        }
        for (const auto& [m, c] : e.terms()) {
            Term t;
            t.coeff = to_double(c);
            for (const auto& [a, p] : m) t.factors.emplace_back(index.at(a), p);
            terms_.push_back(std::move(t));
        }
    }

    double eval(double t, const std::array<double, 3>& x) const {
        scratch_.resize(slots_.size());
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            const Slot& s = slots_[i];
            switch (s.kind) {
            case Kind::Time:
                scratch_[i] = t;
                break;
            case Kind::Space:
                scratch_[i] = x[s.coord - 1];
                break;
            case Kind::Const:
                scratch_[i] = s.value;
                break;
            case Kind::Field:
                scratch_[i] = s.field->value(s.comp, t, x);
                break;
            case Kind::D1:
                scratch_[i] = s.field->d1(s.comp, s.coord, t, x);
                break;
            case Kind::D2: {
                double h = s.value;
                double tp = t, tm = t;
                std::array<double, 3> xp = x, xm = x;
                if (s.coord == 0) {
                    tp += h;
                    tm -= h;
                } else {
                    xp[s.coord - 1] += h;
                    xm[s.coord - 1] -= h;
                }
                scratch_[i] = (s.field->d1(s.comp, s.inner, tp, xp) -
                               s.field->d1(s.comp, s.inner, tm, xm)) /
                              (2.0 * h);
                break;
            }
            }
        }
        return sum_terms();
    }

    // Array-backed fast path: field slots read precomputed node samples,
    // optionally perturbed by scale * variation at the same node.  The
    // central-difference neighbors of D2 slots land on adjacent grid nodes
    // because the step equals the grid spacing.
    void bind(const GridSpec& g, const FieldSet* variation) {
        strides_ = {static_cast<long>(g.n_x) * g.n_x * g.n_x,
                    static_cast<long>(g.n_x) * g.n_x, g.n_x, 1};
        bindings_.assign(slots_.size(), Binding{});
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            const Slot& s = slots_[i];
            if (s.kind != Kind::Field && s.kind != Kind::D1 && s.kind != Kind::D2) continue;
            Binding& b = bindings_[i];
            int ci = s.comp - (s.field->ncomp() == 1 ? 0 : 1);
            const auto& bs = s.field->samples(g);
            const AnalyticField::GridSamples* ps = nullptr;
            if (variation) {
                auto it = variation->find(s.atom.name);
                if (it != variation->end()) ps = &it->second.samples(g);
            }
            if (s.kind == Kind::Field) {
                b.base = bs.value[ci].data();
                if (ps) b.pert = ps->value[ci].data();
            } else {
                int coord = s.kind == Kind::D1 ? s.coord : s.inner;
                b.base = bs.d1[ci][coord].data();
                if (ps) b.pert = ps->d1[ci][coord].data();
            }
        }
    }

    double eval_at(long idx, double t, const std::array<double, 3>& x, double scale) const {
        scratch_.resize(slots_.size());
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            const Slot& s = slots_[i];
            const Binding& b = bindings_[i];
            switch (s.kind) {
            case Kind::Time:
                scratch_[i] = t;
                break;
            case Kind::Space:
                scratch_[i] = x[s.coord - 1];
                break;
            case Kind::Const:
                scratch_[i] = s.value;
                break;
            case Kind::Field:
            case Kind::D1:
                scratch_[i] = b.base[idx] + (b.pert ? scale * b.pert[idx] : 0.0);
                break;
            case Kind::D2: {
                long st = strides_[s.coord];
                double p = b.base[idx + st] + (b.pert ? scale * b.pert[idx + st] : 0.0);
                double m = b.base[idx - st] + (b.pert ? scale * b.pert[idx - st] : 0.0);
                scratch_[i] = (p - m) / (2.0 * s.value);
                break;
            }
            }
        }
        return sum_terms();
    }

private:
    double sum_terms() const {
        double sum = 0.0;
        for (const Term& term : terms_) {
            double v = term.coeff;
            for (const auto& [slot, p] : term.factors) {
                double a = scratch_[slot];
                for (int k = 0; k < p; ++k) v *= a;
            }
            sum += v;
        }
        return sum;
    }

    enum class Kind { Time, Space, Const, Field, D1, D2 };
    struct Slot {
        Atom atom;
        Kind kind{Kind::Time};
        const AnalyticField* field{nullptr};
        int comp{0};
        int coord{0};
        int inner{0};
        double value{0.0};
    };
    struct Term {
        double coeff{0.0};
        std::vector<std::pair<int, int>> factors;
    };
    struct Binding {
        const double* base{nullptr};
        const double* pert{nullptr};
    };
    std::vector<Slot> slots_;
    std::vector<Term> terms_;
    std::vector<Binding> bindings_;
    std::array<long, kCoordCount> strides_{0, 0, 0, 0};
    mutable std::vector<double> scratch_;
};

} // namespace

double evaluate_on_grid(const Expr& e, const GridSpec& g, const FieldSet& fields,
                        const ConstantTable& constants, double t,
                        const std::array<double, 3>& x) {
    return CompiledExpr(e, fields, constants, g).eval(t, x);
}

namespace {

double trapezoid_weight(int idx, int n) { return (idx == 0 || idx == n - 1) ? 0.5 : 1.0; }

template <typename NodeFn>
double quadrature(const GridSpec& g, NodeFn&& fn) {
    double cell = g.spacing(0) * g.spacing(1) * g.spacing(2) * g.spacing(3);
    double sum = 0.0;
    for (int it = 0; it < g.n_t; ++it) {
        double wt = trapezoid_weight(it, g.n_t);
        double t = g.node(0, it);
        for (int i1 = 0; i1 < g.n_x; ++i1) {
            double w1 = wt * trapezoid_weight(i1, g.n_x);
            for (int i2 = 0; i2 < g.n_x; ++i2) {
                double w2 = w1 * trapezoid_weight(i2, g.n_x);
                for (int i3 = 0; i3 < g.n_x; ++i3) {
                    double w = w2 * trapezoid_weight(i3, g.n_x);
                    sum += w * fn(it, i1, i2, i3, t,
                                  std::array<double, 3>{g.node(1, i1), g.node(2, i2),
                                                        g.node(3, i3)});
                }
            }
        }
    }
    return sum * cell;
}

long node_index(const GridSpec& g, int it, int i1, int i2, int i3) {
    return ((static_cast<long>(it) * g.n_x + i1) * g.n_x + i2) * g.n_x + i3;
}

} // namespace

double action(const LagrangianDef& L, const GridSpec& g, const FieldSet& fields) {
    g.validate();
    CompiledExpr density(L.density, fields, L.constants, g);
    density.bind(g, nullptr);
    return quadrature(g, [&](int it, int i1, int i2, int i3, double t,
                             const std::array<double, 3>& x) {
        return density.eval_at(node_index(g, it, i1, i2, i3), t, x, 0.0);
    });
}

double default_variation_eps(const GridSpec& g, const FieldSet& fields) {
    double m = 0.0;
    for (const auto& [name, f] : fields) m = std::max(m, f.max_abs_on_grid(g));
    return 1e-5 * (1.0 + m);
}

double delta_s_direct(const LagrangianDef& L, const GridSpec& g, const FieldSet& fields,
                      const FieldSet& variation, double eps) {
    if (eps <= 0) throw Error(ErrorCode::UnsupportedForm, "eps must be positive");
    g.validate();
    // Snap eps to a dyadic rational so psi +/- eps*dpsi are exact mirror
    // perturbations.
    double eps_exact = to_double(dyadic_from_double(eps));
    for (const auto& f : L.fields)
        if (!f.is_source && !variation.count(f.name))
            throw Error(ErrorCode::MissingBinding, "no variation for field '" + f.name + "'");
    CompiledExpr density(L.density, fields, L.constants, g);
    density.bind(g, &variation);
    auto sweep = [&](double scale) {
        return quadrature(g, [&](int it, int i1, int i2, int i3, double t,
                                 const std::array<double, 3>& x) {
            return density.eval_at(node_index(g, it, i1, i2, i3), t, x, scale);
        });
    };
    return (sweep(eps_exact) - sweep(-eps_exact)) / (2.0 * eps_exact);
}

double delta_s_by_parts(const LagrangianDef& L, const GridSpec& g, const FieldSet& fields,
                        const FieldSet& variation) {
    g.validate();
    std::vector<Equation> eqs = derive_all(L);
    double total = 0.0;
    for (const Equation& eq : eqs) {
        const AnalyticField& dpsi = variation.at(eq.field);
        const auto& dvals = dpsi.samples(g).value.at(
            static_cast<std::size_t>(eq.comp - (dpsi.ncomp() == 1 ? 0 : 1)));
        CompiledExpr lhs(eq.lhs, fields, L.constants, g);
        lhs.bind(g, nullptr);
        total += quadrature(g, [&](int it, int i1, int i2, int i3, double t,
                                   const std::array<double, 3>& x) {
            // The variation vanishes on the boundary; skipping those nodes
            // also keeps the central differences inside the grid.
            if (it == 0 || it == g.n_t - 1 || i1 == 0 || i1 == g.n_x - 1 || i2 == 0 ||
                i2 == g.n_x - 1 || i3 == 0 || i3 == g.n_x - 1)
                return 0.0;
            long idx = node_index(g, it, i1, i2, i3);
            return lhs.eval_at(idx, t, x, 0.0) * dvals[idx];
        });
    }
    return total;
}

double residual_norm(const Equation& eq, const GridSpec& g, const FieldSet& fields,
                     const ConstantTable& constants) {
    g.validate();
    CompiledExpr lhs(eq.lhs, fields, constants, g);
    lhs.bind(g, nullptr);
    double sum = 0.0;
    long count = 0;
    for (int it = 1; it < g.n_t - 1; ++it)
        for (int i1 = 1; i1 < g.n_x - 1; ++i1)
            for (int i2 = 1; i2 < g.n_x - 1; ++i2)
                for (int i3 = 1; i3 < g.n_x - 1; ++i3) {
                    double r = lhs.eval_at(node_index(g, it, i1, i2, i3), g.node(0, it),
                                           {g.node(1, i1), g.node(2, i2), g.node(3, i3)},
                                           0.0);
                    sum += r * r;
                    ++count;
                }
    return std::sqrt(sum / static_cast<double>(count));
}

double estimate_order(const std::vector<double>& hs, const std::vector<double>& errs) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < hs.size() && i < errs.size(); ++i) {
        if (errs[i] > 0.0 && hs[i] > 0.0) {
            xs.push_back(std::log(hs[i]));
            ys.push_back(std::log(errs[i]));
        }
    }
    if (xs.size() < 2) return 0.0;
    double xm = 0, ym = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= static_cast<double>(xs.size());
    ym /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - xm) * (ys[i] - ym);
        den += (xs[i] - xm) * (xs[i] - xm);
    }
    return den == 0 ? 0.0 : num / den;
}

std::string to_csv(const RefinementStudy& s) {
    std::ostringstream os;
    os.precision(12);
    os << "h,value,error,estimated_order\n";
    for (const auto& row : s.rows)
        os << row.h << "," << row.value << "," << row.error << "," << s.estimated_order
           << "\n";
    return os.str();
}

} // namespace varfield
