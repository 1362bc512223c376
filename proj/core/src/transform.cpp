#include "varfield/transform.hpp"

#include "varfield/errors.hpp"

#include <cmath>

namespace varfield {

namespace {

// Placeholder for 1/det while clearing denominators; resolved before any
// expression leaves this module.
const Atom kDetInv = Atom::constant("__detinv");

} // namespace

bool JacobianMatrix::is_constant() const {
    for (const auto& row : entries)
        for (const auto& e : row)
            if (!e.as_rational()) return false;
    return true;
}

std::optional<Rational> JacobianMatrix::constant_det() const { return det.as_rational(); }

JacobianMatrix jacobian(const TransformDef& T) {
    JacobianMatrix J;
    for (int i = 0; i < 3; ++i) {
        for (const Atom& a : atoms_of(T.coord_map[i]))
            if (!a.is_coordinate() || a.kind == AtomKind::Time)
                throw Error(ErrorCode::MixedMap,
                            "coordinate map may depend only on spatial coordinates");
        for (int k = 0; k < 3; ++k)
            J.entries[i][k] = total_derivative(T.coord_map[i], k + 1);
    }
    auto minor = [&](int i, int k) {
        int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
        int c0 = (k + 1) % 3, c1 = (k + 2) % 3;
        // Rows/cols in cyclic order keep the cofactor sign baked in.
        return J.entries[r0][c0] * J.entries[r1][c1] - J.entries[r0][c1] * J.entries[r1][c0];
    };
    J.det = Expr{};
    for (int k = 0; k < 3; ++k) J.det += J.entries[0][k] * minor(0, k);
    if (J.det.is_zero())
        throw Error(ErrorCode::SingularMap, "coordinate map has zero Jacobian determinant");
    // adj_{ki} = cofactor C_{ik}
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) J.adjugate[k][i] = minor(i, k);
    return J;
}

TransformedLagrangian transform_lagrangian(const LagrangianDef& L, const TransformDef& T) {
    L.validate();
    JacobianMatrix J = jacobian(T);
    auto const_det = J.constant_det();

    DetSign sign = DetSign::positive;
    if (const_det && *const_det < 0) sign = DetSign::negative;

    // J^{-1}_{ki} = adj_{ki}/det; with constant det the division folds away,
    // otherwise a detinv marker is cleared after substitution.
    auto inv_entry = [&](int k, int i) {
        if (const_det) return J.adjugate[k][i].div_const(*const_det);
        return Expr::atom(kDetInv) * J.adjugate[k][i];
    };

    std::map<Atom, Expr> bindings;
    for (const FieldDecl& fd : L.fields) {
        std::vector<Expr> F;
        auto it = T.field_map.find(fd.name);
        if (it == T.field_map.end()) {
            // Scalar-field semantics by default: the barred field itself.
            for (int comp : fd.comp_indices())
                F.push_back(Expr::atom(Atom::field(barred_name(fd.name), comp)));
        } else {
            F = it->second;
            if (static_cast<int>(F.size()) != fd.ncomp)
                throw Error(ErrorCode::MissingComponent,
                            "transform for field '" + fd.name + "' has wrong component count");
        }
        auto comps = fd.comp_indices();
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            int j = comps[ci];
            const Expr& Fj = F[ci];
            std::vector<Atom> barred_atoms;
            for (const Atom& a : atoms_of(Fj)) {
                if (a.kind == AtomKind::Field)
                    barred_atoms.push_back(a);
                else if (a.kind != AtomKind::Constant)
                    throw Error(ErrorCode::UnsupportedForm,
                                "field maps must be pointwise polynomial in barred fields");
            }
            bindings[Atom::field(fd.name, j)] = Fj;

            // dpsi_j/dt -> sum_m dF_j/dpsibar_m * dpsibar_m/dt
            Expr dt_sub;
            for (const Atom& m : barred_atoms)
                dt_sub += partial_wrt_atom(Fj, m) * Expr::atom(Atom::d1(m.name, m.comp, 0));
            bindings[Atom::d1(fd.name, j, 0)] = dt_sub;

            // dpsi_j/dx_i -> sum_k J^{-1}_{ki} sum_m dF_j/dpsibar_m * dpsibar_m/dxbar_k
            for (int i = 1; i <= 3; ++i) {
                Expr dx_sub;
                for (int k = 1; k <= 3; ++k) {
                    Expr chain;
                    for (const Atom& m : barred_atoms)
                        chain += partial_wrt_atom(Fj, m) *
                                 Expr::atom(Atom::d1(m.name, m.comp, k));
                    dx_sub += inv_entry(k - 1, i - 1) * chain;
                }
                bindings[Atom::d1(fd.name, j, i)] = dx_sub;
            }
        }
    }

    Expr raw = substitute(L.density, bindings);

    // |det| factor: result = sign * det * raw, detinv powers cleared exactly.
    Expr density;
    if (const_det) {
        Rational abs_det = *const_det < 0 ? -*const_det : *const_det;
        density = Expr::rational(abs_det) * raw;
    } else {
        // Group by detinv power q; term * det^{1-q} must stay polynomial.
        std::map<int, Expr> by_power;
        for (const auto& [m, c] : raw.terms()) {
            int q = 0;
            Monomial rest;
            for (const auto& [a, p] : m) {
                if (a == kDetInv)
                    q = p;
                else
                    rest.emplace_back(a, p);
            }
            Expr term;
            term.add_term(std::move(rest), c);
            by_power[q] += term;
        }
        for (const auto& [q, num] : by_power) {
            if (q == 0) {
                density += num * J.det;
            } else if (q == 1) {
                density += num;
            } else {
                auto divided = try_divide(num, J.det.pow(q - 1));
                if (!divided)
                    throw Error(ErrorCode::UnsupportedForm,
                                "non-constant Jacobian determinant does not cancel; "
                                "the transformed density is not polynomial");
                density += *divided;
            }
        }
    }

    TransformedLagrangian out;
    out.det_sign = sign;
    out.det = J.det;
    out.base.constants = L.constants;
    for (const FieldDecl& fd : L.fields)
        out.base.fields.push_back({barred_name(fd.name), fd.ncomp, fd.is_source});
    out.base.density = std::move(density);
    out.base.validate();
    return out;
}

Expr TransformedLagrangian::unbarred_density() const {
    std::map<Atom, Expr> bindings;
    for (const Atom& a : atoms_of(base.density)) {
        if ((a.kind != AtomKind::Field && a.kind != AtomKind::Deriv) || a.name.empty() ||
            a.name.back() != 'b')
            continue;
        Atom renamed = a;
        renamed.name.pop_back();
        bindings[a] = Expr::atom(renamed);
    }
    return substitute(base.density, bindings);
}

TransformDef compose(const TransformDef& T1, const TransformDef& T2) {
    TransformDef out;
    std::map<Atom, Expr> coord_bindings;
    for (int k = 1; k <= 3; ++k) coord_bindings[Atom::space(k)] = T2.coord_map[k - 1];
    for (int i = 0; i < 3; ++i) out.coord_map[i] = substitute(T1.coord_map[i], coord_bindings);

    // F1's barred atoms are T2's unbarred names; splice in T2's field maps.
    std::map<Atom, Expr> field_bindings;
    for (const auto& [name, comps] : T2.field_map) {
        if (comps.size() == 1) {
            field_bindings[Atom::field(name, 0)] = comps[0];
        } else {
            for (int k = 1; k <= 3; ++k) field_bindings[Atom::field(name, k)] = comps[k - 1];
        }
    }
    for (const auto& [name, comps] : T1.field_map) {
        std::vector<Expr> composed;
        for (const Expr& e : comps) composed.push_back(substitute(e, field_bindings));
        out.field_map.emplace(name, std::move(composed));
    }
    return out;
}

EquivalenceReport el_equivalence_report(const LagrangianDef& L, const TransformDef& T,
                                        const FieldSet& barred_fields, const GridSpec& grid,
                                        int levels) {
    grid.validate();
    if (levels < 1) levels = 1;
    TransformedLagrangian tl = transform_lagrangian(L, T);
    JacobianMatrix J = jacobian(T);

    // Numeric sign-constancy check of det over the barred box.
    {
        bool expect_positive = tl.det_sign == DetSign::positive;
        for (int i1 = 0; i1 < grid.n_x; ++i1)
            for (int i2 = 0; i2 < grid.n_x; ++i2)
                for (int i3 = 0; i3 < grid.n_x; ++i3) {
                    double d = evaluate(J.det,
                                        {{Atom::space(1), grid.node(1, i1)},
                                         {Atom::space(2), grid.node(2, i2)},
                                         {Atom::space(3), grid.node(3, i3)}},
                                        &L.constants);
                    if (d == 0.0 || (d > 0.0) != expect_positive)
                        throw Error(ErrorCode::OrientationFlip,
                                    "Jacobian determinant changes sign on the grid");
                }
    }

    // Action comparison needs the mapped region to be a box: constant
    // Jacobian with one nonzero entry per row (axis-aligned affine map).
    if (!J.is_constant())
        throw Error(ErrorCode::UnsupportedForm,
                    "action comparison supports affine coordinate maps only");
    std::array<int, 3> source_axis{};
    std::array<Rational, 3> slope{};
    for (int i = 0; i < 3; ++i) {
        int nonzero = 0;
        for (int k = 0; k < 3; ++k) {
            Rational v = *J.entries[i][k].as_rational();
            if (v != 0) {
                ++nonzero;
                source_axis[i] = k;
                slope[i] = v;
            }
        }
        if (nonzero != 1)
            throw Error(ErrorCode::UnsupportedForm,
                        "action comparison requires an axis-aligned coordinate map");
    }

    // Offsets b_i = f_i(0) and the inverse map xbar_k(x).
    std::array<Rational, 3> offset{};
    std::array<Expr, 3> finv;
    for (int i = 0; i < 3; ++i) {
        Expr b = substitute(T.coord_map[i], {{Atom::space(1), Expr{}},
                                             {Atom::space(2), Expr{}},
                                             {Atom::space(3), Expr{}}});
        auto r = b.as_rational();
        if (!r)
            throw Error(ErrorCode::UnsupportedForm, "affine coordinate map expected");
        offset[i] = *r;
    }
    for (int i = 0; i < 3; ++i) {
        int k = source_axis[i];
        // x_i = slope_i * xbar_k + b_i  =>  xbar_k = (x_i - b_i)/slope_i
        finv[k] = (Expr::atom(Atom::space(i + 1)) - Expr::rational(offset[i]))
                      .div_const(slope[i]);
    }

    // Mapped box f(A).
    GridSpec mapped = grid;
    for (int i = 0; i < 3; ++i) {
        int k = source_axis[i];
        double a = to_double(slope[i]) * grid.box[k][0] + to_double(offset[i]);
        double b = to_double(slope[i]) * grid.box[k][1] + to_double(offset[i]);
        mapped.box[i] = {std::min(a, b), std::max(a, b)};
    }

    // psi_j(x) = F_j(psibar(f^{-1}(x))) as coordinate polynomials.
    std::map<Atom, Expr> coord_sub;
    for (int k = 0; k < 3; ++k) coord_sub[Atom::space(k + 1)] = finv[k];
    std::map<Atom, Expr> barred_atom_values;
    for (const auto& [bname, bf] : barred_fields)
        for (int comp : bf.comp_indices())
            barred_atom_values[Atom::field(bname, comp)] =
                substitute(bf.component(comp), coord_sub);

    FieldSet unbarred;
    for (const FieldDecl& fd : L.fields) {
        std::vector<Expr> F;
        auto it = T.field_map.find(fd.name);
        if (it == T.field_map.end()) {
            for (int comp : fd.comp_indices())
                F.push_back(Expr::atom(Atom::field(barred_name(fd.name), comp)));
        } else {
            F = it->second;
        }
        std::vector<Expr> comps;
        for (const Expr& Fj : F) comps.push_back(substitute(Fj, barred_atom_values));
        unbarred.emplace(fd.name, AnalyticField(fd.name, std::move(comps), L.constants));
    }

    EquivalenceReport rep;
    rep.det_sign = tl.det_sign;

    std::vector<Equation> barred_eqs = derive_all(tl.base);
    GridSpec g_barred = grid;
    GridSpec g_mapped = mapped;
    // Stagger the node counts: with identical counts the two trapezoid sums
    // coincide node for node under an affine map (the change of variables is
    // a pointwise identity), and their difference is rounding noise instead
    // of the O(h^2) quadrature error being measured.
    g_mapped.n_t += 2;
    g_mapped.n_x += 2;
    for (int lvl = 0; lvl < levels; ++lvl) {
        double s_bar = action(tl.base, g_barred, barred_fields);
        double s_orig = action(L, g_mapped, unbarred);
        if (lvl == 0) {
            rep.action_lhs = s_bar;
            rep.action_rhs = s_orig;
            rep.rel_err = std::abs(s_bar - s_orig) / std::max(1.0, std::abs(s_orig));
        }
        rep.hs.push_back(g_barred.spacing(1));
        rep.action_errs_by_h.push_back(std::abs(s_bar - s_orig));

        double sq = 0.0;
        for (const Equation& eq : barred_eqs) {
            double r = residual_norm(eq, g_barred, barred_fields, L.constants);
            sq += r * r;
        }
        rep.residual_norms_by_h.push_back(std::sqrt(sq));

        g_barred = g_barred.refined();
        g_mapped = g_mapped.refined();
    }
    rep.action_order_estimate = estimate_order(rep.hs, rep.action_errs_by_h);
    rep.residual_order_estimate = estimate_order(rep.hs, rep.residual_norms_by_h);
    return rep;
}

} // namespace varfield
