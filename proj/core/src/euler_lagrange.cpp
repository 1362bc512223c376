#include "varfield/euler_lagrange.hpp"

#include "varfield/errors.hpp"

namespace varfield {

Equation derive(const LagrangianDef& L, const std::string& field, int comp) {
    const FieldDecl* f = L.find_field(field);
    if (!f) throw Error(ErrorCode::UnknownIdentifier, "unknown field '" + field + "'");
    bool comp_ok = (f->ncomp == 1) ? comp == 0 : (comp >= 1 && comp <= 3);
    if (!comp_ok)
        throw Error(ErrorCode::UnknownIdentifier,
                    "component out of range for field '" + field + "'");

    Expr lhs = partial_wrt_atom(L.density, Atom::field(field, comp));
    lhs -= total_derivative(partial_wrt_atom(L.density, Atom::d1(field, comp, 0)), 0);
    for (int i = 1; i <= 3; ++i)
        lhs -= total_derivative(partial_wrt_atom(L.density, Atom::d1(field, comp, i)), i);
    return Equation{field, comp, std::move(lhs)};
}

std::vector<Equation> derive_all(const LagrangianDef& L) {
    std::vector<Equation> out;
    for (const auto& f : L.fields) {
        if (f.is_source) continue;
        for (int comp : f.comp_indices()) out.push_back(derive(L, f.name, comp));
    }
    return out;
}

} // namespace varfield
