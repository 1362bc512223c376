#include "varfield/lagrangian.hpp"

#include "varfield/errors.hpp"

namespace varfield {

std::vector<int> FieldDecl::comp_indices() const {
    if (ncomp == 1) return {0};
    return {1, 2, 3};
}

const FieldDecl* LagrangianDef::find_field(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return &f;
    return nullptr;
}

void LagrangianDef::validate() const {
    for (const Atom& a : atoms_of(density)) {
        switch (a.kind) {
        case AtomKind::Constant:
            if (!constants.is_declared(a.name))
                throw Error(ErrorCode::UnknownIdentifier,
                            "undeclared constant '" + a.name + "'");
            break;
        case AtomKind::Field:
        case AtomKind::Deriv: {
            const FieldDecl* f = find_field(a.name);
            if (!f)
                throw Error(ErrorCode::UnknownIdentifier,
                            "undeclared field '" + a.name + "'");
            bool comp_ok = (f->ncomp == 1) ? a.comp == 0 : (a.comp >= 1 && a.comp <= 3);
            if (!comp_ok)
                throw Error(ErrorCode::UnknownIdentifier,
                            "component out of range for field '" + a.name + "'");
            if (a.kind == AtomKind::Deriv) {
                if (f->is_source)
                    throw Error(ErrorCode::UnsupportedForm,
                                "derivative of prescribed source field '" + a.name + "'");
                if (a.deriv_order() > 1)
                    throw Error(ErrorCode::FirstOrderViolation,
                                "density contains derivative of order > 1: " + a.str());
            }
            break;
        }
        case AtomKind::Time:
        case AtomKind::Space:
            break;
        }
    }
}

} // namespace varfield
