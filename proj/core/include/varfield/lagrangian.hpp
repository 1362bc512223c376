#pragma once

#include "varfield/constants.hpp"
#include "varfield/expr.hpp"

#include <string>
#include <vector>

namespace varfield {

struct FieldDecl {
    std::string name;
    int ncomp{1};        // 1 or 3
    bool is_source{false}; // prescribed background field, not varied

    // Component indices as stored in atoms: {0} for scalars, {1,2,3} for vectors.
    std::vector<int> comp_indices() const;
};

struct LagrangianDef {
    std::vector<FieldDecl> fields;
    ConstantTable constants;
    Expr density;

    const FieldDecl* find_field(const std::string& name) const;

    // Checks that the density references only declared fields/constants,
    // contains derivative atoms of total order <= 1, and never
    // differentiates a source field.
    void validate() const;
};

} // namespace varfield
