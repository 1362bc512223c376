#pragma once

#include "varfield/lagrangian.hpp"

#include <string>
#include <vector>

namespace varfield {

// A derived PDE in "lhs = 0" form, tagged with the field component it
// governs.  lhs is canonical and never simplified beyond canonical form.
struct Equation {
    std::string field;
    int comp{0};
    Expr lhs;
};

// lhs = dL/dpsi_j - d/dt(dL/d(dpsi_j/dt)) - sum_i d/dx_i(dL/d(dpsi_j/dx_i)),
// with the terms in exactly that order.
Equation derive(const LagrangianDef& L, const std::string& field, int comp);

// One equation per varied (non-source) field component, declaration order
// then component index.
std::vector<Equation> derive_all(const LagrangianDef& L);

} // namespace varfield
