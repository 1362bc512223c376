#pragma once

#include "varfield/expr.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace varfield {

// Invertible coordinate map x = f(xbar) and pointwise field map
// psi = F(psibar).  Coordinate expressions contain only barred coordinate
// atoms (stored as the ordinary SpaceCoord atoms; "xb" is surface syntax),
// field expressions only barred field atoms.
struct TransformDef {
    std::array<Expr, 3> coord_map;

    // Unbarred field name -> component expressions; index layout follows
    // comp_indices(): one entry for scalars, three for vectors.
    std::map<std::string, std::vector<Expr>> field_map;

    struct Inverse {
        std::array<Expr, 3> coord_map;
        std::map<std::string, std::vector<Expr>> field_map;
    };
    std::optional<Inverse> declared_inverse;
};

// Barred counterpart naming: psi -> psib, A -> Ab.
std::string barred_name(const std::string& name);

} // namespace varfield
