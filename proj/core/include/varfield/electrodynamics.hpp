#pragma once

#include "varfield/euler_lagrange.hpp"
#include "varfield/lagrangian.hpp"
#include "varfield/vector_ops.hpp"

#include <string>
#include <utility>
#include <vector>

namespace varfield {

// The electromagnetic Lagrangian with its target equations: Maxwell's
// inhomogeneous equations written in terms of the potentials phi and A.
struct EmSystem {
    LagrangianDef lagrangian;        // fields phi[1], A[3]; sources rho[1], j[3]
    std::vector<Equation> targets;   // phi equation, then A1..A3
    // Human-readable normalization that relates each stored target to the
    // textbook form (the A equations are cleared by eps0*c^2).
    std::vector<std::string> target_normalizations;
};

EmSystem build_em_system();

// B = curl A, E = -grad phi - dA/dt.
std::pair<Vec3, Vec3> potentials_to_fields(const Expr& phi, const Vec3& A);

// curl(curl A) == grad(div A) - laplacian A, componentwise, for a generic
// symbolic 3-vector field.
bool verify_curl_curl_identity();

struct EmComparison {
    std::string field;
    int comp{0};
    bool match{false};
    std::string normalization; // constant factor between derived and target
};

struct EmReport {
    std::vector<EmComparison> comparisons;
    bool curl_curl_identity{false};
    bool all_match() const;
};

// Derives all EL equations of the EM Lagrangian and compares each against
// the target equations up to one overall constant factor.
EmReport verify_em();
EmReport verify_em(const EmSystem& system);

// derived == factor * target for a single constant (rational times a power
// product of named constants); returns the factor rendered as text.
std::optional<std::string> proportional_up_to_const(const Expr& derived, const Expr& target);

} // namespace varfield
