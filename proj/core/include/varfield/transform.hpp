#pragma once

#include "varfield/lagrangian.hpp"
#include "varfield/numeric.hpp"
#include "varfield/transform_def.hpp"

#include <array>
#include <optional>
#include <string>

namespace varfield {

struct JacobianMatrix {
    std::array<std::array<Expr, 3>, 3> entries; // d f_i / d xbar_k
    Expr det;
    std::array<std::array<Expr, 3>, 3> adjugate; // adj * entries = det * I

    bool is_constant() const;
    std::optional<Rational> constant_det() const;
};

JacobianMatrix jacobian(const TransformDef& T);

enum class DetSign { positive, negative };

// The transformed Lagrangian in barred variables.  |det J| is realized as
// det times the recorded sign; the sign assumption is re-validated
// numerically wherever the density is evaluated on a grid.
struct TransformedLagrangian {
    LagrangianDef base;   // fields carry barred names
    DetSign det_sign{DetSign::positive};
    Expr det;             // in barred coordinates

    // Density with barred field names replaced by the unbarred originals;
    // the identity-transform fixed-point comparison uses this.
    Expr unbarred_density() const;
};

TransformedLagrangian transform_lagrangian(const LagrangianDef& L, const TransformDef& T);

// T1 followed by T2: x = f1(f2(x)), F = F1 o F2 (closed for the polynomial
// maps supported here).  Field names in T2 refer to the barred names of T1's
// output, as they would when chaining through files.
TransformDef compose(const TransformDef& T1, const TransformDef& T2);

struct EquivalenceReport {
    double action_lhs{0.0};   // from the transformed Lagrangian over the barred box
    double action_rhs{0.0};   // from the original Lagrangian over the mapped box
    double rel_err{0.0};
    std::vector<double> hs;
    std::vector<double> residual_norms_by_h;
    double residual_order_estimate{0.0};
    std::vector<double> action_errs_by_h;
    double action_order_estimate{0.0};
    DetSign det_sign{DetSign::positive};
};

// Numerical verification of the transformation law for an
// axis-aligned affine coordinate map: (i) the action computed from the
// transformed Lagrangian over the barred box matches the action of the
// original Lagrangian over the mapped box; (ii) the transformed EL residual
// at the barred counterpart of the supplied field, per refinement level.
// `barred_fields` maps barred field names to analytic fields on the barred box.
EquivalenceReport el_equivalence_report(const LagrangianDef& L, const TransformDef& T,
                                        const FieldSet& barred_fields, const GridSpec& grid,
                                        int levels);

} // namespace varfield
