#pragma once

#include "varfield/euler_lagrange.hpp"
#include "varfield/lagrangian.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace varfield {

// Uniform space-time lattice over a box and a time interval.
struct GridSpec {
    double t1{0.0}, t2{1.0};
    std::array<std::array<double, 2>, 3> box{{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}};
    int n_t{9};
    int n_x{9};

    void validate() const; // n >= 5 each, nonempty ranges
    double spacing(int coord) const;  // coord 0 = t, 1..3 = x_i
    double node(int coord, int idx) const;
    int count(int coord) const { return coord == 0 ? n_t : n_x; }

    // Same box, node counts refined n -> 2n-1 (halves the spacing).
    GridSpec refined() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// A field given in closed form: per component, a polynomial Expr in the
// coordinates (t, x1..x3) only.  First derivatives are exact symbolic
// derivatives; anything of higher order is central-differenced on demand.
class AnalyticField {
public:
    AnalyticField() = default;
    AnalyticField(std::string name, std::vector<Expr> components,
                  ConstantTable constants = {});

    const std::string& name() const { return name_; }
    int ncomp() const { return static_cast<int>(components_.size()); }
    std::vector<int> comp_indices() const;

    const Expr& component(int comp) const;           // comp as stored in atoms
    const Expr& first_derivative(int comp, int coord) const;

    double value(int comp, double t, const std::array<double, 3>& x) const;
    double d1(int comp, int coord, double t, const std::array<double, 3>& x) const;

    // this + eps * other, exact rational scaling of the component Exprs.
    AnalyticField axpy(const Rational& eps, const AnalyticField& other) const;

    double max_abs_on_grid(const GridSpec& g) const;

    // Node samples of the components and their first derivatives over a grid,
    // memoized for the most recent grid.  Node index is
    // ((it*n_x + i1)*n_x + i2)*n_x + i3.
    struct GridSamples {
        std::vector<std::vector<double>> value;  // [storage comp][node]
        std::vector<std::array<std::vector<double>, 4>> d1;  // [comp][coord][node]
    };
    const GridSamples& samples(const GridSpec& g) const;

private:
    // Coefficients folded to doubles once for fast per-node evaluation.
    struct CompiledPoly {
        std::vector<double> coeffs;
        std::vector<std::array<int, kCoordCount>> exps;
        double eval(double t, const std::array<double, 3>& x) const;
    };
    CompiledPoly compile(const Expr& e) const;

    std::string name_;
    std::vector<Expr> components_;                       // by storage order
    std::vector<std::array<Expr, kCoordCount>> derivs_;
    std::vector<CompiledPoly> compiled_;
    std::vector<std::array<CompiledPoly, kCoordCount>> compiled_derivs_;
    ConstantTable constants_;
    int comp_base_{0}; // 0 for scalar, 1 for vector indexing
    mutable std::optional<GridSpec> samples_grid_;
    mutable GridSamples samples_;
};

// Boundary-vanishing variation: a bubble factor
// (t-t1)(t2-t)*prod_i (x_i-a_i)(b_i-x_i) times a seeded random polynomial,
// so it vanishes exactly on every boundary node.
AnalyticField make_variation(const std::string& name, int ncomp, const GridSpec& g,
                             std::uint64_t seed);

// Seeded random polynomial trial field (degree <= 2 per coordinate,
// small rational coefficients).
AnalyticField make_trial_field(const std::string& name, int ncomp, std::uint64_t seed);

using FieldSet = std::map<std::string, AnalyticField>;

// 4D tensor-product trapezoidal quadrature of the density; deterministic
// axis-major summation order.
double action(const LagrangianDef& L, const GridSpec& g, const FieldSet& fields);

// Symmetric-difference variation rate [S(psi+eps*dpsi) - S(psi-eps*dpsi)]/(2 eps).
double delta_s_direct(const LagrangianDef& L, const GridSpec& g, const FieldSet& fields,
                      const FieldSet& variation, double eps);

double default_variation_eps(const GridSpec& g, const FieldSet& fields);

// Quadrature of sum_j EL_j(psi) * dpsi_j; second derivatives of the field
// come from central differences of the exact first-derivative evaluators.
double delta_s_by_parts(const LagrangianDef& L, const GridSpec& g, const FieldSet& fields,
                        const FieldSet& variation);

// RMS of eq.lhs over interior grid nodes.
double residual_norm(const Equation& eq, const GridSpec& g, const FieldSet& fields,
                     const ConstantTable& constants);

// Evaluate an equation lhs (derivative order <= 2) at one node.
double evaluate_on_grid(const Expr& e, const GridSpec& g, const FieldSet& fields,
                        const ConstantTable& constants, double t,
                        const std::array<double, 3>& x);

// Least-squares slope of log(err) vs log(h); requires >= 2 positive errors.
double estimate_order(const std::vector<double>& hs, const std::vector<double>& errs);

struct RefinementRow {
    double h{0.0};
    double value{0.0};
    double error{0.0};
};

struct RefinementStudy {
    std::vector<RefinementRow> rows;
    double estimated_order{0.0};
};

std::string to_csv(const RefinementStudy& s);

} // namespace varfield
