#include "varfield/electrodynamics.hpp"
#include "varfield/euler_lagrange.hpp"
#include "varfield/numeric.hpp"
#include "varfield/tree.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace varfield;

// Canonicalization of a moderately nested product/sum tree.
void BM_Canonicalize(benchmark::State& state) {
    Expr x1 = Expr::atom(Atom::space(1));
    Expr psi = Expr::atom(Atom::field("psi", 0));
    Expr dpsi = Expr::atom(Atom::d1("psi", 0, 1));
    Expr e = (psi + dpsi) * (psi - dpsi) * (x1 + Expr::integer(1));
    ExprTree t = to_tree(e.pow(3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonicalize(t));
    }
}
BENCHMARK(BM_Canonicalize);

void BM_EmDeriveAll(benchmark::State& state) {
    EmSystem sys = build_em_system();
    for (auto _ : state) {
        benchmark::DoNotOptimize(derive_all(sys.lagrangian));
    }
}
BENCHMARK(BM_EmDeriveAll);

void BM_ActionQuadrature(benchmark::State& state) {
    EmSystem sys = build_em_system();
    sys.lagrangian.constants.set_value("eps0", Rational(1));
    sys.lagrangian.constants.set_value("c", Rational(1));
    GridSpec g;
    g.n_t = g.n_x = static_cast<int>(state.range(0));
    FieldSet fs;
    std::uint64_t seed = 42;
    for (const auto& f : sys.lagrangian.fields)
        fs.emplace(f.name, make_trial_field(f.name, f.ncomp, seed += 17));
    for (auto _ : state) {
        benchmark::DoNotOptimize(action(sys.lagrangian, g, fs));
    }
}
BENCHMARK(BM_ActionQuadrature)->Arg(9)->Arg(17);

} // namespace

BENCHMARK_MAIN();
