#include <benchmark/benchmark.h>

#include <random>

#include "mises/catalog.hpp"
#include "mises/numeric.hpp"
#include "mises/parser.hpp"
#include "mises/prob_equal.hpp"
#include "mises/transform.hpp"

using namespace mises;

namespace {

Context bench_context() {
    Context ctx;
    ctx.symbols({"a", "b"})
        .function("f", 1)
        .dependent("u", {"t", "x"})
        .dependent("eta", {"t", "u"})
        .dependent("zeta", {"t", "u"});
    return ctx;
}

void BM_ParseEquation(benchmark::State& state) {
    Context ctx = bench_context();
    for (auto _ : state) {
        auto eq = parse_equation("u_t + f(u)*u_x = a*u_xxx + b*u_xx", ctx);
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_ParseEquation);

void BM_SimplifyLargeSum(benchmark::State& state) {
    Context ctx = bench_context();
    Expr e = parse("(eta + eta_u)^3*(a + eta_uu)^2", ctx);
    for (auto _ : state) {
        Expr out = expand_products(e);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_SimplifyLargeSum);

void BM_RfPairKdv(benchmark::State& state) {
    Context ctx = bench_context();
    auto eq = parse_equation("u_t + f(u)*u_x = a*u_xxx", ctx);
    for (auto _ : state) {
        auto ev = match_evolution(eq, u_context_2d());
        auto res = rf_pair_evolution(ev);
        auto zeta = change_dependent(res.equation, ChangeRule::parse("eta=1/zeta"));
        benchmark::DoNotOptimize(zeta);
    }
}
BENCHMARK(BM_RfPairKdv);

void BM_EqualProbabilistic(benchmark::State& state) {
    Context ctx = bench_context();
    Expr lhs = parse("a*D(D(zeta^(-3)*zeta_u, u), u) + f'(u)", ctx);
    Expr rhs = parse("-9*a*zeta_u*zeta_uu*zeta^(-4) + 12*a*zeta^(-5)*zeta_u^3 + "
                     "a*zeta_uuu*zeta^(-3) + f'(u)",
                     ctx);
    for (auto _ : state) {
        bool eq = equal_probabilistic(lhs, rhs);
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_EqualProbabilistic);

void BM_CatalogEntry(benchmark::State& state) {
    Catalog cat = Catalog::load_default();
    const CatalogEntry* e = cat.find("burgers-4.1");
    RunOptions opts;
    for (auto _ : state) {
        EntryResult r = run_entry(cat, *e, opts);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_CatalogEntry);

void BM_MolBurgers(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        NumericSolution sol = solve_burgers_front(2 * n + 1, n / 4 + 2, 0.05);
        benchmark::DoNotOptimize(sol);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_MolBurgers)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_BuildEta(benchmark::State& state) {
    NumericSolution sol = solve_burgers_front(513, 65);
    for (auto _ : state) {
        EtaField field = build_eta(sol, 256);
        benchmark::DoNotOptimize(field);
    }
}
BENCHMARK(BM_BuildEta);

} // namespace

BENCHMARK_MAIN();
