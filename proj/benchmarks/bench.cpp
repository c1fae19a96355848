#include <benchmark/benchmark.h>

#include "streamlogic/circuits.hpp"
#include "streamlogic/parser.hpp"
#include "streamlogic/qe.hpp"
#include "streamlogic/trunc_series.hpp"

using namespace streamlogic;

namespace {

void bm_coeffs_fibonacci(benchmark::State& state) {
    LaurentRational f = parse_stream_expr("X/(1-X-X^2)");
    const long n = state.range(0);
    for (auto _ : state) {
        Rational last;
        for (long i = 0; i < n; ++i) last = f.coeff_at(i);
        benchmark::DoNotOptimize(last);
    }
}
BENCHMARK(bm_coeffs_fibonacci)->Arg(32)->Arg(128)->Arg(512);

void bm_sqrt_prefix(benchmark::State& state) {
    LaurentRational f = parse_stream_expr("1/(1-X)^2");
    const int n = static_cast<int>(state.range(0));
    TruncSeries t = f.coeffs(n);
    for (auto _ : state) {
        TruncSeries r = sqrt_prefix(t, n);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(bm_sqrt_prefix)->Arg(16)->Arg(64)->Arg(256);

void bm_circuit_transfer(benchmark::State& state) {
    Circuit c = parse_circuit("input z\n"
                              "node h1 = delay h2\n"
                              "node h3 = add z h1\n"
                              "node h2 = copy h3\n"
                              "output y = h3\n");
    for (auto _ : state) {
        LaurentRational h = transfer(c, "y", "z");
        benchmark::DoNotOptimize(h);
    }
}
BENCHMARK(bm_circuit_transfer);

void bm_eliminate_quadratic(benchmark::State& state) {
    FormulaPtr f = parse_formula("exists x : L . x * x + b * x + c = 0");
    for (auto _ : state) {
        FormulaPtr qf = eliminate(f);
        benchmark::DoNotOptimize(qf);
    }
}
BENCHMARK(bm_eliminate_quadratic);

void bm_decide_field_inverse(benchmark::State& state) {
    FormulaPtr f = parse_formula("forall x : L . x = 0 \\/ exists y : L . x * y = 1");
    for (auto _ : state) {
        Decision d = decide(f);
        benchmark::DoNotOptimize(d.valid);
    }
}
BENCHMARK(bm_decide_field_inverse);

void bm_decide_order_sentence(benchmark::State& state) {
    FormulaPtr f = parse_formula("forall x : S . forall y : S . x <= y \\/ y <= x");
    for (auto _ : state) {
        Decision d = decide(f);
        benchmark::DoNotOptimize(d.valid);
    }
}
BENCHMARK(bm_decide_order_sentence);

} // namespace

BENCHMARK_MAIN();
