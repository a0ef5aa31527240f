// Timing comparisons: assembly routes, LU reuse against per-sample refactorization,
// and the in-house sparse LU against Eigen's SparseLU.
#include "mcipdg/classical_mc.hpp"
#include "mcipdg/linalg.hpp"
#include "mcipdg/multimodes.hpp"

#include <Eigen/SparseLU>
#include <benchmark/benchmark.h>

using namespace mcipdg;

namespace {

RunConfig bench_config(int n, int samples)
{
    RunConfig c;
    c.k = 5.0;
    c.n = n;
    c.samples = samples;
    c.modes = 3;
    c.epsilon = 1.0 / 6.0;
    c.noise.lower = 0.0;
    c.noise.upper = 1.0;
    return c;
}

void assembly(benchmark::State& state, Execution exec)
{
    const Discretization disc = Discretization::build(static_cast<int>(state.range(0)), 1, PenaltySet::defaults(1));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_components(*disc.space, PenaltySet::defaults(1), exec));
}
void BM_AssemblyParallel(benchmark::State& s) { assembly(s, Execution::parallel); }
void BM_AssemblySerial(benchmark::State& s) { assembly(s, Execution::serial_reference); }
BENCHMARK(BM_AssemblyParallel)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssemblySerial)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_MultiModes(benchmark::State& state)
{
    const RunConfig c = bench_config(static_cast<int>(state.range(0)), 16);
    const Discretization disc = Discretization::build(c);
    for (auto _ : state) benchmark::DoNotOptimize(run_multimodes(disc, c));
}
void BM_Classical(benchmark::State& state)
{
    const RunConfig c = bench_config(static_cast<int>(state.range(0)), 16);
    const Discretization disc = Discretization::build(c);
    for (auto _ : state) benchmark::DoNotOptimize(run_classical(disc, c));
}
BENCHMARK(BM_MultiModes)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Classical)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_OwnLU(benchmark::State& state)
{
    const Discretization disc = Discretization::build(static_cast<int>(state.range(0)), 1, PenaltySet::defaults(1));
    const SystemMatrix a = disc.assembler->constant(5.0);
    for (auto _ : state) benchmark::DoNotOptimize(lu_factorize(a));
}
void BM_EigenSparseLU(benchmark::State& state)
{
    const Discretization disc = Discretization::build(static_cast<int>(state.range(0)), 1, PenaltySet::defaults(1));
    const SystemMatrix a = disc.assembler->constant(5.0);
    const auto& cp = a.pattern->col_ptr();
    const auto& ri = a.pattern->row_idx();
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int c = 0; c < a.size(); ++c)
        for (int p = cp[c]; p < cp[c + 1]; ++p) trip.emplace_back(ri[p], c, a.values[p]);
    Eigen::SparseMatrix<Complex> m(a.size(), a.size());
    m.setFromTriplets(trip.begin(), trip.end());
    for (auto _ : state) {
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(m);
        benchmark::DoNotOptimize(lu.info());
    }
}
BENCHMARK(BM_OwnLU)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenSparseLU)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
