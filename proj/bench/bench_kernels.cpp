#include <benchmark/benchmark.h>

#include "ncca/enumeration.hpp"
#include "ncca/simulate.hpp"

using namespace ncca;

namespace {

DenseRule traffic_line(const StateSet& q) {
    // particles of any size hop right when the target is empty
    return DenseRule::from_function(1, q, [](const NeighborhoodConfig& n) {
        const State c = n[Direction::zero()], left = n[Direction::minus(1)], right = n[Direction::plus(1)];
        return (c == 0 ? left : 0) + (right != 0 ? c : 0);
    });
}

const StateSet kTernary({0, 1, 2});

void BM_ExhaustiveParallel(benchmark::State& state) {
    const auto f = traffic_line(kTernary);
    const LatticeShape shape({static_cast<int>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_oracle(f, shape).configurations_checked);
}

void BM_ExhaustiveSerial(benchmark::State& state) {
    const auto f = traffic_line(kTernary);
    const LatticeShape shape({static_cast<int>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_oracle_serial(f, shape).configurations_checked);
}

DenseRule space_rule() {
    static const auto catalog = enumerate_ncca(EnumerationRequest{3, kTernary});
    return catalog[catalog.size() / 2].rule;
}

void BM_DecideParallel(benchmark::State& state) {
    const auto f = space_rule();
    const ReconstructionPlan plan(3, kTernary, Direction::zero(), canonical_lambda(3));
    for (auto _ : state) benchmark::DoNotOptimize(is_number_conserving(f, plan).status);
}

void BM_DecideSerial(benchmark::State& state) {
    const auto f = space_rule();
    const ReconstructionPlan plan(3, kTernary, Direction::zero(), canonical_lambda(3));
    for (auto _ : state) benchmark::DoNotOptimize(is_number_conserving_serial(f, plan).status);
}

void BM_EnumerateParallel(benchmark::State& state) {
    const EnumerationRequest request{static_cast<int>(state.range(0)), kTernary};
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_ncca(request).size());
}

void BM_EnumerateSerial(benchmark::State& state) {
    const EnumerationRequest request{static_cast<int>(state.range(0)), kTernary};
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_ncca_serial(request).size());
}

}  // namespace

BENCHMARK(BM_ExhaustiveParallel)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveSerial)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecideParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DecideSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnumerateParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
