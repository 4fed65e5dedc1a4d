// Serial reference executor against the OpenMP one on the same learning run.
// Arg 0 of the parallel cases is the worker count.

#include <benchmark/benchmark.h>

#include "bnsl/ci_test.hpp"
#include "bnsl/structure.hpp"
#include "bnsl/synthetic.hpp"

using namespace bnsl;

namespace {

const ContinuousDataset& gaussian() {
    static const ContinuousDataset data = [] {
        Rng rng(2024);
        RandomDagSpec spec;
        spec.nodes = 60;
        spec.expected_arcs = 70;
        return sample_linear_gaussian(random_dag(spec, rng), 2000, 7);
    }();
    return data;
}

const DiscreteDataset& discrete() {
    static const DiscreteDataset data = [] {
        Rng rng(2025);
        RandomDagSpec spec;
        spec.nodes = 30;
        spec.expected_arcs = 35;
        return sample(random_discrete_bn(random_dag(spec, rng), {}, rng), 5000, 7);
    }();
    return data;
}

void run(benchmark::State& state, const CiTest& test, Algorithm a, bool serial, std::size_t workers) {
    GlobalLearnConfig cfg;
    cfg.algorithm = a;
    cfg.serial_reference = serial;
    cfg.workers = workers;
    std::uint64_t tests = 0;
    for (auto _ : state) {
        const auto r = learn_cpdag(test, cfg);
        tests = r.total_tests();
        benchmark::DoNotOptimize(tests);
    }
    state.counters["tests"] = static_cast<double>(tests);
}

void BM_CorSerial(benchmark::State& state) {
    CorTest test(gaussian(), 0.01);
    run(state, test, Algorithm::si_hiton_pc, true, 1);
}

void BM_CorParallel(benchmark::State& state) {
    CorTest test(gaussian(), 0.01);
    run(state, test, Algorithm::si_hiton_pc, false, static_cast<std::size_t>(state.range(0)));
}

void BM_MiSerial(benchmark::State& state) {
    MiTest test(discrete(), 0.01);
    run(state, test, Algorithm::inter_iamb, true, 1);
}

void BM_MiParallel(benchmark::State& state) {
    MiTest test(discrete(), 0.01);
    run(state, test, Algorithm::inter_iamb, false, static_cast<std::size_t>(state.range(0)));
}

}  // namespace

BENCHMARK(BM_CorSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CorParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MiSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MiParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
