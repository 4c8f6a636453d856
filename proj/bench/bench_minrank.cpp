#include "eicp/experiments.hpp"
#include "eicp/minrank.hpp"
#include "eicp/model.hpp"

#include <benchmark/benchmark.h>

using namespace eicp;

namespace {

const gf::FieldOrder F2(2);

// 0: Example 3 shape (N = M = 7), 1: T_{8,8}, 2: random N = M = 8, 3: random N = 10, M = 8.
model::EicpInstance instance(int which) {
    switch (which) {
    case 0:
        return model::EicpInstance(F2, 7, {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}, {5}, {4, 6}, {0, 1, 2, 3, 4, 5}},
                                   {0, 1, 2, 3, 4, 5, 6});
    case 1:
        return experiments::regular_tree_instance(8, F2);
    case 2:
        return model::gen_random(8, 8, F2, 0.45, 7);
    default:
        return model::gen_random(10, 8, F2, 0.4, 11);
    }
}

void set_labels(benchmark::State& state, const minrank::MinrankResult& r) {
    state.counters["kappa"] = static_cast<double>(r.kappa);
    state.counters["nodes"] = static_cast<double>(r.stats.nodes_explored + r.stats.code_nodes_explored);
}

void BM_BnbSerial(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    minrank::MinrankOptions opts;
    opts.parallel = false;
    minrank::MinrankResult r;
    for (auto _ : state) {
        r = minrank::minrank_bnb(inst, opts);
        benchmark::DoNotOptimize(r.kappa);
    }
    set_labels(state, r);
}

void BM_BnbParallel(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    minrank::MinrankOptions opts;
    opts.threads = static_cast<int>(state.range(1));
    minrank::MinrankResult r;
    for (auto _ : state) {
        r = minrank::minrank_bnb(inst, opts);
        benchmark::DoNotOptimize(r.kappa);
    }
    set_labels(state, r);
}

void BM_CandidatesSerial(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    minrank::MinrankOptions opts;
    opts.parallel = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(minrank::minrank_candidates(inst, opts).kappa);
    }
}

void BM_CandidatesExhaustive(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(minrank::minrank_exhaustive(inst, std::uint64_t{1} << 26).kappa);
    }
}

void BM_Oracle(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    const auto l_max = model::uniq(inst.demands());
    for (auto _ : state) {
        benchmark::DoNotOptimize(minrank::minrank_oracle(inst, l_max, std::uint64_t{1} << 32).length);
    }
}

void thread_args(benchmark::internal::Benchmark* b) {
    for (int which = 0; which < 4; ++which) {
        for (int t : {1, 2, 4}) {
            b->Args({which, t});
        }
    }
}

} // namespace

BENCHMARK(BM_BnbSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BnbParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CandidatesSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CandidatesExhaustive)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
