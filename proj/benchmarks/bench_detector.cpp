#include <benchmark/benchmark.h>

#include "homeconf/detector.hpp"
#include "homeconf/synth.hpp"

using namespace homeconf;

namespace {

SynthHome make_home(int n_events) {
    SynthConfig cfg;
    cfg.n_homes = 1;
    cfg.n_events = n_events;
    cfg.n_injected_conflicts = std::min(8, n_events / 4);
    auto ds = generate(cfg);
    return std::move(ds.homes[0]);
}

void BM_find_overlaps(benchmark::State& state) {
    auto home = make_home(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(find_overlaps(home.events));
}

void BM_detect_all(benchmark::State& state) {
    auto home = make_home(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(detect_all(home.events, home.firings, home.rules,
                                            home.kg3, TimeConstraint(5)));
}

}  // namespace

BENCHMARK(BM_find_overlaps)->Arg(100)->Arg(200)->Arg(300);
BENCHMARK(BM_detect_all)->Arg(100)->Arg(200)->Arg(300);

BENCHMARK_MAIN();
