#include <benchmark/benchmark.h>

#include "risopt/model.hpp"

using namespace risopt;

namespace {

SystemConfig sized(int n_per_side) {
    SystemConfig cfg = feasible_defaults();
    cfg.n_ris1 = n_per_side;
    cfg.n_ris2 = n_per_side;
    return cfg;
}

void bench_synthesize(benchmark::State& state) {
    SystemConfig cfg = sized(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        cfg.seed += 1;
        benchmark::DoNotOptimize(synthesize_scenario(cfg));
    }
}
BENCHMARK(bench_synthesize)->Arg(25)->Arg(50)->Arg(100);

void bench_derive(benchmark::State& state) {
    const SystemConfig cfg = sized(static_cast<int>(state.range(0)));
    const ChannelSet ch = synthesize_scenario(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(derive_channels(ch));
}
BENCHMARK(bench_derive)->Arg(25)->Arg(50);

void bench_compose(benchmark::State& state) {
    const SystemConfig cfg = sized(static_cast<int>(state.range(0)));
    const ChannelSet ch = synthesize_scenario(cfg);
    const DerivedChannels dc = derive_channels(ch);
    Rng rng(1);
    RisState ris;
    ris.ris1_phases = VectorXcd(cfg.n_ris1);
    ris.ris2_phases = VectorXcd(cfg.n_ris2);
    for (int j = 0; j < cfg.n_ris1; ++j) ris.ris1_phases(j) = std::polar(1.0, rng.uniform());
    for (int j = 0; j < cfg.n_ris2; ++j) ris.ris2_phases(j) = std::polar(1.0, rng.uniform());
    for (auto _ : state) benchmark::DoNotOptimize(compose_all(ch, dc, ris));
}
BENCHMARK(bench_compose)->Arg(25)->Arg(50)->Arg(100);

}  // namespace
