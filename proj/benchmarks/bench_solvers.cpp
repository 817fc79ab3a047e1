#include <benchmark/benchmark.h>


#include "risopt/bcd.hpp"
#include "risopt/phase.hpp"
#include "risopt/sca.hpp"

using namespace risopt;

namespace {

struct Workload {
    SystemConfig cfg;
    ChannelSet ch;
    DerivedChannels dc;
    RisState ris;
    Precoder prec;
};

// state taken from one solver pass so the benchmarked steps start feasible
Workload make_workload(int n_per_side) {
    Workload w;
    w.cfg = feasible_defaults();
    w.cfg.n_ris1 = n_per_side;
    w.cfg.n_ris2 = n_per_side;
    w.cfg.seed = 3;
    w.cfg.bcd_max_outer = 1;
    w.cfg.phase_max_sweeps = 0;
    w.ch = synthesize_scenario(w.cfg);
    w.dc = derive_channels(w.ch);
    const BcdResult warm = bcd_solve(w.ch, w.cfg);
    w.ris = warm.ris;
    w.prec = warm.precoder;
    w.cfg.phase_max_sweeps = feasible_defaults().phase_max_sweeps;
    return w;
}

void bench_sca_iteration(benchmark::State& state) {
    Workload w = make_workload(static_cast<int>(state.range(0)));
    ScaSettings settings;
    settings.max_iters = 1;
    settings.start = w.prec;
    for (auto _ : state)
        benchmark::DoNotOptimize(sca_loop(w.ch, w.dc, w.ris, w.cfg, settings));
}
BENCHMARK(bench_sca_iteration)->Arg(10)->Arg(25);

void bench_phase_update(benchmark::State& state) {
    Workload w = make_workload(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_ris1_phases(w.ch, w.dc, w.ris, w.prec, w.cfg));
}
BENCHMARK(bench_phase_update)->Arg(10)->Arg(25)->Arg(50);

void bench_bcd_solve(benchmark::State& state) {
    SystemConfig cfg = feasible_defaults();
    cfg.n_ris1 = static_cast<int>(state.range(0));
    cfg.n_ris2 = cfg.n_ris1;
    cfg.bcd_max_outer = 4;
    cfg.seed = 5;
    const ChannelSet ch = synthesize_scenario(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(bcd_solve(ch, cfg));
}
BENCHMARK(bench_bcd_solve)->Arg(10)->Arg(25)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
