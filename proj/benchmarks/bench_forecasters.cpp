#include <benchmark/benchmark.h>

#include "cspbench/forecasters.hpp"
#include "cspbench/synth.hpp"

using namespace cspbench;

namespace {

// one audited-scale workload: hourly series, daily season, H=24, B=100
const TimeSeries& workload_series() {
    static const TimeSeries series = [] {
        SynthSpec spec;
        spec.name = "bench";
        spec.n_series = 1;
        spec.length = 480;
        spec.period = 24.0;
        spec.season = 24;
        spec.noise_sigma = 1.0;
        return generate_synthetic(spec).front();
    }();
    return series;
}

void run_method(benchmark::State& state, const char* name) {
    const TimeSeries& series = workload_series();
    const Forecaster forecaster = make_forecaster(name);
    std::uint64_t salt = 0;
    for (auto _ : state) {
        RngStream rng(hash_key({"bench", name}, {salt++}));
        const SampleMatrix out = forecaster({series, 24, 100, rng});
        benchmark::DoNotOptimize(out.at(0, 0));
    }
}

} // namespace

static void BM_CspAdaptive(benchmark::State& state) { run_method(state, "csp-adaptive"); }
static void BM_CspFixed(benchmark::State& state) { run_method(state, "csp-fixed"); }
static void BM_Npts(benchmark::State& state) { run_method(state, "npts"); }
static void BM_SeasonalNpts(benchmark::State& state) { run_method(state, "seasonal-npts"); }
static void BM_AdaptiveWindowMci(benchmark::State& state) {
    run_method(state, "adaptive-window-mci");
}
static void BM_EmpiricalFull(benchmark::State& state) { run_method(state, "empirical-full"); }

BENCHMARK(BM_CspAdaptive);
BENCHMARK(BM_CspFixed);
BENCHMARK(BM_Npts);
BENCHMARK(BM_SeasonalNpts);
BENCHMARK(BM_AdaptiveWindowMci);
BENCHMARK(BM_EmpiricalFull);
