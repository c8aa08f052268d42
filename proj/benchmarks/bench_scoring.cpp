#include <benchmark/benchmark.h>

#include <vector>

#include "cspbench/rng.hpp"
#include "cspbench/scoring.hpp"

using namespace cspbench;

static void BM_CrpsEmpirical(benchmark::State& state) {
    const std::size_t budget = static_cast<std::size_t>(state.range(0));
    RngStream rng(hash_key({"bench-crps"}, {budget}));
    std::vector<double> samples(budget);
    for (auto& v : samples) v = rng.next_double() * 10.0;
    const double y = rng.next_double() * 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(crps_empirical(samples, y));
    }
}
BENCHMARK(BM_CrpsEmpirical)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_ScoreWindow(benchmark::State& state) {
    RngStream rng(hash_key({"bench-score-window"}, {1}));
    SampleMatrix samples(24, 100);
    std::vector<double> y(24);
    for (int h = 0; h < 24; ++h) {
        for (int b = 0; b < 100; ++b) {
            samples.at(h, b) = rng.next_double() * 10.0;
        }
        y[static_cast<std::size_t>(h)] = rng.next_double() * 10.0;
    }
    for (auto _ : state) {
        const WindowScores scores = score_window(samples, y, default_quantile_levels(), 0.05);
        benchmark::DoNotOptimize(scores.crps);
    }
}
BENCHMARK(BM_ScoreWindow);
