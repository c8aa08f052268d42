#pragma once

#include <string>
#include <vector>

#include "cspbench/dataset_io.hpp"
#include "cspbench/forecasters.hpp"
#include "cspbench/records.hpp"
#include "cspbench/rng.hpp"
#include "cspbench/scoring.hpp"
#include "cspbench/time_series.hpp"

namespace cspbench {

struct DatasetConfig {
    std::string name;
    std::string path;
    DatasetFormat format = DatasetFormat::Jsonl;
    int horizon = 24;
    int season_override = 0; // 0 = derive from freq
    int series_cap = 10;     // first k series in file order
    int window_count = 5;
    long min_history = 0; // 0 = horizon + 10
};

struct MethodConfig {
    std::string name;
    MethodParams params{};
};

struct BenchmarkConfig {
    std::vector<DatasetConfig> datasets;
    std::vector<MethodConfig> methods;
    SeedSpec seed{};
    int budget = 100;
    std::vector<double> quantile_levels; // empty = default 0.1..0.9 grid
    double alpha = 0.05;
    std::string output_dir = ".";
    int parallelism = 0; // 0 = hardware concurrency
};

/// Parses the JSON config document (schema documented in the README).
/// Throws std::runtime_error on unreadable files or invalid values.
BenchmarkConfig load_config(const std::string& path);

/// One rolling-origin evaluation window. Indices are 0-based offsets into
/// the series; targets are the half-open range [target_begin, target_end).
/// `index` is the stride index k: window k forecasts the targets ending
/// k*H steps before the series end.
struct WindowSpec {
    int index = 0;
    long history_len = 0;
    long target_begin = 0;
    long target_end = 0;
};

/// Rolling-origin windows with stride equal to the horizon (non-overlapping
/// targets), newest window has index 0. Windows whose history is shorter
/// than min_history are dropped; the survivors come back in chronological
/// order. An empty result means the series is skipped.
std::vector<WindowSpec> rolling_windows(const TimeSeries& series, int horizon, int window_count,
                                        long min_history);

struct BenchmarkRun {
    std::vector<ForecastRecord> records;
    std::vector<std::string> skipped; // skipped-series log lines
};

/// Runs the full benchmark: every (dataset, series, window, method) task
/// gets its matched derived rng-stream, the forecast call alone is timed
/// with a monotonic clock, and per-task failures become flagged records
/// rather than aborting the run. Records come back canonically sorted and
/// are identical across reruns and parallelism degrees (wall_ms excepted).
BenchmarkRun run_benchmark(const BenchmarkConfig& config);

} // namespace cspbench
