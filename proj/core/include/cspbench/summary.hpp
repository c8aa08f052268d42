#pragma once

#include <string>
#include <vector>

#include "cspbench/records.hpp"
#include "cspbench/stats.hpp"

namespace cspbench {

/// One Wilcoxon battery entry: metric is "crps_median_norm",
/// "mql_median_norm", "coverage95", "crps" or "mql_norm".
struct ComparisonSpec {
    std::string metric;
    std::string method_a;
    std::string method_b;
    Alternative alternative = Alternative::Less;
};

struct SummaryOptions {
    /// Wilcoxon comparisons to run; empty selects the default battery
    /// (every ordered method pair on median-normalized CRPS and MQL with
    /// alternative "less", and on coverage with alternative "greater").
    std::vector<ComparisonSpec> comparisons;
};

/// Names of the files write_summary produces inside the output directory.
const std::vector<std::string>& summary_file_names();

/// Writes the full summary-table set for a record collection:
///   accuracy.csv          mean ranks, dataset-level rank-1 wins, coverage,
///                         wall minutes per method
///   rank_bands.csv        per-window rank-band counts (rows sum to the
///                         complete-window count)
///   head_to_head.csv      dataset-level win matrix on mean CRPS / MQL
///   absolute_scores.csv   within-window median-normalized CRPS and raw
///                         normalized MQL, mean/std, plus coverage
///   wilcoxon.csv          paired signed-rank battery
///   walltime.csv          per-method wall time, sec/row, slowdown factors
///   coverage_windows.csv  plot-ready per-window coverage distribution
///   data_quality.csv      flagged / incomplete / non-normalizable counts
///
/// Rank and normalized aggregates use only windows where every method has a
/// clean record, which keeps all tables paired; everything excluded is
/// counted in data_quality.csv. Throws std::runtime_error when records are
/// empty or the directory is unwritable.
void write_summary(const std::vector<ForecastRecord>& records, const std::string& out_dir,
                   const SummaryOptions& options = {});

/// Parses a comparisons CSV (header metric,method_a,method_b,alternative).
std::vector<ComparisonSpec> load_comparisons(const std::string& path);

} // namespace cspbench
