#pragma once

#include <string>
#include <vector>

#include "cspbench/time_series.hpp"

namespace cspbench {

enum class DatasetFormat { Jsonl, Csv };

/// Parses "jsonl" or "csv"; throws std::invalid_argument otherwise.
DatasetFormat parse_dataset_format(const std::string& name);

/// Loads a dataset file.
///
/// JSONL: one object per line with fields start (ISO-8601 string), freq
/// (string), target (array of numbers) and optional item_id.
/// CSV: header item_id,timestamp,value with rows in chronological order
/// within each series.
///
/// season_override > 0 pins the seasonal period for every series; otherwise
/// it is derived from each series' freq code. Malformed or non-finite rows
/// raise std::runtime_error with the offending line number.
std::vector<TimeSeries> load_dataset(const std::string& path, DatasetFormat format,
                                     int season_override = 0);

/// Writes series as dataset JSONL (the load_dataset input format).
void write_jsonl(const std::vector<TimeSeries>& series, const std::string& path);

} // namespace cspbench
