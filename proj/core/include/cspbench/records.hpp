#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cspbench {

/// One (dataset, series, window, method) evaluation row; the benchmark's
/// atomic result. Metric fields are NaN when `flags` marks them unusable.
struct ForecastRecord {
    std::string dataset;
    std::string series_id;
    int window = 0;
    std::string method;
    double crps = 0.0;
    double mql_norm = 0.0;
    double coverage95 = 0.0;
    double width95 = 0.0;
    double wall_ms = 0.0;
    std::uint64_t driver_seed = 0;
    std::uint64_t method_seed = 0;
    std::string flags; // ';'-separated, empty when clean

    bool flagged() const { return !flags.empty(); }
};

/// Stable records CSV column order.
extern const char* const kRecordsHeader;

/// Canonical (dataset, series_id, window, method) ordering used for all
/// record output so reruns are byte-comparable.
void sort_records(std::vector<ForecastRecord>& records);

void write_records(const std::vector<ForecastRecord>& records, const std::string& path);

/// Reads a records CSV; throws std::runtime_error with a line number on any
/// malformed row.
std::vector<ForecastRecord> read_records(const std::string& path);

/// External comparator import (e.g. scores produced by a neural method
/// outside this artifact). Rows whose (dataset, series, window) key does not
/// match an internal record are rejected with a reason, never silently
/// dropped; a duplicate (key, method) row raises std::runtime_error.
struct ImportReport {
    std::vector<ForecastRecord> accepted;
    struct Rejection {
        long line = 0;
        std::string reason;
    };
    std::vector<Rejection> rejected;
};

ImportReport import_external_records(const std::string& path,
                                     const std::vector<ForecastRecord>& internal);

} // namespace cspbench
