#include "cspbench/records.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>

#include "cspbench/util.hpp"

namespace cspbench {

const char* const kRecordsHeader =
    "dataset,series_id,window,method,crps,mql_norm,coverage95,width95,wall_ms,"
    "driver_seed,method_seed,flags";

namespace {

auto record_key(const ForecastRecord& r) {
    return std::tie(r.dataset, r.series_id, r.window, r.method);
}

} // namespace

void sort_records(std::vector<ForecastRecord>& records) {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return record_key(a) < record_key(b);
    });
}

void write_records(const std::vector<ForecastRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << r.dataset << ',' << r.series_id << ',' << r.window << ',' << r.method << ','
            << format_double(r.crps) << ',' << format_double(r.mql_norm) << ','
            << format_double(r.coverage95) << ',' << format_double(r.width95) << ','
            << format_double(r.wall_ms) << ',' << r.driver_seed << ',' << r.method_seed << ','
            << r.flags << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

std::vector<ForecastRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open records '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader) {
        throw std::runtime_error(path + ":1: bad records header");
    }
    std::vector<ForecastRecord> records;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 12) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 12 columns");
        }
        ForecastRecord r;
        try {
            r.dataset = fields[0];
            r.series_id = fields[1];
            r.window = static_cast<int>(parse_long(fields[2]));
            r.method = fields[3];
            r.crps = parse_double(fields[4]);
            r.mql_norm = parse_double(fields[5]);
            r.coverage95 = parse_double(fields[6]);
            r.width95 = parse_double(fields[7]);
            r.wall_ms = parse_double(fields[8]);
            r.driver_seed = parse_u64(fields[9]);
            r.method_seed = parse_u64(fields[10]);
            r.flags = fields[11];
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    return records;
}

ImportReport import_external_records(const std::string& path,
                                     const std::vector<ForecastRecord>& internal) {
    std::set<std::tuple<std::string, std::string, int>> known_keys;
    std::set<std::tuple<std::string, std::string, int, std::string>> used;
    for (const auto& r : internal) {
        known_keys.emplace(r.dataset, r.series_id, r.window);
        if (!used.emplace(r.dataset, r.series_id, r.window, r.method).second) {
            throw std::runtime_error("duplicate record: " + r.dataset + "/" + r.series_id +
                                     "/" + std::to_string(r.window) + "/" + r.method);
        }
    }

    ImportReport report;
    const auto rows = read_records(path);
    long line_no = 1; // header
    for (const auto& r : rows) {
        ++line_no;
        const auto key = std::make_tuple(r.dataset, r.series_id, r.window);
        if (known_keys.find(key) == known_keys.end()) {
            report.rejected.push_back(
                {line_no, "unknown (dataset, series, window) key: " + r.dataset + "/" +
                              r.series_id + "/" + std::to_string(r.window)});
            continue;
        }
        if (!r.flagged() &&
            (!std::isfinite(r.crps) || !std::isfinite(r.mql_norm) ||
             !std::isfinite(r.coverage95) || !std::isfinite(r.width95))) {
            report.rejected.push_back({line_no, "non-finite metrics without a flag"});
            continue;
        }
        if (!used.emplace(r.dataset, r.series_id, r.window, r.method).second) {
            throw std::runtime_error("duplicate record: " + r.dataset + "/" + r.series_id +
                                     "/" + std::to_string(r.window) + "/" + r.method);
        }
        report.accepted.push_back(r);
    }
    return report;
}

} // namespace cspbench
