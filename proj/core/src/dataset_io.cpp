#include "cspbench/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cspbench/util.hpp"

namespace cspbench {

DatasetFormat parse_dataset_format(const std::string& name) {
    if (name == "jsonl") return DatasetFormat::Jsonl;
    if (name == "csv") return DatasetFormat::Csv;
    throw std::invalid_argument("unknown dataset format '" + name + "' (expected jsonl or csv)");
}

namespace {

[[noreturn]] void fail(const std::string& path, long line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

void check_id(const std::string& path, long line, const std::string& id) {
    if (id.find(',') != std::string::npos || id.find('\n') != std::string::npos) {
        fail(path, line, "item_id must not contain commas or newlines");
    }
}

std::vector<TimeSeries> load_jsonl(const std::string& path, int season_override) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset '" + path + "'");
    }
    std::vector<TimeSeries> series;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(path, line_no, std::string("bad JSON: ") + e.what());
        }
        TimeSeries ts;
        try {
            ts.id = doc.value("item_id", "item_" + std::to_string(line_no));
            ts.start = doc.at("start").get<std::string>();
            ts.freq = doc.at("freq").get<std::string>();
            ts.values = doc.at("target").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            fail(path, line_no, std::string("bad record: ") + e.what());
        }
        check_id(path, line_no, ts.id);
        ts.season = season_override > 0 ? season_override : season_from_freq(ts.freq);
        for (double v : ts.values) {
            if (!std::isfinite(v)) {
                fail(path, line_no, "non-finite value in target");
            }
        }
        if (ts.values.empty()) {
            fail(path, line_no, "empty target");
        }
        series.push_back(std::move(ts));
    }
    if (series.empty()) {
        throw std::runtime_error(path + ": no series");
    }
    return series;
}

std::vector<TimeSeries> load_csv(const std::string& path, int season_override) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": no series");
    }
    if (split_csv_line(line) != std::vector<std::string>{"item_id", "timestamp", "value"}) {
        fail(path, 1, "expected header item_id,timestamp,value");
    }

    std::vector<TimeSeries> series;
    std::vector<std::string> last_timestamp; // parallel to series
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            fail(path, line_no, "expected 3 columns");
        }
        const std::string& id = fields[0];
        const std::string& timestamp = fields[1];
        double value = 0.0;
        try {
            value = parse_double(fields[2]);
        } catch (const std::invalid_argument& e) {
            fail(path, line_no, e.what());
        }
        if (!std::isfinite(value)) {
            fail(path, line_no, "non-finite value");
        }

        std::size_t idx = series.size();
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (series[i].id == id) {
                idx = i;
                break;
            }
        }
        if (idx == series.size()) {
            check_id(path, line_no, id);
            TimeSeries ts;
            ts.id = id;
            ts.start = timestamp;
            series.push_back(std::move(ts));
            last_timestamp.emplace_back();
        }
        // ISO-8601 timestamps of a consistent width order lexicographically
        if (!last_timestamp[idx].empty() && timestamp <= last_timestamp[idx]) {
            fail(path, line_no, "unsorted series '" + id + "'");
        }
        last_timestamp[idx] = timestamp;
        series[idx].values.push_back(value);
    }
    if (series.empty()) {
        throw std::runtime_error(path + ": no series");
    }
    for (auto& ts : series) {
        ts.season = season_override > 0 ? season_override : season_from_freq(ts.freq);
    }
    return series;
}

} // namespace

std::vector<TimeSeries> load_dataset(const std::string& path, DatasetFormat format,
                                     int season_override) {
    auto series = format == DatasetFormat::Jsonl ? load_jsonl(path, season_override)
                                                 : load_csv(path, season_override);
    for (const auto& ts : series) {
        validate_series(ts);
    }
    return series;
}

void write_jsonl(const std::vector<TimeSeries>& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    for (const auto& ts : series) {
        nlohmann::json doc;
        doc["item_id"] = ts.id;
        doc["start"] = ts.start;
        doc["freq"] = ts.freq;
        doc["target"] = ts.values;
        out << doc.dump() << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

} // namespace cspbench
