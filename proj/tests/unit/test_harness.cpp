#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "cspbench/harness.hpp"
#include "cspbench/summary.hpp"
#include "cspbench/synth.hpp"
#include "cspbench/util.hpp"

using namespace cspbench;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("cspbench_unit_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

BenchmarkConfig small_config(const fs::path& dir) {
    // two synthetic datasets, three series each, exactly two windows
    for (const char* name : {"alpha", "beta"}) {
        SynthSpec spec;
        spec.name = name;
        spec.family = "sinusoid";
        spec.n_series = 3;
        spec.length = 30;
        spec.period = 6.0;
        spec.season = 6;
        spec.freq = "";
        spec.seed = name[0];
        write_jsonl(generate_synthetic(spec), (dir / (std::string(name) + ".jsonl")).string());
    }
    BenchmarkConfig config;
    for (const char* name : {"alpha", "beta"}) {
        DatasetConfig ds;
        ds.name = name;
        ds.path = (dir / (std::string(name) + ".jsonl")).string();
        ds.horizon = 6;
        ds.season_override = 6;
        ds.window_count = 2;
        config.datasets.push_back(ds);
    }
    for (const char* method : {"csp-adaptive", "csp-fixed", "npts", "empirical-full"}) {
        config.methods.push_back({method, MethodParams{}});
    }
    config.budget = 20;
    config.quantile_levels = default_quantile_levels();
    return config;
}

std::string records_without_wall(const std::vector<ForecastRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += r.dataset + "|" + r.series_id + "|" + std::to_string(r.window) + "|" + r.method +
               "|" + format_double(r.crps) + "|" + format_double(r.mql_norm) + "|" +
               format_double(r.coverage95) + "|" + format_double(r.width95) + "|" + r.flags + "\n";
    }
    return out;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("rolling windows drop short histories") {
    TimeSeries ts;
    ts.id = "s";
    ts.season = 24;
    ts.values.resize(100, 1.0);
    const auto windows = rolling_windows(ts, 24, 3, 34);
    REQUIRE(windows.size() == 2);
    // chronological order: earliest targets first
    CHECK(windows[0].index == 1);
    CHECK(windows[0].history_len == 52);
    CHECK(windows[1].index == 0);
    CHECK(windows[1].history_len == 76);
}

TEST_CASE("series too short for a single window is skipped") {
    TimeSeries ts;
    ts.id = "s";
    ts.values.resize(48, 1.0);
    CHECK(rolling_windows(ts, 24, 1, 34).empty());
}

TEST_CASE("window targets are disjoint and abut") {
    TimeSeries ts;
    ts.id = "s";
    ts.values.resize(200, 1.0);
    const auto windows = rolling_windows(ts, 24, 5, 0);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        CHECK(windows[i].target_end - windows[i].target_begin == 24);
        CHECK(windows[i].target_begin == windows[i].history_len);
        if (i > 0) {
            CHECK(windows[i].target_begin == windows[i - 1].target_end);
        }
    }
}

TEST_CASE("jsonl round trip and season assignment") {
    const fs::path dir = temp_dir("jsonl");
    write_file(dir / "data.jsonl",
               R"({"item_id": "a", "start": "2012-01-01T00:00:00", "freq": "H", "target": [1, 2, 3, 4, 5]})"
               "\n"
               R"({"start": "2012-01-01T00:00:00", "freq": "D", "target": [1.5, 2.5]})"
               "\n");
    const auto series = load_dataset((dir / "data.jsonl").string(), DatasetFormat::Jsonl);
    REQUIRE(series.size() == 2);
    CHECK(series[0].id == "a");
    CHECK(series[0].length() == 5);
    CHECK(series[0].season == 24);
    CHECK(series[1].id == "item_2"); // item_id defaulted from the line number
    CHECK(series[1].season == 7);

    const auto pinned = load_dataset((dir / "data.jsonl").string(), DatasetFormat::Jsonl, 12);
    CHECK(pinned[0].season == 12);
    CHECK(pinned[1].season == 12);
}

TEST_CASE("jsonl parse errors carry line numbers") {
    const fs::path dir = temp_dir("jsonl_bad");
    write_file(dir / "bad.jsonl",
               R"({"start": "2012-01-01", "freq": "H", "target": [1]})"
               "\n"
               "{nonsense\n");
    CHECK_THROWS_WITH_AS(load_dataset((dir / "bad.jsonl").string(), DatasetFormat::Jsonl),
                         doctest::Contains(":2:"), std::runtime_error);

    write_file(dir / "nan.jsonl", R"({"start": "x", "freq": "H", "target": [1, null]})" "\n");
    CHECK_THROWS_AS(load_dataset((dir / "nan.jsonl").string(), DatasetFormat::Jsonl),
                    std::runtime_error);

    write_file(dir / "empty.jsonl", "");
    CHECK_THROWS_WITH_AS(load_dataset((dir / "empty.jsonl").string(), DatasetFormat::Jsonl),
                         doctest::Contains("no series"), std::runtime_error);
}

TEST_CASE("csv loading checks order") {
    const fs::path dir = temp_dir("csv");
    write_file(dir / "ok.csv",
               "item_id,timestamp,value\n"
               "a,2012-01-01T00:00:00,1.5\n"
               "a,2012-01-01T01:00:00,2.5\n"
               "b,2012-01-01T00:00:00,9\n");
    const auto series = load_dataset((dir / "ok.csv").string(), DatasetFormat::Csv, 24);
    REQUIRE(series.size() == 2);
    CHECK(series[0].values == std::vector<double>{1.5, 2.5});
    CHECK(series[1].values == std::vector<double>{9.0});
    CHECK(series[0].season == 24);

    write_file(dir / "unsorted.csv",
               "item_id,timestamp,value\n"
               "a,2012-01-01T01:00:00,1\n"
               "a,2012-01-01T00:00:00,2\n");
    CHECK_THROWS_WITH_AS(load_dataset((dir / "unsorted.csv").string(), DatasetFormat::Csv),
                         doctest::Contains("unsorted"), std::runtime_error);
}

TEST_CASE("benchmark produces the full cartesian record set") {
    const fs::path dir = temp_dir("bench");
    BenchmarkConfig config = small_config(dir);
    config.parallelism = 1;
    const BenchmarkRun run = run_benchmark(config);

    // 2 datasets x 3 series x 2 windows x 4 methods
    CHECK(run.records.size() == 48);
    CHECK(run.skipped.empty());

    std::map<std::tuple<std::string, std::string, int>, std::set<std::string>> methods_at;
    for (const auto& r : run.records) {
        CHECK_FALSE(r.flagged());
        CHECK(std::isfinite(r.crps));
        methods_at[{r.dataset, r.series_id, r.window}].insert(r.method);
    }
    CHECK(methods_at.size() == 12);
    for (const auto& [key, methods] : methods_at) {
        CHECK(methods.size() == 4);
    }
}

TEST_CASE("benchmark reruns and parallelism leave records unchanged") {
    const fs::path dir = temp_dir("bench_repeat");
    BenchmarkConfig config = small_config(dir);
    config.parallelism = 1;
    const std::string serial = records_without_wall(run_benchmark(config).records);
    const std::string serial_again = records_without_wall(run_benchmark(config).records);
    config.parallelism = 8;
    const std::string parallel = records_without_wall(run_benchmark(config).records);
    CHECK(serial == serial_again);
    CHECK(serial == parallel);
}

TEST_CASE("records csv round trips exactly") {
    const fs::path dir = temp_dir("records");
    BenchmarkConfig config = small_config(dir);
    const auto records = run_benchmark(config).records;
    const std::string path = (dir / "records.csv").string();
    write_records(records, path);
    const auto loaded = read_records(path);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].dataset == records[i].dataset);
        CHECK(loaded[i].method == records[i].method);
        CHECK(loaded[i].crps == records[i].crps);
        CHECK(loaded[i].mql_norm == records[i].mql_norm);
        CHECK(loaded[i].coverage95 == records[i].coverage95);
        CHECK(loaded[i].width95 == records[i].width95);
        CHECK(loaded[i].wall_ms == records[i].wall_ms);
        CHECK(loaded[i].flags == records[i].flags);
    }
}

TEST_CASE("zero-scale windows are flagged, not fatal") {
    const fs::path dir = temp_dir("zero_scale");
    // constant-zero series: every target window sums to zero
    std::string line = R"({"item_id": "z", "start": "2012-01-01", "freq": "", "target": [)";
    for (int i = 0; i < 30; ++i) {
        line += i ? ",0" : "0";
    }
    line += "]}\n";
    write_file(dir / "zero.jsonl", line);

    BenchmarkConfig config;
    DatasetConfig ds;
    ds.name = "zeros";
    ds.path = (dir / "zero.jsonl").string();
    ds.horizon = 6;
    ds.window_count = 1;
    config.datasets.push_back(ds);
    config.methods.push_back({"empirical-full", MethodParams{}});
    config.budget = 10;
    const auto run = run_benchmark(config);
    REQUIRE(run.records.size() == 1);
    CHECK(run.records[0].flags == "zero_scale");
    CHECK(std::isnan(run.records[0].mql_norm));
    CHECK(run.records[0].crps == 0.0); // constant forecast equals the target
}

TEST_CASE("external records merge with pairing checks") {
    const fs::path dir = temp_dir("external");
    BenchmarkConfig config = small_config(dir);
    auto internal = run_benchmark(config).records;

    // build an external file: one valid row per existing window for a new
    // method, plus one row with an unknown key
    std::vector<ForecastRecord> external;
    std::set<std::tuple<std::string, std::string, int>> keys;
    for (const auto& r : internal) {
        if (keys.emplace(r.dataset, r.series_id, r.window).second) {
            ForecastRecord e = r;
            e.method = "external-npts";
            e.crps = r.crps * 1.5;
            external.push_back(e);
        }
    }
    ForecastRecord unknown = external.front();
    unknown.dataset = "mystery";
    external.push_back(unknown);

    const std::string path = (dir / "external.csv").string();
    write_records(external, path);
    const ImportReport report = import_external_records(path, internal);
    CHECK(report.accepted.size() == 12);
    REQUIRE(report.rejected.size() == 1);
    CHECK(report.rejected[0].reason.find("mystery") != std::string::npos);

    // duplicate (key, method) rows are an error
    std::vector<ForecastRecord> dupes = {internal.front(), internal.front()};
    const std::string dupe_path = (dir / "dupes.csv").string();
    write_records(dupes, dupe_path);
    CHECK_THROWS_WITH_AS(import_external_records(dupe_path, internal),
                         doctest::Contains("duplicate record"), std::runtime_error);
}

TEST_CASE("summary tables recompute identically from persisted records") {
    const fs::path dir = temp_dir("summary_roundtrip");
    BenchmarkConfig config = small_config(dir);
    const auto records = run_benchmark(config).records;

    write_summary(records, (dir / "direct").string());
    const std::string path = (dir / "records.csv").string();
    write_records(records, path);
    write_summary(read_records(path), (dir / "reloaded").string());

    for (const auto& name : summary_file_names()) {
        std::ifstream a(dir / "direct" / name);
        std::ifstream b(dir / "reloaded" / name);
        REQUIRE(a);
        REQUIRE(b);
        const std::string ca((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        const std::string cb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        CHECK(ca == cb);
        CHECK_FALSE(ca.empty());
    }
}

TEST_CASE("summary handles a single-method record set") {
    const fs::path dir = temp_dir("summary_single");
    BenchmarkConfig config = small_config(dir);
    config.methods.resize(1);
    const auto records = run_benchmark(config).records;
    REQUIRE(records.size() == 12);
    write_summary(records, (dir / "summary").string());
    for (const auto& name : summary_file_names()) {
        CHECK(fs::exists(dir / "summary" / name));
    }
    // coverage and wall time still aggregate; rank columns stay empty-safe
    std::ifstream acc(dir / "summary" / "accuracy.csv");
    std::string header, row;
    REQUIRE(std::getline(acc, header));
    REQUIRE(std::getline(acc, row));
    CHECK(row.find("csp-adaptive") == 0);
}

TEST_CASE("config parsing validates methods and datasets") {
    const fs::path dir = temp_dir("config");
    write_file(dir / "data.jsonl", R"({"start": "x", "freq": "H", "target": [1,2,3]})" "\n");
    const std::string dataset_path = (dir / "data.jsonl").string();

    write_file(dir / "good.json", std::string(R"({
      "seed": {"driver": 0, "method": 42},
      "budget": 50,
      "datasets": [{"name": "d", "path": ")") + dataset_path + R"(", "horizon": 4, "windows": 2}],
      "methods": ["csp-adaptive", {"name": "npts", "params": {"npts_lambda": 0.05}}]
    })");
    const BenchmarkConfig config = load_config((dir / "good.json").string());
    CHECK(config.budget == 50);
    CHECK(config.methods.size() == 2);
    CHECK(config.methods[1].params.npts_lambda == doctest::Approx(0.05));
    CHECK(config.quantile_levels.size() == 9);

    write_file(dir / "bad_method.json", std::string(R"({
      "datasets": [{"name": "d", "path": ")") + dataset_path + R"(", "horizon": 4}],
      "methods": ["not-a-method"]
    })");
    CHECK_THROWS_AS(load_config((dir / "bad_method.json").string()), std::exception);

    write_file(dir / "dupe_method.json", std::string(R"({
      "datasets": [{"name": "d", "path": ")") + dataset_path + R"(", "horizon": 4}],
      "methods": ["npts", "npts"]
    })");
    CHECK_THROWS_WITH_AS(load_config((dir / "dupe_method.json").string()),
                         doctest::Contains("duplicate method"), std::runtime_error);
}

} // TEST_SUITE
