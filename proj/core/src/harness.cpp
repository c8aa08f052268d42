#include "cspbench/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace cspbench {

namespace {

MethodParams parse_method_params(const nlohmann::json& doc) {
    MethodParams p;
    p.csp.calib_fraction = doc.value("rho", p.csp.calib_fraction);
    p.csp.recency_rate = doc.value("lambda", p.csp.recency_rate);
    p.csp.min_pool = doc.value("min_pool", p.csp.min_pool);
    p.csp.thin_weight = doc.value("thin_weight", p.csp.thin_weight);
    p.csp.full_weight = doc.value("full_weight", p.csp.full_weight);
    p.npts_lambda = doc.value("npts_lambda", p.npts_lambda);
    p.acf_threshold = doc.value("acf_threshold", p.acf_threshold);
    p.rolling_window = doc.value("rolling_window", p.rolling_window);
    if (doc.value("normalized_ages", false)) {
        p.age_units = AgeUnits::Normalized;
    }
    if (!(p.csp.calib_fraction > 0.0 && p.csp.calib_fraction <= 1.0)) {
        throw std::runtime_error("config: rho must be in (0, 1]");
    }
    return p;
}

} // namespace

BenchmarkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config '" + path + "': " + e.what());
    }

    BenchmarkConfig config;
    try {
        if (doc.contains("seed")) {
            config.seed.driver_seed = doc["seed"].value("driver", config.seed.driver_seed);
            config.seed.method_seed = doc["seed"].value("method", config.seed.method_seed);
        }
        config.budget = doc.value("budget", config.budget);
        config.alpha = doc.value("alpha", config.alpha);
        config.output_dir = doc.value("output_dir", config.output_dir);
        config.parallelism = doc.value("parallelism", config.parallelism);
        if (doc.contains("quantile_levels")) {
            config.quantile_levels = doc["quantile_levels"].get<std::vector<double>>();
        }

        for (const auto& d : doc.at("datasets")) {
            DatasetConfig ds;
            ds.name = d.at("name").get<std::string>();
            ds.path = d.at("path").get<std::string>();
            ds.format = parse_dataset_format(d.value("format", std::string("jsonl")));
            ds.horizon = d.at("horizon").get<int>();
            ds.season_override = d.value("season", 0);
            ds.series_cap = d.value("series_cap", ds.series_cap);
            ds.window_count = d.value("windows", ds.window_count);
            ds.min_history = d.value("min_history", ds.min_history);
            if (ds.horizon < 1 || ds.window_count < 1) {
                throw std::runtime_error("config: horizon and windows must be >= 1");
            }
            config.datasets.push_back(std::move(ds));
        }

        std::set<std::string> seen;
        for (const auto& m : doc.at("methods")) {
            MethodConfig mc;
            if (m.is_string()) {
                mc.name = m.get<std::string>();
            } else {
                mc.name = m.at("name").get<std::string>();
                if (m.contains("params")) {
                    mc.params = parse_method_params(m["params"]);
                }
            }
            if (!seen.insert(mc.name).second) {
                throw std::runtime_error("config: duplicate method '" + mc.name + "'");
            }
            make_forecaster(mc.name, mc.params); // validates the name early
            config.methods.push_back(std::move(mc));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config '" + path + "': " + e.what());
    }

    if (config.datasets.empty() || config.methods.empty()) {
        throw std::runtime_error("config: need at least one dataset and one method");
    }
    if (config.budget < 2) {
        throw std::runtime_error("config: budget must be >= 2");
    }
    if (config.quantile_levels.empty()) {
        config.quantile_levels = default_quantile_levels();
    }
    return config;
}

std::vector<WindowSpec> rolling_windows(const TimeSeries& series, int horizon, int window_count,
                                        long min_history) {
    if (window_count < 1) {
        throw std::invalid_argument("rolling_windows: window count must be >= 1");
    }
    if (min_history <= 0) {
        min_history = horizon + 10;
    }
    const long T = series.length();
    std::vector<WindowSpec> windows;
    for (int k = window_count - 1; k >= 0; --k) { // chronological order
        WindowSpec w;
        w.index = k;
        w.history_len = T - static_cast<long>(k + 1) * horizon;
        w.target_begin = w.history_len;
        w.target_end = T - static_cast<long>(k) * horizon;
        if (w.history_len >= min_history) {
            windows.push_back(w);
        }
    }
    return windows;
}

namespace {

struct Task {
    const DatasetConfig* dataset = nullptr;
    const TimeSeries* series = nullptr;
    WindowSpec window;
    const MethodConfig* method = nullptr;
};

ForecastRecord evaluate_task(const Task& task, const BenchmarkConfig& config) {
    ForecastRecord record;
    record.dataset = task.dataset->name;
    record.series_id = task.series->id;
    record.window = task.window.index;
    record.method = task.method->name;
    record.driver_seed = config.seed.driver_seed;
    record.method_seed = config.seed.method_seed;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    record.crps = record.mql_norm = record.coverage95 = record.width95 = nan;

    try {
        const TimeSeries history = series_prefix(*task.series, task.window.history_len);
        TaskRng rng = derive_rng(config.seed, task.method->name, task.dataset->name,
                                 task.series->id, task.window.index);
        const Forecaster forecaster = make_forecaster(task.method->name, task.method->params);
        const ForecastRequest request{history, task.dataset->horizon, config.budget, rng.method};

        const auto start = std::chrono::steady_clock::now();
        const SampleMatrix samples = forecaster(request);
        const auto stop = std::chrono::steady_clock::now();
        record.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();

        const std::span<const double> targets(
            task.series->values.data() + task.window.target_begin,
            static_cast<std::size_t>(task.window.target_end - task.window.target_begin));
        const WindowScores scores =
            score_window(samples, targets, config.quantile_levels, config.alpha);

        record.crps = scores.crps;
        record.mql_norm = scores.mql_norm;
        record.coverage95 = scores.coverage;
        record.width95 = scores.width;
        if (scores.zero_scale) {
            record.flags = "zero_scale";
        }
    } catch (const std::exception& e) {
        std::string reason = e.what();
        for (char& c : reason) {
            if (c == ',' || c == '\n') c = ' ';
        }
        record.flags = "error:" + reason;
    }
    return record;
}

} // namespace

BenchmarkRun run_benchmark(const BenchmarkConfig& config) {
    BenchmarkRun run;

    // materialize datasets and the task list up front
    std::vector<std::vector<TimeSeries>> datasets;
    datasets.reserve(config.datasets.size());
    for (const auto& ds : config.datasets) {
        auto series = load_dataset(ds.path, ds.format, ds.season_override);
        if (static_cast<int>(series.size()) > ds.series_cap) {
            series.resize(static_cast<std::size_t>(ds.series_cap));
        }
        datasets.push_back(std::move(series));
    }

    std::vector<Task> tasks;
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        const auto& ds = config.datasets[d];
        for (const auto& series : datasets[d]) {
            const auto windows =
                rolling_windows(series, ds.horizon, ds.window_count, ds.min_history);
            if (windows.empty()) {
                run.skipped.push_back("dataset=" + ds.name + " series=" + series.id +
                                      " reason=no surviving windows");
                continue;
            }
            for (const auto& window : windows) {
                for (const auto& method : config.methods) {
                    tasks.push_back(Task{&ds, &series, window, &method});
                }
            }
        }
    }

    std::vector<ForecastRecord> records(tasks.size());
    int threads = config.parallelism;
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min<int>(threads, static_cast<int>(tasks.size()) == 0 ? 1
                                                                         : static_cast<int>(tasks.size()));

    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            records[i] = evaluate_task(tasks[i], config);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) {
                        return;
                    }
                    records[i] = evaluate_task(tasks[i], config);
                }
            });
        }
        for (auto& worker : pool) {
            worker.join();
        }
    }

    sort_records(records);
    run.records = std::move(records);
    return run;
}

} // namespace cspbench
