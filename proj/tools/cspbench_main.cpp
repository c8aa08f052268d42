// cspbench: training-free probabilistic forecasting and a rolling-origin
// benchmark harness behind one binary.
//
// Subcommands:
//   forecast   sample one series file with one method
//   bench      run a config-driven benchmark, write records CSV
//   report     build summary tables from records (plus optional external
//              comparator records)
//   synth      generate a synthetic JSONL dataset from a spec
//
// Exit codes: 0 success, 1 I/O or parse error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cspbench/dataset_io.hpp"
#include "cspbench/forecasters.hpp"
#include "cspbench/harness.hpp"
#include "cspbench/quantile.hpp"
#include "cspbench/summary.hpp"
#include "cspbench/synth.hpp"
#include "cspbench/util.hpp"

namespace fs = std::filesystem;
using namespace cspbench;

namespace {

struct ForecastArgs {
    std::string series_path;
    std::string format = "jsonl";
    std::string item;
    std::string method;
    int horizon = 24;
    int budget = 100;
    std::uint64_t seed = 0;
    std::uint64_t method_seed = 42;
    int season = 0;
    std::string out_dir = ".";
};

int cmd_forecast(const ForecastArgs& args) {
    Forecaster forecaster;
    try {
        forecaster = make_forecaster(args.method);
    } catch (const std::invalid_argument& e) {
        std::cerr << "cspbench forecast: " << e.what() << "\n";
        return 2;
    }

    const auto series =
        load_dataset(args.series_path, parse_dataset_format(args.format), args.season);
    const TimeSeries* chosen = &series.front();
    if (!args.item.empty()) {
        chosen = nullptr;
        for (const auto& ts : series) {
            if (ts.id == args.item) {
                chosen = &ts;
                break;
            }
        }
        if (chosen == nullptr) {
            std::cerr << "cspbench forecast: no series with item_id '" << args.item << "'\n";
            return 1;
        }
    }

    const std::string dataset_label = fs::path(args.series_path).stem().string();
    TaskRng rng = derive_rng(SeedSpec{args.seed, args.method_seed}, args.method, dataset_label,
                             chosen->id, 0);
    const SampleMatrix samples =
        forecaster(ForecastRequest{*chosen, args.horizon, args.budget, rng.method});

    fs::create_directories(args.out_dir);
    {
        std::ofstream out(fs::path(args.out_dir) / "samples.csv");
        if (!out) throw std::runtime_error("cannot write samples.csv");
        for (int h = 0; h < samples.horizon(); ++h) {
            for (int b = 0; b < samples.budget(); ++b) {
                out << (b ? "," : "") << format_double(samples.at(h, b));
            }
            out << '\n';
        }
    }
    {
        std::vector<double> levels = {0.025};
        for (double q : default_quantile_levels()) levels.push_back(q);
        levels.push_back(0.975);

        std::ofstream out(fs::path(args.out_dir) / "quantiles.csv");
        if (!out) throw std::runtime_error("cannot write quantiles.csv");
        out << "h";
        for (double q : levels) out << ",q" << format_double(q);
        out << '\n';
        for (int h = 0; h < samples.horizon(); ++h) {
            const auto qs = empirical_quantiles(samples.row(h), levels);
            out << (h + 1);
            for (double v : qs) out << ',' << format_double(v);
            out << '\n';
        }
    }
    return 0;
}

int cmd_bench(const std::string& config_path, int parallel_override,
              const std::string& out_override) {
    BenchmarkConfig config = load_config(config_path);
    if (parallel_override >= 0) {
        config.parallelism = parallel_override;
    }
    if (!out_override.empty()) {
        config.output_dir = out_override;
    }
    const BenchmarkRun run = run_benchmark(config);

    fs::create_directories(config.output_dir);
    const fs::path records_path = fs::path(config.output_dir) / "records.csv";
    write_records(run.records, records_path.string());

    if (!run.skipped.empty()) {
        std::ofstream skip_log(fs::path(config.output_dir) / "skipped.txt");
        for (const auto& line : run.skipped) {
            skip_log << line << '\n';
            std::cerr << "skipped: " << line << '\n';
        }
    }
    std::cout << run.records.size() << " records -> " << records_path.string() << "\n";
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& external_path,
               const std::string& comparisons_path, const std::string& out_dir) {
    std::vector<ForecastRecord> records = read_records(records_path);
    if (records.empty()) {
        std::cerr << "cspbench report: no records in '" << records_path << "'\n";
        return 1;
    }
    fs::create_directories(out_dir);

    if (!external_path.empty()) {
        const ImportReport report = import_external_records(external_path, records);
        if (!report.rejected.empty()) {
            std::ofstream out(fs::path(out_dir) / "external_rejections.csv");
            out << "line,reason\n";
            for (const auto& r : report.rejected) {
                out << r.line << ',' << r.reason << '\n';
            }
            std::cerr << report.rejected.size() << " external row(s) rejected; see "
                      << (fs::path(out_dir) / "external_rejections.csv").string() << "\n";
        }
        records.insert(records.end(), report.accepted.begin(), report.accepted.end());
        sort_records(records);
    }

    SummaryOptions options;
    if (!comparisons_path.empty()) {
        options.comparisons = load_comparisons(comparisons_path);
    }
    write_summary(records, out_dir, options);
    std::cout << "summary tables -> " << out_dir << "\n";
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path) {
    const SynthSpec spec = load_synth_spec(spec_path);
    std::vector<TimeSeries> series;
    try {
        series = generate_synthetic(spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "cspbench synth: " << e.what() << "\n";
        return 2;
    }
    write_jsonl(series, out_path);
    std::cout << series.size() << " series -> " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"training-free probabilistic forecasting benchmark"};
    app.require_subcommand(1);

    ForecastArgs fc;
    CLI::App* forecast = app.add_subcommand("forecast", "forecast one series from a file");
    forecast->add_option("--series", fc.series_path, "series file (jsonl or csv)")->required();
    forecast->add_option("--format", fc.format, "series file format (jsonl|csv)");
    forecast->add_option("--item", fc.item, "item_id to forecast (default: first series)");
    forecast->add_option("--method", fc.method, "forecasting method")->required();
    forecast->add_option("--horizon", fc.horizon, "forecast horizon H");
    forecast->add_option("--budget", fc.budget, "sample budget B");
    forecast->add_option("--seed", fc.seed, "driver seed");
    forecast->add_option("--method-seed", fc.method_seed, "method seed");
    forecast->add_option("--season", fc.season, "seasonal period override");
    forecast->add_option("--out", fc.out_dir, "output directory");

    std::string bench_config;
    int bench_parallel = -1;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "run a benchmark from a config file");
    bench->add_option("--config", bench_config, "benchmark config (JSON)")->required();
    bench->add_option("--parallel", bench_parallel, "parallelism degree (0 = all cores)");
    bench->add_option("--out", bench_out, "output directory override");

    std::string report_records, report_external, report_comparisons, report_out;
    CLI::App* report = app.add_subcommand("report", "summarize a records CSV");
    report->add_option("--records", report_records, "records CSV")->required();
    report->add_option("--external", report_external, "external comparator records CSV");
    report->add_option("--comparisons", report_comparisons,
                       "comparisons CSV (metric,method_a,method_b,alternative)");
    report->add_option("--out", report_out, "output directory")->required();

    std::string synth_spec, synth_out;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--spec", synth_spec, "generator spec (JSON)")->required();
    synth->add_option("--out", synth_out, "output JSONL path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (forecast->parsed()) return cmd_forecast(fc);
        if (bench->parsed()) return cmd_bench(bench_config, bench_parallel, bench_out);
        if (report->parsed()) return cmd_report(report_records, report_external,
                                                report_comparisons, report_out);
        if (synth->parsed()) return cmd_synth(synth_spec, synth_out);
    } catch (const std::exception& e) {
        std::cerr << "cspbench: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
