#include "cspbench/summary.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "cspbench/util.hpp"

namespace cspbench {

namespace {

using WindowKey = std::tuple<std::string, std::string, int>; // dataset, series, window

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    long n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
    double stddev() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) /
                                           static_cast<double>(n - 1)));
    }
};

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) {
        throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    }
    return out;
}

struct Analysis {
    std::vector<std::string> methods;
    std::set<std::string> datasets;
    // clean records per window key
    std::map<WindowKey, std::map<std::string, const ForecastRecord*>> by_window;
    std::vector<WindowKey> complete_keys; // every method clean
    std::map<std::string, long> incomplete_per_dataset;
    std::map<std::string, std::map<std::string, long>> non_normalizable; // metric -> dataset -> n
};

Analysis analyze(const std::vector<ForecastRecord>& records) {
    Analysis a;
    std::set<std::string> methods;
    for (const auto& r : records) {
        methods.insert(r.method);
        a.datasets.insert(r.dataset);
        if (!r.flagged()) {
            a.by_window[{r.dataset, r.series_id, r.window}][r.method] = &r;
        }
    }
    a.methods.assign(methods.begin(), methods.end());
    for (const auto& [key, row] : a.by_window) {
        if (row.size() == a.methods.size()) {
            a.complete_keys.push_back(key);
        } else {
            ++a.incomplete_per_dataset[std::get<0>(key)];
        }
    }
    return a;
}

double metric_of(const ForecastRecord& r, const std::string& metric) {
    if (metric == "crps") return r.crps;
    if (metric == "mql_norm") return r.mql_norm;
    if (metric == "coverage95") return r.coverage95;
    if (metric == "width95") return r.width95;
    throw std::invalid_argument("unknown metric '" + metric + "'");
}

std::string alternative_name(Alternative alt) {
    switch (alt) {
    case Alternative::Less: return "less";
    case Alternative::Greater: return "greater";
    case Alternative::TwoSided: return "two-sided";
    }
    return "?";
}

Alternative parse_alternative(const std::string& name) {
    if (name == "less") return Alternative::Less;
    if (name == "greater") return Alternative::Greater;
    if (name == "two-sided" || name == "two_sided") return Alternative::TwoSided;
    throw std::runtime_error("unknown alternative '" + name + "'");
}

} // namespace

const std::vector<std::string>& summary_file_names() {
    static const std::vector<std::string> names = {
        "accuracy.csv",       "rank_bands.csv", "head_to_head.csv",
        "absolute_scores.csv", "wilcoxon.csv",   "walltime.csv",
        "coverage_windows.csv", "data_quality.csv",
    };
    return names;
}

void write_summary(const std::vector<ForecastRecord>& records, const std::string& out_dir,
                   const SummaryOptions& options) {
    if (records.empty()) {
        throw std::runtime_error("write_summary: no records");
    }
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    Analysis a = analyze(records);

    // ----- per-window ranks and normalized scores over complete keys -----
    std::map<std::string, std::vector<double>> crps_ranks, mql_ranks;
    std::map<std::string, Accumulator> crps_norm;
    std::map<std::string, Accumulator> coverage_acc, mql_raw;
    // per dataset: method -> mean builders for head-to-head and wins
    std::map<std::string, std::map<std::string, Accumulator>> ds_crps, ds_mql;
    std::map<std::string, std::map<std::string, std::vector<double>>> ds_crps_rank, ds_mql_rank;

    const bool comparable = a.methods.size() >= 2; // ranks need at least two methods
    for (const auto& key : a.complete_keys) {
        const auto& row = a.by_window[key];
        const std::string& dataset = std::get<0>(key);

        std::map<std::string, double> crps_scores, mql_scores;
        for (const auto& [method, rec] : row) {
            crps_scores[method] = rec->crps;
            mql_scores[method] = rec->mql_norm;
            coverage_acc[method].add(rec->coverage95);
            mql_raw[method].add(rec->mql_norm);
            ds_crps[dataset][method].add(rec->crps);
            ds_mql[dataset][method].add(rec->mql_norm);
        }
        if (!comparable) {
            continue;
        }

        for (const auto& [method, rank] : per_window_ranks(crps_scores)) {
            crps_ranks[method].push_back(rank);
            ds_crps_rank[dataset][method].push_back(rank);
        }
        for (const auto& [method, rank] : per_window_ranks(mql_scores)) {
            mql_ranks[method].push_back(rank);
            ds_mql_rank[dataset][method].push_back(rank);
        }

        if (auto normed = normalize_by_window_median(crps_scores)) {
            for (const auto& [method, v] : *normed) crps_norm[method].add(v);
        } else {
            ++a.non_normalizable["crps"][dataset];
        }
        if (!normalize_by_window_median(mql_scores)) {
            ++a.non_normalizable["mql_norm"][dataset];
        }
    }

    // dataset-level rank-1 wins (strictly best mean per-window rank)
    std::map<std::string, int> crps_wins, mql_wins;
    auto add_wins = [](const std::map<std::string, std::map<std::string, std::vector<double>>>& per_ds,
                       std::map<std::string, int>& wins) {
        for (const auto& [dataset, ranks] : per_ds) {
            std::string best;
            double best_mean = 0.0;
            bool tie = false;
            for (const auto& [method, rs] : ranks) {
                double mean = 0.0;
                for (double r : rs) mean += r;
                mean /= static_cast<double>(rs.size());
                if (best.empty() || mean < best_mean) {
                    best = method;
                    best_mean = mean;
                    tie = false;
                } else if (mean == best_mean) {
                    tie = true;
                }
            }
            if (!best.empty() && !tie) {
                ++wins[best];
            }
        }
    };
    add_wins(ds_crps_rank, crps_wins);
    add_wins(ds_mql_rank, mql_wins);

    // wall time over every record of the method (timing is run-wide)
    std::map<std::string, double> wall_ms_total;
    std::map<std::string, long> record_count;
    for (const auto& r : records) {
        if (std::isfinite(r.wall_ms)) {
            wall_ms_total[r.method] += r.wall_ms;
        }
        ++record_count[r.method];
    }

    // ----- accuracy.csv -----
    {
        auto out = open_out(dir, "accuracy.csv");
        out << "method,crps_rank_mean,crps_wins,mql_rank_mean,mql_wins,coverage_mean,"
               "coverage_std,wall_min\n";
        std::vector<std::pair<double, std::string>> order;
        for (const auto& method : a.methods) {
            double mean = 0.0;
            const auto& rs = crps_ranks[method];
            for (double r : rs) mean += r;
            if (!rs.empty()) mean /= static_cast<double>(rs.size());
            order.emplace_back(mean, method);
        }
        std::sort(order.begin(), order.end());
        for (const auto& [crps_rank_mean, method] : order) {
            double mql_rank_mean = 0.0;
            const auto& rs = mql_ranks[method];
            for (double r : rs) mql_rank_mean += r;
            if (!rs.empty()) mql_rank_mean /= static_cast<double>(rs.size());
            out << method << ',' << format_double(crps_rank_mean) << ',' << crps_wins[method]
                << ',' << format_double(mql_rank_mean) << ',' << mql_wins[method] << ','
                << format_double(coverage_acc[method].mean()) << ','
                << format_double(coverage_acc[method].stddev()) << ','
                << format_double(wall_ms_total[method] / 60000.0) << '\n';
        }
    }

    // ----- rank_bands.csv -----
    {
        auto out = open_out(dir, "rank_bands.csv");
        out << "metric,method,R1,R2,R3,R4,R5_6,total\n";
        auto emit = [&](const std::string& metric,
                        std::map<std::string, std::vector<double>>& ranks) {
            for (const auto& method : a.methods) {
                const RankBands bands = rank_distribution(ranks[method]);
                out << metric << ',' << method << ',' << format_double(bands.r1) << ','
                    << format_double(bands.r2) << ',' << format_double(bands.r3) << ','
                    << format_double(bands.r4) << ',' << format_double(bands.r5_6) << ','
                    << format_double(bands.total()) << '\n';
            }
        };
        emit("crps", crps_ranks);
        emit("mql", mql_ranks);
    }

    // ----- head_to_head.csv -----
    {
        auto out = open_out(dir, "head_to_head.csv");
        out << "metric,method_a,method_b,wins_a,wins_b,ties,datasets\n";
        auto emit = [&](const std::string& metric,
                        const std::map<std::string, std::map<std::string, Accumulator>>& per_ds) {
            std::map<std::string, std::map<std::string, double>> means;
            for (const auto& [dataset, methods] : per_ds) {
                for (const auto& [method, acc] : methods) {
                    means[dataset][method] = acc.mean();
                }
            }
            for (std::size_t i = 0; i < a.methods.size(); ++i) {
                for (std::size_t j = i + 1; j < a.methods.size(); ++j) {
                    const HeadToHead h2h = head_to_head(means, a.methods[i], a.methods[j]);
                    out << metric << ',' << a.methods[i] << ',' << a.methods[j] << ','
                        << h2h.wins_a << ',' << h2h.wins_b << ',' << h2h.ties << ','
                        << means.size() << '\n';
                }
            }
        };
        if (!a.complete_keys.empty()) {
            emit("crps", ds_crps);
            emit("mql", ds_mql);
        }
    }

    // ----- absolute_scores.csv -----
    {
        auto out = open_out(dir, "absolute_scores.csv");
        out << "method,crps_norm_mean,crps_norm_std,mql_norm_mean,mql_norm_std,coverage_mean\n";
        for (const auto& method : a.methods) {
            out << method << ',' << format_double(crps_norm[method].mean()) << ','
                << format_double(crps_norm[method].stddev()) << ','
                << format_double(mql_raw[method].mean()) << ','
                << format_double(mql_raw[method].stddev()) << ','
                << format_double(coverage_acc[method].mean()) << '\n';
        }
    }

    // ----- wilcoxon.csv -----
    {
        auto out = open_out(dir, "wilcoxon.csv");
        out << "metric,method_a,method_b,alternative,n,w_plus,p_value,mode\n";

        std::vector<ComparisonSpec> comparisons = options.comparisons;
        if (comparisons.empty()) {
            for (const auto& ma : a.methods) {
                for (const auto& mb : a.methods) {
                    if (ma == mb) continue;
                    comparisons.push_back({"crps_median_norm", ma, mb, Alternative::Less});
                    comparisons.push_back({"mql_median_norm", ma, mb, Alternative::Less});
                    comparisons.push_back({"coverage95", ma, mb, Alternative::Greater});
                }
            }
        }

        for (const auto& cmp : comparisons) {
            const bool normalized = cmp.metric == "crps_median_norm" || cmp.metric == "mql_median_norm";
            const std::string base_metric = cmp.metric == "crps_median_norm" ? "crps"
                                            : cmp.metric == "mql_median_norm" ? "mql_norm"
                                                                              : cmp.metric;
            PairedSample paired{cmp.method_a, cmp.method_b, {}};
            for (const auto& [key, row] : a.by_window) {
                const auto it_a = row.find(cmp.method_a);
                const auto it_b = row.find(cmp.method_b);
                if (it_a == row.end() || it_b == row.end()) {
                    continue;
                }
                double va = metric_of(*it_a->second, base_metric);
                double vb = metric_of(*it_b->second, base_metric);
                if (normalized) {
                    std::map<std::string, double> scores;
                    for (const auto& [method, rec] : row) {
                        scores[method] = metric_of(*rec, base_metric);
                    }
                    const auto normed = normalize_by_window_median(scores);
                    if (!normed) {
                        continue;
                    }
                    va = normed->at(cmp.method_a);
                    vb = normed->at(cmp.method_b);
                }
                paired.diffs.push_back(va - vb);
            }
            out << cmp.metric << ',' << cmp.method_a << ',' << cmp.method_b << ','
                << alternative_name(cmp.alternative) << ',';
            try {
                const WilcoxonResult res = wilcoxon_signed_rank(paired, cmp.alternative);
                out << res.n << ',' << format_double(res.w_plus) << ','
                    << format_double(res.p_value) << ',' << (res.exact ? "exact" : "normal")
                    << '\n';
            } catch (const std::invalid_argument&) {
                out << paired.diffs.size() << ",nan,nan,degenerate\n";
            }
        }
    }

    // ----- walltime.csv -----
    {
        auto out = open_out(dir, "walltime.csv");
        out << "method,wall_min,rows,sec_per_row,slowdown_vs_fastest\n";
        double fastest = 0.0;
        std::map<std::string, double> sec_per_row;
        for (const auto& method : a.methods) {
            const long rows = record_count[method];
            const double spr = rows > 0 ? wall_ms_total[method] / 1000.0 / static_cast<double>(rows) : 0.0;
            sec_per_row[method] = spr;
            if (fastest == 0.0 || (spr > 0.0 && spr < fastest)) {
                fastest = spr;
            }
        }
        for (const auto& method : a.methods) {
            const double spr = sec_per_row[method];
            out << method << ',' << format_double(wall_ms_total[method] / 60000.0) << ','
                << record_count[method] << ',' << format_double(spr) << ','
                << format_double(fastest > 0.0 ? spr / fastest : 1.0) << '\n';
        }
    }

    // ----- coverage_windows.csv -----
    {
        auto out = open_out(dir, "coverage_windows.csv");
        out << "method,dataset,series_id,window,coverage95\n";
        for (const auto& r : records) {
            if (r.flagged()) continue;
            out << r.method << ',' << r.dataset << ',' << r.series_id << ',' << r.window << ','
                << format_double(r.coverage95) << '\n';
        }
    }

    // ----- data_quality.csv -----
    {
        auto out = open_out(dir, "data_quality.csv");
        out << "kind,dataset,method,detail,count\n";
        std::map<std::tuple<std::string, std::string, std::string>, long> flagged;
        for (const auto& r : records) {
            if (r.flagged()) {
                ++flagged[{r.dataset, r.method, r.flags}];
            }
        }
        for (const auto& [key, count] : flagged) {
            out << "flagged_record," << std::get<0>(key) << ',' << std::get<1>(key) << ','
                << std::get<2>(key) << ',' << count << '\n';
        }
        for (const auto& [dataset, count] : a.incomplete_per_dataset) {
            out << "incomplete_window," << dataset << ",,," << count << '\n';
        }
        for (const auto& [metric, per_ds] : a.non_normalizable) {
            for (const auto& [dataset, count] : per_ds) {
                out << "non_normalizable_window," << dataset << ",," << metric << ',' << count
                    << '\n';
            }
        }
        std::map<std::string, long> windows_per_dataset;
        for (const auto& key : a.complete_keys) {
            ++windows_per_dataset[std::get<0>(key)];
        }
        for (const auto& [dataset, count] : windows_per_dataset) {
            out << "complete_window," << dataset << ",,," << count << '\n';
        }
    }
}

std::vector<ComparisonSpec> load_comparisons(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open comparisons '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != "metric,method_a,method_b,alternative") {
        throw std::runtime_error(path + ":1: expected header metric,method_a,method_b,alternative");
    }
    std::vector<ComparisonSpec> out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 4 columns");
        }
        out.push_back({fields[0], fields[1], fields[2], parse_alternative(fields[3])});
    }
    return out;
}

} // namespace cspbench
