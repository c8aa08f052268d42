#include "cspbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspbench {

std::optional<std::map<std::string, double>>
normalize_by_window_median(const std::map<std::string, double>& scores) {
    if (scores.size() < 2) {
        throw std::invalid_argument("normalize_by_window_median: need >= 2 methods");
    }
    std::vector<double> values;
    values.reserve(scores.size());
    for (const auto& [name, score] : scores) {
        values.push_back(score);
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    if (!(median > 0.0)) {
        return std::nullopt;
    }
    std::map<std::string, double> out;
    for (const auto& [name, score] : scores) {
        out[name] = score / median;
    }
    return out;
}

std::map<std::string, double> per_window_ranks(const std::map<std::string, double>& scores) {
    if (scores.size() < 2) {
        throw std::invalid_argument("per_window_ranks: need >= 2 methods");
    }
    std::vector<std::pair<double, std::string>> order;
    order.reserve(scores.size());
    for (const auto& [name, score] : scores) {
        order.emplace_back(score, name);
    }
    std::sort(order.begin(), order.end());

    std::map<std::string, double> ranks;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && order[j + 1].first == order[i].first) {
            ++j;
        }
        // tied positions i+1 .. j+1 share their average rank
        const double rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k].second] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

namespace {

void add_band_mass(RankBands& bands, long band, double mass) {
    switch (band) {
    case 1: bands.r1 += mass; break;
    case 2: bands.r2 += mass; break;
    case 3: bands.r3 += mass; break;
    case 4: bands.r4 += mass; break;
    default: bands.r5_6 += mass; break; // everything from rank 5 up
    }
}

} // namespace

RankBands rank_distribution(std::span<const double> ranks) {
    RankBands bands;
    for (double r : ranks) {
        const double lo = std::floor(r);
        const double hi = std::ceil(r);
        if (lo == hi) {
            add_band_mass(bands, static_cast<long>(lo), 1.0);
        } else {
            add_band_mass(bands, static_cast<long>(lo), 0.5);
            add_band_mass(bands, static_cast<long>(hi), 0.5);
        }
    }
    return bands;
}

HeadToHead head_to_head(const std::map<std::string, std::map<std::string, double>>& per_dataset_means,
                        const std::string& method_a, const std::string& method_b) {
    HeadToHead result;
    for (const auto& [dataset, means] : per_dataset_means) {
        const auto it_a = means.find(method_a);
        const auto it_b = means.find(method_b);
        if (it_a == means.end() || it_b == means.end()) {
            throw std::invalid_argument("head_to_head: method missing on dataset '" + dataset + "'");
        }
        if (it_a->second < it_b->second) {
            ++result.wins_a;
        } else if (it_b->second < it_a->second) {
            ++result.wins_b;
        } else {
            ++result.ties;
        }
    }
    return result;
}

namespace {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Exact null distribution of 2*W+ by subset-sum counting over the doubled
/// (integer) ranks. counts[s] = number of sign assignments with 2*W+ == s.
std::vector<double> wplus_counts(const std::vector<long>& doubled_ranks) {
    long total = 0;
    for (long r : doubled_ranks) {
        total += r;
    }
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    for (long r : doubled_ranks) {
        for (long s = total; s >= r; --s) {
            counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
        }
    }
    return counts;
}

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, Alternative alternative,
                                    WilcoxonMode mode) {
    std::vector<double> nonzero;
    nonzero.reserve(diffs.size());
    for (double d : diffs) {
        if (!std::isfinite(d)) {
            throw std::invalid_argument("wilcoxon_signed_rank: non-finite difference");
        }
        if (d != 0.0) {
            nonzero.push_back(d);
        }
    }
    if (nonzero.empty()) {
        throw std::invalid_argument("no signed information");
    }

    const std::size_t n = nonzero.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(nonzero[a]) < std::abs(nonzero[b]);
    });

    // average ranks over tie groups of |d|; also collect tie sizes for the
    // normal-approximation variance correction
    std::vector<double> ranks(n);
    std::vector<std::size_t> tie_sizes;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n &&
               std::abs(nonzero[order[j + 1]]) == std::abs(nonzero[order[i]])) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }

    WilcoxonResult result;
    result.n = static_cast<int>(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (nonzero[k] > 0.0) {
            result.w_plus += ranks[k];
        }
    }

    const bool use_exact =
        mode == WilcoxonMode::Exact || (mode == WilcoxonMode::Auto && n <= 25);

    if (use_exact) {
        // doubled ranks are exact integers even with average-rank ties
        std::vector<long> doubled(n);
        for (std::size_t k = 0; k < n; ++k) {
            doubled[k] = std::lround(2.0 * ranks[k]);
        }
        const std::vector<double> counts = wplus_counts(doubled);
        const long observed = std::lround(2.0 * result.w_plus);
        const double total_assignments = std::ldexp(1.0, static_cast<int>(n)); // 2^n

        double below = 0.0;
        double above = 0.0;
        for (long s = 0; s < static_cast<long>(counts.size()); ++s) {
            if (s <= observed) below += counts[static_cast<std::size_t>(s)];
            if (s >= observed) above += counts[static_cast<std::size_t>(s)];
        }
        const double p_less = below / total_assignments;
        const double p_greater = above / total_assignments;
        switch (alternative) {
        case Alternative::Less: result.p_value = p_less; break;
        case Alternative::Greater: result.p_value = p_greater; break;
        case Alternative::TwoSided:
            result.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater));
            break;
        }
        result.exact = true;
        return result;
    }

    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    for (std::size_t t : tie_sizes) {
        const double td = static_cast<double>(t);
        variance -= (td * td * td - td) / 48.0;
    }
    const double sd = std::sqrt(variance);

    switch (alternative) {
    case Alternative::Less:
        result.p_value = normal_cdf((result.w_plus - mean + 0.5) / sd);
        break;
    case Alternative::Greater:
        result.p_value = 1.0 - normal_cdf((result.w_plus - mean - 0.5) / sd);
        break;
    case Alternative::TwoSided: {
        const double p_less = normal_cdf((result.w_plus - mean + 0.5) / sd);
        const double p_greater = 1.0 - normal_cdf((result.w_plus - mean - 0.5) / sd);
        result.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater));
        break;
    }
    }
    result.exact = false;
    return result;
}

} // namespace cspbench
