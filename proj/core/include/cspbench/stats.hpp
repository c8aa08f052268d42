#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cspbench {

/// Per-window differences (A - B) on one metric for a method pair, one entry
/// per (dataset, series, window) key.
struct PairedSample {
    std::string method_a;
    std::string method_b;
    std::vector<double> diffs;
};

/// Divides each method's score by the cross-method median for the window.
/// Returns nullopt when the median is not positive (window is then excluded
/// from normalized aggregates and counted by the caller).
std::optional<std::map<std::string, double>>
normalize_by_window_median(const std::map<std::string, double>& scores);

/// Ascending ranks (1 = best = lowest score); ties get the average of the
/// tied rank positions.
std::map<std::string, double> per_window_ranks(const std::map<std::string, double>& scores);

/// Rank-band counts R1, R2, R3, R4 and R5+ (labeled R5-6 in the summary
/// tables). A half-integer rank splits its mass between the two adjacent
/// bands, so band totals always sum to the number of windows.
struct RankBands {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r4 = 0.0;
    double r5_6 = 0.0;

    double total() const { return r1 + r2 + r3 + r4 + r5_6; }
};

RankBands rank_distribution(std::span<const double> ranks);

/// Dataset-level wins for a method pair: datasets where A's mean score is
/// strictly below B's. Ties count for neither side.
struct HeadToHead {
    int wins_a = 0;
    int wins_b = 0;
    int ties = 0;
};

HeadToHead head_to_head(const std::map<std::string, std::map<std::string, double>>& per_dataset_means,
                        const std::string& method_a, const std::string& method_b);

enum class Alternative { Less, Greater, TwoSided };
enum class WilcoxonMode { Auto, Exact, Normal };

struct WilcoxonResult {
    double w_plus = 0.0; // sum of ranks of positive differences
    int n = 0;           // differences remaining after zero removal
    double p_value = 1.0;
    bool exact = false;
};

/// One-sample Wilcoxon signed-rank test. Zeros are dropped, absolute
/// differences are ranked with average-rank ties, and the null distribution
/// of W+ is enumerated exactly over all sign assignments for n <= 25
/// (normal approximation with tie-corrected variance and 0.5 continuity
/// correction above that). Throws std::invalid_argument when every
/// difference is zero.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, Alternative alternative,
                                    WilcoxonMode mode = WilcoxonMode::Auto);

inline WilcoxonResult wilcoxon_signed_rank(const PairedSample& sample, Alternative alternative,
                                           WilcoxonMode mode = WilcoxonMode::Auto) {
    return wilcoxon_signed_rank(std::span<const double>(sample.diffs), alternative, mode);
}

} // namespace cspbench
