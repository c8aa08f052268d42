#include "cspbench/quantile.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cspbench {

double empirical_quantile(std::span<const double> sorted_samples, double q) {
    if (sorted_samples.empty()) {
        throw std::invalid_argument("empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("quantile level outside [0, 1]");
    }
    assert(std::is_sorted(sorted_samples.begin(), sorted_samples.end()));

    const std::size_t n = sorted_samples.size();
    const double h = static_cast<double>(n - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) {
        return sorted_samples[n - 1];
    }
    const double frac = h - static_cast<double>(lo);
    return sorted_samples[lo] + frac * (sorted_samples[lo + 1] - sorted_samples[lo]);
}

std::vector<double> empirical_quantiles(std::span<const double> samples,
                                        std::span<const double> levels) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(levels.size());
    for (double q : levels) {
        out.push_back(empirical_quantile(sorted, q));
    }
    return out;
}

} // namespace cspbench
