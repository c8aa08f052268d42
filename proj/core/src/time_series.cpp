#include "cspbench/time_series.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cspbench {

void validate_series(const TimeSeries& series) {
    if (series.values.empty()) {
        throw std::invalid_argument("series '" + series.id + "': values empty");
    }
    for (double v : series.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("series '" + series.id + "': non-finite value");
        }
    }
    if (series.season < 1) {
        throw std::invalid_argument("series '" + series.id + "': season must be >= 1");
    }
}

int season_from_freq(std::string_view freq) {
    // tolerate the "1H" spelling
    if (freq.size() >= 2 && freq.front() == '1' && !std::isdigit(static_cast<unsigned char>(freq[1]))) {
        freq.remove_prefix(1);
    }
    if (freq == "H") return 24;
    if (freq == "D") return 7;
    if (freq == "W") return 52;
    if (freq == "M") return 12;
    return 1;
}

long seasonal_phase(long t, int m) {
    if (t < 1 || m < 1) {
        throw std::invalid_argument("seasonal_phase: t >= 1 and m >= 1 required");
    }
    return t % m;
}

TimeSeries series_prefix(const TimeSeries& series, long length) {
    if (length < 1 || length > series.length()) {
        throw std::invalid_argument("series_prefix: length out of range");
    }
    TimeSeries out;
    out.id = series.id;
    out.start = series.start;
    out.freq = series.freq;
    out.season = series.season;
    out.values.assign(series.values.begin(), series.values.begin() + length);
    return out;
}

} // namespace cspbench
