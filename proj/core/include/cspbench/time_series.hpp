#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cspbench {

/// One univariate series. Values are stored 0-based; the documented time
/// convention is 1-based (value at time t is values[t-1]).
struct TimeSeries {
    std::string id;
    std::string start; // ISO-8601 timestamp of the first observation
    std::string freq;  // frequency code, e.g. "H", "D"
    std::vector<double> values;
    int season = 1; // seasonal period m, in steps

    long length() const { return static_cast<long>(values.size()); }

    /// Value at 1-based time index t.
    double at_time(long t) const { return values[static_cast<std::size_t>(t - 1)]; }
};

/// Throws std::invalid_argument if the series violates its invariants
/// (empty values, non-finite values, season < 1).
void validate_series(const TimeSeries& series);

/// Default seasonal period for a frequency code: H->24, D->7, W->52, M->12,
/// anything else -> 1. A "1H"-style prefix of 1 is accepted.
int season_from_freq(std::string_view freq);

/// Seasonal phase of 1-based time index t for period m: t mod m.
/// Every forecaster uses this one convention.
long seasonal_phase(long t, int m);

/// Copy of the first `length` observations (same id/metadata).
TimeSeries series_prefix(const TimeSeries& series, long length);

} // namespace cspbench
