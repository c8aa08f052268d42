#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cspbench/rng.hpp"
#include "cspbench/sample_matrix.hpp"
#include "cspbench/time_series.hpp"

namespace cspbench {

/// Raised when no residual pool can be formed at all (single observation).
struct DegeneratePoolError : std::runtime_error {
    DegeneratePoolError() : std::runtime_error("degenerate pool") {}
};

/// How ages enter the exponential recency weight exp(-lambda * age).
/// Steps measures age in raw time steps (T - t); Normalized divides by T.
enum class AgeUnits { Steps, Normalized };

struct ForecastRequest {
    const TimeSeries& history;
    int horizon = 1;
    int budget = 2;
    RngStream& rng;
};

enum class CspVariant { Fixed, Adaptive };

struct CspParams {
    CspVariant variant = CspVariant::Adaptive;
    double calib_fraction = 0.5; // rho
    double recency_rate = 0.01;  // lambda
    int min_pool = 3;            // seasonal pool thinness threshold
    double thin_weight = 0.3;
    double full_weight = 0.5;
    AgeUnits age_units = AgeUnits::Steps;
};

/// Signed residuals y_t - y_{t-lag}. The lag is the seasonal period unless
/// the fallback chain had to drop to first differences.
struct ResidualPool {
    std::vector<double> residuals;
    int lag = 1;
    long window_begin = 1; // 1-based, inclusive
    long window_end = 1;   // 1-based, inclusive
};

/// Same-phase historical values with normalized recency weights.
struct SeasonalPool {
    std::vector<double> values;
    std::vector<double> weights; // sum to 1 when non-empty
    long phase = 0;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Seasonal naive point forecast mu_h = y_{T+h-m}. If that index runs past
/// the history it steps back by m to the most recent same-phase index; if
/// the period exceeds the history entirely, the latest observation is used.
std::vector<double> seasonal_naive(const TimeSeries& history, int horizon);

/// Calibration pool over the most recent floor(rho*T) steps at lag m.
/// If that window yields nothing, the pool widens to the full history, then
/// drops to first differences; a single-observation history throws
/// DegeneratePoolError.
ResidualPool build_residual_pool(const TimeSeries& history, const CspParams& params);

/// All same-phase observations for target step T+h, weighted by
/// exp(-lambda * age). May be empty (period longer than the history).
SeasonalPool build_seasonal_pool(const TimeSeries& history, int h, double recency_rate,
                                 AgeUnits age_units = AgeUnits::Steps);

/// Mixture weight for one horizon. Adaptive: 0 without seasonality (m <= 1),
/// thin_weight when the seasonal pool is thin, full_weight otherwise.
/// Fixed: full_weight unconditionally.
double csp_weight(int season, std::size_t pool_size, const CspParams& params);

/// Conformal Seasonal Pools sampler: per horizon, each sample comes from the
/// recency-weighted seasonal pool with probability w_h, otherwise from
/// mu_h + r with r uniform over the signed residual pool.
SampleMatrix forecast_csp(const ForecastRequest& req, const CspParams& params);

/// Residual-only sampler: mu_h + r, r uniform over the calibration pool.
SampleMatrix forecast_conformal_residual(const ForecastRequest& req, const CspParams& params);

/// Recency-weighted resampling of the whole history.
SampleMatrix forecast_npts(const ForecastRequest& req, double recency_rate,
                           AgeUnits age_units = AgeUnits::Steps);

/// As forecast_npts restricted to the target step's seasonal phase
/// (falls back to the whole history when the phase set is empty).
SampleMatrix forecast_seasonal_npts(const ForecastRequest& req, double recency_rate,
                                    AgeUnits age_units = AgeUnits::Steps);

/// Sample autocorrelation at a single lag (mean-centered, normalized by the
/// lag-0 sum of squares).
double autocorrelation(const std::vector<double>& values, long lag);

/// ACF-based period detector: scans lags 2..max_lag (default min(T/2, 400))
/// and returns the lag with the largest autocorrelation if it exceeds the
/// threshold. Constant series and histories shorter than 4 return nullopt.
std::optional<int> detect_period_acf(const TimeSeries& history, double threshold,
                                     long max_lag = 0);

/// Training-free fallback without seasonal structure: picks a data-dependent
/// recent window (3 detected periods, else max(2H, T/4)), pools signed
/// h-step differences inside it, and emits y_T + d.
SampleMatrix forecast_adaptive_window_mci(const ForecastRequest& req, double acf_threshold);

enum class PoolMode { Full, Rolling, Seasonal };

/// Uniform empirical resampling; Rolling restricts to the last k
/// observations, Seasonal to the target step's phase (empty phase set falls
/// back to the full history).
SampleMatrix forecast_empirical_pool(const ForecastRequest& req, PoolMode mode,
                                     long rolling_window = 1);

/// Per-method knobs, one struct shared by the whole registry.
struct MethodParams {
    CspParams csp{};
    double npts_lambda = 0.01;
    double acf_threshold = 0.3;
    long rolling_window = 168;
    AgeUnits age_units = AgeUnits::Steps;
};

using Forecaster = std::function<SampleMatrix(const ForecastRequest&)>;

/// Registered method names, in canonical order.
const std::vector<std::string>& method_names();

/// Builds the sampler for a registered method name; throws
/// std::invalid_argument listing the valid names otherwise.
Forecaster make_forecaster(std::string_view name, const MethodParams& params = {});

} // namespace cspbench
