#include "cspbench/forecasters.hpp"

#include <algorithm>
#include <cmath>

namespace cspbench {

namespace {

void validate_request(const ForecastRequest& req) {
    validate_series(req.history);
    if (req.horizon < 1) {
        throw std::invalid_argument("forecast: horizon must be >= 1");
    }
    if (req.budget < 2) {
        throw std::invalid_argument("forecast: budget must be >= 2");
    }
}

double age_of(long steps_back, long total, AgeUnits units) {
    if (units == AgeUnits::Normalized && total > 0) {
        return static_cast<double>(steps_back) / static_cast<double>(total);
    }
    return static_cast<double>(steps_back);
}

/// Inverse-CDF draw over unnormalized cumulative weights.
std::size_t weighted_index(const std::vector<double>& cum, RngStream& rng) {
    const double target = rng.next_double() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t idx = static_cast<std::size_t>(it - cum.begin());
    if (idx >= cum.size()) idx = cum.size() - 1;
    return idx;
}

std::vector<double> cumulative(const std::vector<double>& weights) {
    std::vector<double> cum(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cum[i] = acc;
    }
    return cum;
}

} // namespace

std::vector<double> seasonal_naive(const TimeSeries& history, int horizon) {
    validate_series(history);
    const long T = history.length();
    const long m = history.season;
    std::vector<double> mu(static_cast<std::size_t>(horizon));
    for (int h = 1; h <= horizon; ++h) {
        // most recent in-range index with the phase of T+h
        const long cycles = (h + m - 1) / m; // ceil(h/m)
        const long idx = T + h - cycles * m;
        mu[static_cast<std::size_t>(h - 1)] = idx >= 1 ? history.at_time(idx) : history.at_time(T);
    }
    return mu;
}

ResidualPool build_residual_pool(const TimeSeries& history, const CspParams& params) {
    validate_series(history);
    const long T = history.length();

    auto collect = [&](long lag, long window_begin) {
        ResidualPool pool;
        pool.lag = static_cast<int>(lag);
        pool.window_begin = std::max(window_begin, lag + 1);
        pool.window_end = T;
        for (long t = pool.window_begin; t <= T; ++t) {
            pool.residuals.push_back(history.at_time(t) - history.at_time(t - lag));
        }
        return pool;
    };

    const long lag = history.season;
    const long calib = static_cast<long>(std::floor(params.calib_fraction * static_cast<double>(T)));

    ResidualPool pool = collect(lag, T - calib + 1);
    if (pool.residuals.empty()) {
        pool = collect(lag, 1); // widen to the full history
    }
    if (pool.residuals.empty()) {
        pool = collect(1, 1); // no full seasonal cycle observed: first differences
    }
    if (pool.residuals.empty()) {
        throw DegeneratePoolError();
    }
    return pool;
}

SeasonalPool build_seasonal_pool(const TimeSeries& history, int h, double recency_rate,
                                 AgeUnits age_units) {
    const long T = history.length();
    const long m = history.season;
    SeasonalPool pool;
    pool.phase = seasonal_phase(T + h, static_cast<int>(m));

    const long first = pool.phase == 0 ? m : pool.phase;
    double total = 0.0;
    for (long t = first; t <= T; t += m) {
        pool.values.push_back(history.at_time(t));
        const double w = std::exp(-recency_rate * age_of(T - t, T, age_units));
        pool.weights.push_back(w);
        total += w;
    }
    if (total > 0.0) {
        for (double& w : pool.weights) {
            w /= total;
        }
    } else if (!pool.weights.empty()) {
        // all weights underflowed: the recency limit puts everything on the
        // most recent same-phase value
        pool.weights.back() = 1.0;
    }
    return pool;
}

double csp_weight(int season, std::size_t pool_size, const CspParams& params) {
    if (params.variant == CspVariant::Fixed) {
        return params.full_weight;
    }
    if (season <= 1) {
        return 0.0;
    }
    if (pool_size < static_cast<std::size_t>(params.min_pool)) {
        return params.thin_weight;
    }
    return params.full_weight;
}

SampleMatrix forecast_csp(const ForecastRequest& req, const CspParams& params) {
    validate_request(req);
    const std::vector<double> mu = seasonal_naive(req.history, req.horizon);
    const ResidualPool residuals = build_residual_pool(req.history, params);

    SampleMatrix out(req.horizon, req.budget);
    for (int h = 0; h < req.horizon; ++h) {
        const SeasonalPool pool =
            build_seasonal_pool(req.history, h + 1, params.recency_rate, params.age_units);
        double w = csp_weight(req.history.season, pool.size(), params);
        if (pool.empty()) {
            w = 0.0; // nothing to draw from the seasonal branch
        }
        const std::vector<double> cum = cumulative(pool.weights);
        for (int b = 0; b < req.budget; ++b) {
            bool seasonal;
            if (w <= 0.0) {
                seasonal = false;
            } else if (w >= 1.0) {
                seasonal = true;
            } else {
                seasonal = req.rng.next_double() < w;
            }
            if (seasonal) {
                out.at(h, b) = pool.values[weighted_index(cum, req.rng)];
            } else if (!residuals.residuals.empty()) {
                out.at(h, b) =
                    mu[static_cast<std::size_t>(h)] +
                    residuals.residuals[req.rng.next_index(residuals.residuals.size())];
            } else {
                out.at(h, b) = mu[static_cast<std::size_t>(h)];
            }
        }
    }
    return out;
}

SampleMatrix forecast_conformal_residual(const ForecastRequest& req, const CspParams& params) {
    validate_request(req);
    const std::vector<double> mu = seasonal_naive(req.history, req.horizon);
    const ResidualPool residuals = build_residual_pool(req.history, params);

    SampleMatrix out(req.horizon, req.budget);
    for (int h = 0; h < req.horizon; ++h) {
        for (int b = 0; b < req.budget; ++b) {
            out.at(h, b) = mu[static_cast<std::size_t>(h)] +
                           residuals.residuals[req.rng.next_index(residuals.residuals.size())];
        }
    }
    return out;
}

SampleMatrix forecast_npts(const ForecastRequest& req, double recency_rate, AgeUnits age_units) {
    validate_request(req);
    const long T = req.history.length();

    std::vector<double> weights(static_cast<std::size_t>(T));
    for (long t = 1; t <= T; ++t) {
        weights[static_cast<std::size_t>(t - 1)] =
            std::exp(-recency_rate * age_of(T - t, T, age_units));
    }
    const std::vector<double> cum = cumulative(weights);

    SampleMatrix out(req.horizon, req.budget);
    for (int h = 0; h < req.horizon; ++h) {
        for (int b = 0; b < req.budget; ++b) {
            out.at(h, b) = req.history.values[weighted_index(cum, req.rng)];
        }
    }
    return out;
}

SampleMatrix forecast_seasonal_npts(const ForecastRequest& req, double recency_rate,
                                    AgeUnits age_units) {
    validate_request(req);
    const long T = req.history.length();
    const long m = req.history.season;

    SampleMatrix out(req.horizon, req.budget);
    for (int h = 0; h < req.horizon; ++h) {
        const long phase = seasonal_phase(T + h + 1, static_cast<int>(m));
        std::vector<double> candidates;
        std::vector<double> weights;
        const long first = phase == 0 ? m : phase;
        for (long t = first; t <= T; t += m) {
            candidates.push_back(req.history.at_time(t));
            weights.push_back(std::exp(-recency_rate * age_of(T - t, T, age_units)));
        }
        if (candidates.empty()) {
            for (long t = 1; t <= T; ++t) {
                candidates.push_back(req.history.at_time(t));
                weights.push_back(std::exp(-recency_rate * age_of(T - t, T, age_units)));
            }
        }
        const std::vector<double> cum = cumulative(weights);
        for (int b = 0; b < req.budget; ++b) {
            out.at(h, b) = candidates[weighted_index(cum, req.rng)];
        }
    }
    return out;
}

double autocorrelation(const std::vector<double>& values, long lag) {
    const long n = static_cast<long>(values.size());
    if (lag < 0 || lag >= n) {
        throw std::invalid_argument("autocorrelation: lag out of range");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    double denom = 0.0;
    for (double v : values) denom += (v - mean) * (v - mean);
    if (denom == 0.0) {
        return 0.0;
    }
    double num = 0.0;
    for (long t = 0; t + lag < n; ++t) {
        num += (values[static_cast<std::size_t>(t)] - mean) *
               (values[static_cast<std::size_t>(t + lag)] - mean);
    }
    return num / denom;
}

std::optional<int> detect_period_acf(const TimeSeries& history, double threshold, long max_lag) {
    const long T = history.length();
    if (T < 4) {
        return std::nullopt;
    }
    double mean = 0.0;
    for (double v : history.values) mean += v;
    mean /= static_cast<double>(T);
    double var = 0.0;
    for (double v : history.values) var += (v - mean) * (v - mean);
    if (var == 0.0) {
        return std::nullopt; // constant series: ACF undefined
    }

    if (max_lag <= 0) {
        max_lag = std::min(T / 2, 400l);
    }
    max_lag = std::min(max_lag, T - 1);
    if (max_lag < 2) {
        return std::nullopt;
    }

    std::vector<double> acf(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (long lag = 1; lag <= max_lag; ++lag) {
        acf[static_cast<std::size_t>(lag)] = autocorrelation(history.values, lag);
    }

    // Candidates are local ACF maxima: the raw global maximum of a smooth
    // seasonal signal sits at lag 2, not at the period, so peaks are what
    // identify the cycle length.
    long best_lag = 0;
    double best_acf = -2.0;
    for (long lag = 2; lag <= max_lag; ++lag) {
        const std::size_t k = static_cast<std::size_t>(lag);
        const bool rises = acf[k] > acf[k - 1];
        const bool falls = lag == max_lag || acf[k] >= acf[k + 1];
        if (rises && falls && acf[k] > best_acf) { // strict: ties keep the smallest lag
            best_acf = acf[k];
            best_lag = lag;
        }
    }
    if (best_lag >= 2 && best_acf > threshold) {
        return static_cast<int>(best_lag);
    }
    return std::nullopt;
}

SampleMatrix forecast_adaptive_window_mci(const ForecastRequest& req, double acf_threshold) {
    validate_request(req);
    const long T = req.history.length();
    const double last = req.history.at_time(T);

    long window;
    if (auto period = detect_period_acf(req.history, acf_threshold)) {
        window = std::min(3l * *period, T);
    } else {
        window = std::min(T, std::max(2l * req.horizon, (T + 3) / 4));
    }
    const long window_begin = T - window + 1;

    SampleMatrix out(req.horizon, req.budget);
    std::vector<double> pool;
    std::vector<double> fallback; // last non-empty shorter-step pool
    for (int h = 1; h <= req.horizon; ++h) {
        pool.clear();
        for (long t = window_begin + h; t <= T; ++t) {
            pool.push_back(req.history.at_time(t) - req.history.at_time(t - h));
        }
        if (pool.empty()) {
            pool = fallback;
        }
        if (pool.empty()) {
            // window too short even for first differences: use the full history
            for (long t = 2; t <= T; ++t) {
                pool.push_back(req.history.at_time(t) - req.history.at_time(t - 1));
            }
        }
        if (pool.empty()) {
            throw DegeneratePoolError();
        }
        for (int b = 0; b < req.budget; ++b) {
            out.at(h - 1, b) = last + pool[req.rng.next_index(pool.size())];
        }
        fallback = pool;
    }
    return out;
}

SampleMatrix forecast_empirical_pool(const ForecastRequest& req, PoolMode mode,
                                     long rolling_window) {
    validate_request(req);
    if (mode == PoolMode::Rolling && rolling_window < 1) {
        throw std::invalid_argument("empirical pool: rolling window must be >= 1");
    }
    const long T = req.history.length();
    const long m = req.history.season;

    SampleMatrix out(req.horizon, req.budget);
    for (int h = 0; h < req.horizon; ++h) {
        std::vector<double> pool;
        switch (mode) {
        case PoolMode::Full:
            pool = req.history.values;
            break;
        case PoolMode::Rolling: {
            const long k = std::min(rolling_window, T);
            pool.assign(req.history.values.end() - k, req.history.values.end());
            break;
        }
        case PoolMode::Seasonal: {
            const long phase = seasonal_phase(T + h + 1, static_cast<int>(m));
            const long first = phase == 0 ? m : phase;
            for (long t = first; t <= T; t += m) {
                pool.push_back(req.history.at_time(t));
            }
            if (pool.empty()) {
                pool = req.history.values;
            }
            break;
        }
        }
        for (int b = 0; b < req.budget; ++b) {
            out.at(h, b) = pool[req.rng.next_index(pool.size())];
        }
    }
    return out;
}

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {
        "csp-adaptive",  "csp-fixed",          "conformal-residual", "npts",
        "seasonal-npts", "adaptive-window-mci", "empirical-full",     "empirical-rolling",
        "empirical-seasonal", "seasonal-naive",
    };
    return names;
}

Forecaster make_forecaster(std::string_view name, const MethodParams& params) {
    MethodParams p = params;
    p.csp.age_units = params.age_units;

    if (name == "csp-adaptive") {
        CspParams csp = p.csp;
        csp.variant = CspVariant::Adaptive;
        return [csp](const ForecastRequest& req) { return forecast_csp(req, csp); };
    }
    if (name == "csp-fixed") {
        CspParams csp = p.csp;
        csp.variant = CspVariant::Fixed;
        return [csp](const ForecastRequest& req) { return forecast_csp(req, csp); };
    }
    if (name == "conformal-residual") {
        CspParams csp = p.csp;
        return [csp](const ForecastRequest& req) {
            return forecast_conformal_residual(req, csp);
        };
    }
    if (name == "npts") {
        return [p](const ForecastRequest& req) {
            return forecast_npts(req, p.npts_lambda, p.age_units);
        };
    }
    if (name == "seasonal-npts") {
        return [p](const ForecastRequest& req) {
            return forecast_seasonal_npts(req, p.npts_lambda, p.age_units);
        };
    }
    if (name == "adaptive-window-mci") {
        return [p](const ForecastRequest& req) {
            return forecast_adaptive_window_mci(req, p.acf_threshold);
        };
    }
    if (name == "empirical-full") {
        return [](const ForecastRequest& req) {
            return forecast_empirical_pool(req, PoolMode::Full);
        };
    }
    if (name == "empirical-rolling") {
        return [p](const ForecastRequest& req) {
            return forecast_empirical_pool(req, PoolMode::Rolling, p.rolling_window);
        };
    }
    if (name == "empirical-seasonal") {
        return [](const ForecastRequest& req) {
            return forecast_empirical_pool(req, PoolMode::Seasonal);
        };
    }
    if (name == "seasonal-naive") {
        return [](const ForecastRequest& req) {
            validate_request(req);
            const std::vector<double> mu = seasonal_naive(req.history, req.horizon);
            SampleMatrix out(req.horizon, req.budget);
            for (int h = 0; h < req.horizon; ++h) {
                for (int b = 0; b < req.budget; ++b) {
                    out.at(h, b) = mu[static_cast<std::size_t>(h)];
                }
            }
            return out;
        };
    }

    std::string msg = "unknown method '" + std::string(name) + "'; valid methods:";
    for (const auto& n : method_names()) {
        msg += " " + n;
    }
    throw std::invalid_argument(msg);
}

} // namespace cspbench
