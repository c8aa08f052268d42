#include <doctest.h>

#include <algorithm>
#include <map>
#include <cmath>
#include <set>
#include <vector>

#include "cspbench/forecasters.hpp"

using namespace cspbench;

namespace {

TimeSeries make_series(std::vector<double> values, int season, const std::string& id = "s") {
    TimeSeries ts;
    ts.id = id;
    ts.freq = "";
    ts.season = season;
    ts.values = std::move(values);
    return ts;
}

RngStream stream(std::uint64_t salt) {
    return RngStream(hash_key({"forecaster-test"}, {salt}));
}

} // namespace

TEST_SUITE("forecasters") {

TEST_CASE("seasonal naive repeats the previous cycle") {
    const TimeSeries ts = make_series({10, 20, 30, 40, 50, 60, 70}, 7);
    const auto mu = seasonal_naive(ts, 2);
    CHECK(mu == std::vector<double>{10.0, 20.0});
}

TEST_CASE("seasonal naive with period one pins the last value") {
    const TimeSeries ts = make_series({3, 1, 4, 1, 5}, 1);
    const auto mu = seasonal_naive(ts, 3);
    CHECK(mu == std::vector<double>{5.0, 5.0, 5.0});
}

TEST_CASE("seasonal naive steps back to the most recent in-range phase") {
    // T=5, m=3, h=5: index 7 is out of range, steps back to index 4
    const TimeSeries ts = make_series({1, 2, 3, 4, 5}, 3);
    const auto mu = seasonal_naive(ts, 5);
    CHECK(mu[4] == 4.0);
}

TEST_CASE("seasonal naive falls back to the latest observation when m > T") {
    const TimeSeries ts = make_series({1, 2, 3}, 9);
    const auto mu = seasonal_naive(ts, 2);
    CHECK(mu == std::vector<double>{3.0, 3.0});
}

TEST_CASE("residual pool over the calibration window") {
    const TimeSeries ts = make_series({1, 2, 3, 4, 5, 6, 7, 8}, 2);
    CspParams params;
    params.calib_fraction = 0.5;
    const ResidualPool pool = build_residual_pool(ts, params);
    CHECK(pool.lag == 2);
    CHECK(pool.window_begin == 5);
    CHECK(pool.window_end == 8);
    CHECK(pool.residuals == std::vector<double>{2, 2, 2, 2});
}

TEST_CASE("residual pool of a constant series is all zeros") {
    const TimeSeries ts = make_series(std::vector<double>(20, 6.5), 4);
    const ResidualPool pool = build_residual_pool(ts, CspParams{});
    for (double r : pool.residuals) {
        CHECK(r == 0.0);
    }
}

TEST_CASE("residual pool with m=1 holds first differences") {
    const TimeSeries ts = make_series({1, 4, 9, 16, 25, 36}, 1);
    CspParams params;
    params.calib_fraction = 0.5;
    const ResidualPool pool = build_residual_pool(ts, params);
    CHECK(pool.lag == 1);
    CHECK(pool.residuals == std::vector<double>{7, 9, 11}); // t = 4, 5, 6
}

TEST_CASE("residual pool drops to first differences when m exceeds T") {
    const TimeSeries ts = make_series({2, 4, 7}, 9);
    const ResidualPool pool = build_residual_pool(ts, CspParams{});
    CHECK(pool.lag == 1);
    CHECK(pool.residuals == std::vector<double>{2, 3});
}

TEST_CASE("single observation has no residual information") {
    const TimeSeries ts = make_series({5}, 1);
    CHECK_THROWS_AS(build_residual_pool(ts, CspParams{}), DegeneratePoolError);
}

TEST_CASE("seasonal pool with m=1 is the whole history") {
    const TimeSeries ts = make_series({1, 2, 3, 4}, 1);
    const SeasonalPool pool = build_seasonal_pool(ts, 1, 0.0);
    CHECK(pool.values == std::vector<double>{1, 2, 3, 4});
    for (double w : pool.weights) {
        CHECK(w == doctest::Approx(0.25));
    }
}

TEST_CASE("seasonal pool recency weights") {
    // T=48, m=24, h=1: pool {y_1, y_25}, weights prop to {e^-47l, e^-23l}
    std::vector<double> values(48);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<double>(i + 1);
    }
    const TimeSeries ts = make_series(values, 24);
    const double lambda = 0.05;
    const SeasonalPool pool = build_seasonal_pool(ts, 1, lambda);
    REQUIRE(pool.values.size() == 2);
    CHECK(pool.values[0] == 1.0);
    CHECK(pool.values[1] == 25.0);
    const double w1 = std::exp(-lambda * 47.0);
    const double w2 = std::exp(-lambda * 23.0);
    CHECK(pool.weights[0] == doctest::Approx(w1 / (w1 + w2)));
    CHECK(pool.weights[1] == doctest::Approx(w2 / (w1 + w2)));
    const double total = pool.weights[0] + pool.weights[1];
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("csp weight rule") {
    CspParams adaptive;
    adaptive.variant = CspVariant::Adaptive;
    CHECK(csp_weight(1, 100, adaptive) == 0.0);
    CHECK(csp_weight(24, 2, adaptive) == doctest::Approx(0.3));
    CHECK(csp_weight(24, 10, adaptive) == doctest::Approx(0.5));

    CspParams fixed;
    fixed.variant = CspVariant::Fixed;
    CHECK(csp_weight(24, 10, fixed) == doctest::Approx(0.5));
    CHECK(csp_weight(1, 0, fixed) == doctest::Approx(0.5));
}

TEST_CASE("csp-adaptive collapses to the residual sampler without seasonality") {
    std::vector<double> values(50);
    RngStream noise = stream(11);
    for (auto& v : values) v = noise.next_double() * 10.0;
    const TimeSeries ts = make_series(values, 1);

    RngStream rng_a = stream(12);
    RngStream rng_b = stream(12);
    CspParams params;
    params.variant = CspVariant::Adaptive;
    const SampleMatrix csp = forecast_csp({ts, 6, 64, rng_a}, params);
    const SampleMatrix residual = forecast_conformal_residual({ts, 6, 64, rng_b}, params);
    CHECK(csp == residual);
}

TEST_CASE("every csp sample lies in the seasonal or residual support") {
    std::vector<double> values(60);
    RngStream noise = stream(21);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::sin(static_cast<double>(i) / 2.0) * 5.0 + noise.next_double();
    }
    const TimeSeries ts = make_series(values, 12);
    CspParams params;
    const auto mu = seasonal_naive(ts, 8);
    const ResidualPool residuals = build_residual_pool(ts, params);

    RngStream rng = stream(22);
    const SampleMatrix out = forecast_csp({ts, 8, 50, rng}, params);
    for (int h = 0; h < 8; ++h) {
        const SeasonalPool pool = build_seasonal_pool(ts, h + 1, params.recency_rate);
        std::set<double> support(pool.values.begin(), pool.values.end());
        for (double r : residuals.residuals) {
            support.insert(mu[static_cast<std::size_t>(h)] + r);
        }
        for (int b = 0; b < 50; ++b) {
            CHECK(support.count(out.at(h, b)) == 1);
        }
    }
}

TEST_CASE("constant series is a fixed point of every forecaster") {
    const TimeSeries ts = make_series(std::vector<double>(60, 4.25), 12);
    for (const auto& name : method_names()) {
        RngStream rng = stream(31);
        const SampleMatrix out = make_forecaster(name)({ts, 5, 40, rng});
        for (int h = 0; h < 5; ++h) {
            for (int b = 0; b < 40; ++b) {
                INFO(name);
                CHECK(out.at(h, b) == 4.25);
            }
        }
    }
}

TEST_CASE("forecasters are deterministic given the stream") {
    std::vector<double> values(80);
    RngStream noise = stream(41);
    for (auto& v : values) v = noise.next_double() * 3.0 + 10.0;
    const TimeSeries ts = make_series(values, 24);
    for (const auto& name : method_names()) {
        RngStream rng_a = stream(42);
        RngStream rng_b = stream(42);
        const Forecaster forecaster = make_forecaster(name);
        CHECK(forecaster({ts, 4, 30, rng_a}) == forecaster({ts, 4, 30, rng_b}));
    }
}

TEST_CASE("seasonal branch frequency matches the mixture weight") {
    const int budget = 100000;
    // seasonal pool {1, 2}, residual branch {3, 3, 4}: disjoint supports
    const TimeSeries thin = make_series({1, 40, 50, 2, 41, 52}, 3);
    // seasonal pool {1, 2, 3}, residual branch {4, 5}
    const TimeSeries full = make_series({1, 40, 50, 2, 41, 52, 3, 42, 54}, 3);

    CspParams params;
    params.recency_rate = 0.0;

    auto seasonal_fraction = [&](const TimeSeries& ts, CspVariant variant, double cutoff) {
        CspParams p = params;
        p.variant = variant;
        RngStream rng = stream(51);
        const SampleMatrix out = forecast_csp({ts, 1, budget, rng}, p);
        int seasonal = 0;
        for (int b = 0; b < budget; ++b) {
            if (out.at(0, b) <= cutoff) ++seasonal;
        }
        return static_cast<double>(seasonal) / budget;
    };

    // thin pool (2 < min_pool): adaptive weight 0.3, fixed stays 0.5
    CHECK(std::abs(seasonal_fraction(thin, CspVariant::Adaptive, 2.5) - 0.3) < 0.01);
    CHECK(std::abs(seasonal_fraction(thin, CspVariant::Fixed, 2.5) - 0.5) < 0.01);
    // full pool: adaptive weight 0.5
    CHECK(std::abs(seasonal_fraction(full, CspVariant::Adaptive, 3.5) - 0.5) < 0.01);
}

TEST_CASE("npts recency weighting") {
    const TimeSeries ts = make_series({1, 2}, 1);
    RngStream rng = stream(61);
    const int budget = 100000;
    const SampleMatrix out = forecast_npts({ts, 1, budget, rng}, std::log(2.0));
    int newer = 0;
    for (int b = 0; b < budget; ++b) {
        if (out.at(0, b) == 2.0) ++newer;
    }
    CHECK(std::abs(static_cast<double>(newer) / budget - 2.0 / 3.0) < 0.01);
}

TEST_CASE("npts with lambda 0 resamples uniformly") {
    const TimeSeries ts = make_series({1, 2, 3, 4}, 1);
    RngStream rng = stream(62);
    const int budget = 100000;
    const SampleMatrix out = forecast_npts({ts, 1, budget, rng}, 0.0);
    std::map<double, int> counts;
    for (int b = 0; b < budget; ++b) ++counts[out.at(0, b)];
    for (const auto& [value, count] : counts) {
        CHECK(std::abs(static_cast<double>(count) / budget - 0.25) < 0.01);
    }
}

TEST_CASE("npts recency limit collapses onto the last observation") {
    const TimeSeries ts = make_series({5, 6, 7, 8, 9}, 1);
    RngStream rng = stream(63);
    const SampleMatrix out = forecast_npts({ts, 2, 50, rng}, 1e3);
    for (int h = 0; h < 2; ++h) {
        for (int b = 0; b < 50; ++b) {
            CHECK(out.at(h, b) == 9.0);
        }
    }
}

TEST_CASE("seasonal npts with m=1 equals plain npts") {
    const TimeSeries ts = make_series({2, 4, 6, 8, 10}, 1);
    RngStream rng_a = stream(64);
    RngStream rng_b = stream(64);
    const SampleMatrix plain = forecast_npts({ts, 3, 40, rng_a}, 0.01);
    const SampleMatrix seasonal = forecast_seasonal_npts({ts, 3, 40, rng_b}, 0.01);
    CHECK(plain == seasonal);
}

TEST_CASE("seasonal npts draws only same-phase values") {
    // strictly periodic: each step ahead must reproduce the phase value
    std::vector<double> values;
    for (int cycle = 0; cycle < 5; ++cycle) {
        for (int p = 0; p < 4; ++p) {
            values.push_back(static_cast<double>(p * 10));
        }
    }
    const TimeSeries ts = make_series(values, 4);
    RngStream rng = stream(65);
    const SampleMatrix out = forecast_seasonal_npts({ts, 8, 30, rng}, 0.3);
    for (int h = 0; h < 8; ++h) {
        const double expected = static_cast<double>((h % 4) * 10);
        for (int b = 0; b < 30; ++b) {
            CHECK(out.at(h, b) == expected);
        }
    }
}

TEST_CASE("acf period detection on a pure sinusoid") {
    std::vector<double> values(120);
    for (std::size_t t = 0; t < values.size(); ++t) {
        values[t] = 5.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 12.0);
    }
    const TimeSeries ts = make_series(values, 1);
    const auto period = detect_period_acf(ts, 0.3);
    REQUIRE(period.has_value());
    CHECK(*period == 12);
}

TEST_CASE("acf period detection finds the cycle, not the short-lag ridge") {
    // a period-24 sinusoid has raw ACF maximized at lag 2; the detector
    // must still report 24
    std::vector<double> values(96);
    for (std::size_t t = 0; t < values.size(); ++t) {
        values[t] = 50.0 + 10.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 24.0);
    }
    const TimeSeries ts = make_series(values, 1);
    const auto period = detect_period_acf(ts, 0.3);
    REQUIRE(period.has_value());
    CHECK(*period == 24);
}

TEST_CASE("acf detection returns nothing for constant series") {
    const TimeSeries ts = make_series(std::vector<double>(50, 2.0), 1);
    CHECK_FALSE(detect_period_acf(ts, 0.3).has_value());
}

TEST_CASE("acf detection returns nothing for white noise") {
    std::vector<double> values(200);
    RngStream noise = stream(71);
    for (auto& v : values) v = noise.next_gaussian();
    const TimeSeries ts = make_series(values, 1);

    // oracle: recompute the ACF by the direct formula and confirm that no
    // scanned lag exceeds the threshold for this fixed stream
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double denom = 0.0;
    for (double v : values) denom += (v - mean) * (v - mean);
    for (long lag = 2; lag <= 100; ++lag) {
        double num = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < values.size(); ++t) {
            num += (values[t] - mean) * (values[t + static_cast<std::size_t>(lag)] - mean);
        }
        CHECK(num / denom < 0.3);
    }

    CHECK_FALSE(detect_period_acf(ts, 0.3).has_value());
}

TEST_CASE("adaptive window sampler extrapolates a ramp exactly") {
    std::vector<double> values(40);
    for (std::size_t t = 0; t < values.size(); ++t) {
        values[t] = static_cast<double>(t + 1);
    }
    const TimeSeries ts = make_series(values, 1);
    RngStream rng = stream(81);
    const SampleMatrix out = forecast_adaptive_window_mci({ts, 4, 30, rng}, 0.3);
    for (int h = 0; h < 4; ++h) {
        for (int b = 0; b < 30; ++b) {
            CHECK(out.at(h, b) == doctest::Approx(40.0 + h + 1));
        }
    }
}

TEST_CASE("adaptive window samples stay on observed differences") {
    std::vector<double> values(50);
    RngStream noise = stream(82);
    for (auto& v : values) v = noise.next_double() * 4.0;
    const TimeSeries ts = make_series(values, 1);
    const double last = values.back();

    RngStream rng = stream(83);
    const SampleMatrix out = forecast_adaptive_window_mci({ts, 5, 40, rng}, 0.3);
    std::set<double> all_diffs;
    for (std::size_t t = 0; t < values.size(); ++t) {
        for (std::size_t s = 0; s < t; ++s) {
            all_diffs.insert(last + (values[t] - values[s]));
        }
    }
    for (int h = 0; h < 5; ++h) {
        for (int b = 0; b < 40; ++b) {
            CHECK(all_diffs.count(out.at(h, b)) == 1);
        }
    }
}

TEST_CASE("empirical pool modes") {
    {
        const TimeSeries ts = make_series({5}, 1);
        RngStream rng = stream(91);
        const SampleMatrix out = forecast_empirical_pool({ts, 2, 20, rng}, PoolMode::Full);
        for (int h = 0; h < 2; ++h) {
            for (int b = 0; b < 20; ++b) {
                CHECK(out.at(h, b) == 5.0);
            }
        }
    }
    {
        const TimeSeries ts = make_series({1, 2, 3, 4, 9}, 1);
        RngStream rng = stream(92);
        const SampleMatrix out = forecast_empirical_pool({ts, 2, 20, rng}, PoolMode::Rolling, 1);
        for (int h = 0; h < 2; ++h) {
            for (int b = 0; b < 20; ++b) {
                CHECK(out.at(h, b) == 9.0);
            }
        }
    }
    {
        const TimeSeries ts = make_series({2, 4, 6, 8}, 1);
        RngStream rng_a = stream(93);
        RngStream rng_b = stream(93);
        const SampleMatrix full = forecast_empirical_pool({ts, 3, 25, rng_a}, PoolMode::Full);
        const SampleMatrix seasonal =
            forecast_empirical_pool({ts, 3, 25, rng_b}, PoolMode::Seasonal);
        CHECK(full == seasonal);
    }
}

TEST_CASE("unknown method names are rejected with the valid list") {
    CHECK_THROWS_WITH_AS(make_forecaster("definitely-not-a-method"),
                         doctest::Contains("csp-adaptive"), std::invalid_argument);
}

} // TEST_SUITE
