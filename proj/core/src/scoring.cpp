#include "cspbench/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cspbench/quantile.hpp"

namespace cspbench {

double crps_empirical(std::span<const double> samples, double y, CrpsEstimator estimator) {
    const std::size_t n = samples.size();
    if (n == 0) {
        throw std::invalid_argument("empty sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    double abs_term = 0.0;
    double spread_term = 0.0; // sum over ordered pairs of |x_i - x_j|, via sorted identity
    for (std::size_t k = 0; k < n; ++k) {
        abs_term += std::abs(sorted[k] - y);
        spread_term += sorted[k] * (2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0);
    }
    spread_term *= 2.0;

    const double nd = static_cast<double>(n);
    double result = abs_term / nd;
    if (estimator == CrpsEstimator::Fair) {
        if (n > 1) {
            result -= spread_term / (2.0 * nd * (nd - 1.0));
        }
    } else {
        result -= spread_term / (2.0 * nd * nd);
    }
    return result;
}

double pinball(double y, double yhat, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::invalid_argument("pinball: level must be in (0, 1)");
    }
    return y >= yhat ? q * (y - yhat) : (1.0 - q) * (yhat - y);
}

namespace {

double target_scale(std::span<const double> y) {
    double scale = 0.0;
    for (double v : y) {
        scale += std::abs(v);
    }
    return scale;
}

void check_targets(const SampleMatrix& samples, std::span<const double> y) {
    if (static_cast<int>(y.size()) != samples.horizon()) {
        throw std::invalid_argument("target length does not match sample horizon");
    }
}

} // namespace

double mql_normalized(const SampleMatrix& samples, std::span<const double> y,
                      std::span<const double> levels) {
    check_targets(samples, y);
    if (levels.empty()) {
        throw std::invalid_argument("mql_normalized: empty level grid");
    }
    const double scale = target_scale(y);
    if (scale == 0.0) {
        throw ZeroScaleError();
    }

    double loss = 0.0;
    std::vector<double> row;
    for (int h = 0; h < samples.horizon(); ++h) {
        row.assign(samples.row(h).begin(), samples.row(h).end());
        std::sort(row.begin(), row.end());
        for (double q : levels) {
            loss += 2.0 * pinball(y[static_cast<std::size_t>(h)], empirical_quantile(row, q), q);
        }
    }
    return loss / (static_cast<double>(levels.size()) * scale);
}

double coverage(const SampleMatrix& samples, std::span<const double> y, double alpha) {
    check_targets(samples, y);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("coverage: alpha must be in (0, 1)");
    }
    int covered = 0;
    std::vector<double> row;
    for (int h = 0; h < samples.horizon(); ++h) {
        row.assign(samples.row(h).begin(), samples.row(h).end());
        std::sort(row.begin(), row.end());
        const double lo = empirical_quantile(row, alpha / 2.0);
        const double hi = empirical_quantile(row, 1.0 - alpha / 2.0);
        const double target = y[static_cast<std::size_t>(h)];
        if (target >= lo && target <= hi) {
            ++covered;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(samples.horizon());
}

double interval_width(const SampleMatrix& samples, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("interval_width: alpha must be in (0, 1)");
    }
    double total = 0.0;
    std::vector<double> row;
    for (int h = 0; h < samples.horizon(); ++h) {
        row.assign(samples.row(h).begin(), samples.row(h).end());
        std::sort(row.begin(), row.end());
        total += empirical_quantile(row, 1.0 - alpha / 2.0) - empirical_quantile(row, alpha / 2.0);
    }
    return total / static_cast<double>(samples.horizon());
}

WindowScores score_window(const SampleMatrix& samples, std::span<const double> y,
                          std::span<const double> levels, double alpha,
                          CrpsEstimator estimator) {
    check_targets(samples, y);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("score_window: alpha must be in (0, 1)");
    }

    WindowScores scores;
    const int horizon = samples.horizon();
    scores.crps_h.resize(static_cast<std::size_t>(horizon));
    scores.mql_h.resize(static_cast<std::size_t>(horizon));
    scores.width_h.resize(static_cast<std::size_t>(horizon));
    scores.covered_h.resize(static_cast<std::size_t>(horizon));

    const double scale = target_scale(y);
    scores.zero_scale = scale == 0.0;

    double pinball_sum = 0.0;
    int covered = 0;
    std::vector<double> row;
    for (int h = 0; h < horizon; ++h) {
        const std::size_t hi = static_cast<std::size_t>(h);
        const double target = y[hi];
        row.assign(samples.row(h).begin(), samples.row(h).end());
        std::sort(row.begin(), row.end());

        scores.crps_h[hi] = crps_empirical(row, target, estimator);

        const double q_lo = empirical_quantile(row, alpha / 2.0);
        const double q_hi = empirical_quantile(row, 1.0 - alpha / 2.0);
        scores.width_h[hi] = q_hi - q_lo;
        scores.covered_h[hi] = (target >= q_lo && target <= q_hi) ? 1 : 0;
        covered += scores.covered_h[hi];

        double horizon_pinball = 0.0;
        for (double q : levels) {
            horizon_pinball += 2.0 * pinball(target, empirical_quantile(row, q), q);
        }
        scores.mql_h[hi] = horizon_pinball / static_cast<double>(levels.size());
        pinball_sum += horizon_pinball;

        scores.crps += scores.crps_h[hi];
        scores.width += scores.width_h[hi];
    }

    const double hd = static_cast<double>(horizon);
    scores.crps /= hd;
    scores.width /= hd;
    scores.coverage = static_cast<double>(covered) / hd;
    scores.mql_norm = scores.zero_scale
                          ? std::numeric_limits<double>::quiet_NaN()
                          : pinball_sum / (static_cast<double>(levels.size()) * scale);
    return scores;
}

const std::vector<double>& default_quantile_levels() {
    static const std::vector<double> levels = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    return levels;
}

} // namespace cspbench
