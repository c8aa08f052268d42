#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "cspbench/sample_matrix.hpp"

namespace cspbench {

/// Raised when a window's targets sum to zero absolute value, which makes
/// the normalized quantile loss undefined.
struct ZeroScaleError : std::runtime_error {
    ZeroScaleError() : std::runtime_error("zero-scale window") {}
};

/// Empirical CRPS estimator form. Energy is the standard
/// (1/B)Sum|x_i - y| - (1/(2B^2))SumSum|x_i - x_j|; Fair replaces the
/// second divisor by 2B(B-1).
enum class CrpsEstimator { Energy, Fair };

/// Empirical CRPS of a predictive sample against a scalar outcome, computed
/// via the O(B log B) sorted identity (equal to the naive double sum to
/// within 1e-12). Throws std::invalid_argument on an empty sample.
double crps_empirical(std::span<const double> samples, double y,
                      CrpsEstimator estimator = CrpsEstimator::Energy);

/// Pinball (quantile) loss at level q: q(y - yhat) if y >= yhat,
/// else (1-q)(yhat - y). Requires 0 < q < 1.
double pinball(double y, double yhat, double q);

/// Normalized mean quantile loss over a level grid:
///   sum_h sum_q 2*pinball(y_h, q-hat_{h,q}, q) / (|levels| * sum_h |y_h|).
/// Throws ZeroScaleError when sum_h |y_h| == 0.
double mql_normalized(const SampleMatrix& samples, std::span<const double> y,
                      std::span<const double> levels);

/// Fraction of horizons whose target lies inside the central (1-alpha)
/// interval [q(alpha/2), q(1-alpha/2)] (closed endpoints).
double coverage(const SampleMatrix& samples, std::span<const double> y, double alpha);

/// Mean over horizons of the central-interval width at level 1-alpha.
double interval_width(const SampleMatrix& samples, double alpha);

/// All per-window metrics in one pass (one sort per horizon row).
struct WindowScores {
    double crps = 0.0;     // mean over horizons
    double mql_norm = 0.0; // NaN when the window is zero-scale
    double coverage = 0.0;
    double width = 0.0;
    bool zero_scale = false;
    std::vector<double> crps_h;
    std::vector<double> mql_h; // mean 2*pinball per horizon, before scaling
    std::vector<double> width_h;
    std::vector<int> covered_h;
};

WindowScores score_window(const SampleMatrix& samples, std::span<const double> y,
                          std::span<const double> levels, double alpha,
                          CrpsEstimator estimator = CrpsEstimator::Energy);

/// Default quantile grid 0.1, 0.2, ..., 0.9.
const std::vector<double>& default_quantile_levels();

} // namespace cspbench
