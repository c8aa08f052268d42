#pragma once

#include <span>
#include <vector>

namespace cspbench {

/// Empirical quantile of an ascending-sorted sample by linear interpolation
/// at fractional rank h = (n-1)*q (the "type-7" rule):
///
///   q(s, p) = s[floor(h)] + (h - floor(h)) * (s[floor(h)+1] - s[floor(h)])
///
/// This is documented bit-exactly so other implementations can match.
/// Throws std::invalid_argument on an empty sample or q outside [0, 1].
double empirical_quantile(std::span<const double> sorted_samples, double q);

/// Quantiles of an unsorted sample; sorts one copy internally.
std::vector<double> empirical_quantiles(std::span<const double> samples,
                                        std::span<const double> levels);

} // namespace cspbench
