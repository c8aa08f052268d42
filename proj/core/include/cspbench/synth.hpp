#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspbench/time_series.hpp"

namespace cspbench {

/// Parameters for one synthetic dataset. Families:
///   sinusoid    base + amplitude*sin(2*pi*(t+phase)/period) + noise,
///               optionally with `shift_count` level shifts of size
///               +-shift_magnitude at per-series random positions
///   trend       sinusoid plus slope*t
///   level-shift pure level process with shifts (amplitude ignored)
///   noise       i.i.d. Gaussian around base
/// Everything is drawn from a stream keyed by (family, name, seed, series),
/// so a spec generates identical data everywhere.
struct SynthSpec {
    std::string name = "synthetic";
    std::string family = "sinusoid";
    int n_series = 10;
    long length = 480;
    std::uint64_t seed = 0;
    std::string freq = "H";
    int season = 24;
    std::string start = "2024-01-01T00:00:00";

    double base = 50.0;
    double amplitude = 10.0;
    double period = 24.0;
    double noise_sigma = 1.0;
    double slope = 0.0;
    int shift_count = 0;
    double shift_magnitude = 0.0;
};

/// Known generator family names.
const std::vector<std::string>& synth_families();

/// Deterministic synthetic dataset; throws std::invalid_argument for an
/// unknown family or invalid sizes.
std::vector<TimeSeries> generate_synthetic(const SynthSpec& spec);

/// Parses a JSON spec document (same field names as SynthSpec).
SynthSpec load_synth_spec(const std::string& path);

} // namespace cspbench
