#include "cspbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cspbench/rng.hpp"

namespace cspbench {

const std::vector<std::string>& synth_families() {
    static const std::vector<std::string> families = {"sinusoid", "trend", "level-shift",
                                                      "noise"};
    return families;
}

namespace {

bool known_family(const std::string& family) {
    const auto& families = synth_families();
    return std::find(families.begin(), families.end(), family) != families.end();
}

} // namespace

std::vector<TimeSeries> generate_synthetic(const SynthSpec& spec) {
    if (!known_family(spec.family)) {
        std::string msg = "unknown generator '" + spec.family + "'; valid families:";
        for (const auto& f : synth_families()) {
            msg += " " + f;
        }
        throw std::invalid_argument(msg);
    }
    if (spec.n_series < 1 || spec.length < 1) {
        throw std::invalid_argument("synthetic spec: n_series and length must be >= 1");
    }
    if (spec.family != "noise" && spec.period <= 0.0) {
        throw std::invalid_argument("synthetic spec: period must be positive");
    }

    std::vector<TimeSeries> out;
    out.reserve(static_cast<std::size_t>(spec.n_series));
    for (int s = 0; s < spec.n_series; ++s) {
        RngStream rng(hash_key({"synth", spec.family, spec.name},
                               {spec.seed, static_cast<std::uint64_t>(s)}));

        const double phase = rng.next_double() * spec.period;

        // change points land in the middle half so every shift has history
        // on both sides
        std::vector<std::pair<long, double>> shifts;
        for (int c = 0; c < spec.shift_count; ++c) {
            const long lo = spec.length / 4;
            const long hi = 3 * spec.length / 4;
            const long pos = lo + static_cast<long>(rng.next_index(
                                      static_cast<std::size_t>(std::max(1l, hi - lo))));
            const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
            shifts.emplace_back(pos, sign * spec.shift_magnitude);
        }
        std::sort(shifts.begin(), shifts.end());

        TimeSeries series;
        series.id = spec.name + "_" + std::to_string(s);
        series.start = spec.start;
        series.freq = spec.freq;
        series.season = spec.season;
        series.values.resize(static_cast<std::size_t>(spec.length));

        double level_offset = 0.0;
        std::size_t next_shift = 0;
        for (long t = 0; t < spec.length; ++t) {
            while (next_shift < shifts.size() && shifts[next_shift].first == t) {
                level_offset += shifts[next_shift].second;
                ++next_shift;
            }
            double v = spec.base + level_offset + spec.noise_sigma * rng.next_gaussian();
            if (spec.family == "sinusoid" || spec.family == "trend") {
                v += spec.amplitude *
                     std::sin(2.0 * M_PI * (static_cast<double>(t) + phase) / spec.period);
            }
            if (spec.family == "trend") {
                v += spec.slope * static_cast<double>(t);
            }
            series.values[static_cast<std::size_t>(t)] = v;
        }
        out.push_back(std::move(series));
    }
    return out;
}

SynthSpec load_synth_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open synth spec '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("synth spec '" + path + "': " + e.what());
    }

    SynthSpec spec;
    spec.name = doc.value("name", spec.name);
    spec.family = doc.value("family", spec.family);
    spec.n_series = doc.value("n_series", spec.n_series);
    spec.length = doc.value("length", spec.length);
    spec.seed = doc.value("seed", spec.seed);
    spec.freq = doc.value("freq", spec.freq);
    spec.season = doc.value("season", spec.season);
    spec.start = doc.value("start", spec.start);
    spec.base = doc.value("base", spec.base);
    spec.amplitude = doc.value("amplitude", spec.amplitude);
    spec.period = doc.value("period", spec.period);
    spec.noise_sigma = doc.value("noise_sigma", spec.noise_sigma);
    spec.slope = doc.value("slope", spec.slope);
    spec.shift_count = doc.value("shift_count", spec.shift_count);
    spec.shift_magnitude = doc.value("shift_magnitude", spec.shift_magnitude);
    return spec;
}

} // namespace cspbench
