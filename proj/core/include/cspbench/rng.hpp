#pragma once

#include <cstdint>
#include <string_view>

namespace cspbench {

/// Experiment-level seeds. The driver seed identifies the whole run, the
/// method seed feeds every derived stream. Defaults are driver 0 / method 42.
struct SeedSpec {
    std::uint64_t driver_seed = 0;
    std::uint64_t method_seed = 42;
};

/// xoshiro256** pseudorandom stream (Blackman & Vigna, public domain).
///
/// The generator is pinned by name so that runs are bit-identical across
/// platforms and compilers: state is expanded from a 64-bit key with
/// splitmix64, and every draw below is defined in terms of exact integer
/// operations only.
class RngStream {
public:
    explicit RngStream(std::uint64_t key);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53 random bits.
    double next_double();

    /// Uniform index in {0, ..., n-1}, unbiased via rejection. n must be > 0.
    std::size_t next_index(std::size_t n);

    /// Standard normal via Box-Muller; always consumes exactly two uniforms.
    double next_gaussian();

private:
    std::uint64_t state_[4];
};

/// splitmix64 step; exposed for key expansion and tests.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Streams derived for one (dataset, series, window) evaluation task.
///
/// `task` hashes only the tuple fields and is therefore identical for every
/// method run on that window -- anything drawn from it (e.g. shared window
/// randomization) stays matched across methods. `method` additionally mixes
/// the method name and drives the actual sample draws.
struct TaskRng {
    RngStream task;
    RngStream method;
};

TaskRng derive_rng(const SeedSpec& seed, std::string_view method,
                   std::string_view dataset, std::string_view series_id,
                   std::int64_t window);

/// 64-bit key for an arbitrary list of labeled fields (FNV-1a over a
/// length-prefixed encoding). Used by derive_rng and the synthetic
/// generators; stable across platforms.
std::uint64_t hash_key(std::initializer_list<std::string_view> fields,
                       std::initializer_list<std::uint64_t> ints);

} // namespace cspbench
