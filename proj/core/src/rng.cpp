#include "cspbench/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cspbench {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline void fnv_byte(std::uint64_t& h, unsigned char b) {
    h ^= b;
    h *= kFnvPrime;
}

inline void fnv_u64(std::uint64_t& h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        fnv_byte(h, static_cast<unsigned char>(v >> (8 * i)));
    }
}

inline void fnv_str(std::uint64_t& h, std::string_view s) {
    fnv_u64(h, s.size());
    for (char c : s) {
        fnv_byte(h, static_cast<unsigned char>(c));
    }
}

} // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t key) {
    std::uint64_t sm = key;
    for (auto& word : state_) {
        word = splitmix64_next(sm);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = 1; // all-zero state is the one invalid xoshiro state
    }
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::next_index(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("next_index: n must be positive");
    }
    const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r < threshold);
    return static_cast<std::size_t>(r % n);
}

double RngStream::next_gaussian() {
    // Low bit forced on so u1 is never zero.
    const double u1 = static_cast<double>((next_u64() >> 11) | 1ull) * 0x1.0p-53;
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t hash_key(std::initializer_list<std::string_view> fields,
                       std::initializer_list<std::uint64_t> ints) {
    std::uint64_t h = kFnvOffset;
    for (std::uint64_t v : ints) {
        fnv_u64(h, v);
    }
    for (std::string_view s : fields) {
        fnv_str(h, s);
    }
    return h;
}

TaskRng derive_rng(const SeedSpec& seed, std::string_view method,
                   std::string_view dataset, std::string_view series_id,
                   std::int64_t window) {
    const std::uint64_t w = static_cast<std::uint64_t>(window);
    const std::uint64_t task_key =
        hash_key({"task", dataset, series_id}, {seed.driver_seed, seed.method_seed, w});
    const std::uint64_t method_key =
        hash_key({"draw", dataset, series_id, method}, {seed.driver_seed, seed.method_seed, w});
    return TaskRng{RngStream(task_key), RngStream(method_key)};
}

} // namespace cspbench
