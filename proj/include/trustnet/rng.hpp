#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace trustnet {

// Deterministic 64-bit generator (splitmix64). The standard library engines
// are portable but its distributions are not; everything here is spelled out
// so identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). n must be > 0.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Box-Muller; one value per call, the twin is discarded to keep the
    // stream layout independent of call parity.
    double next_normal(double mean, double stddev) {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t fnv1a_step(std::uint64_t h, std::uint64_t byte) {
    return (h ^ byte) * 0x100000001b3ull;
}

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) h = fnv1a_step(h, c);
    return fnv1a_step(h, 0xff); // terminator so ("ab","c") != ("a","bc")
}

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) h = fnv1a_step(h, (v >> (8 * i)) & 0xff);
    return h;
}

inline std::uint64_t mix_key(std::uint64_t h) { return h; }

template <typename T, typename... Rest>
std::uint64_t mix_key(std::uint64_t h, const T& part, const Rest&... rest) {
    return mix_key(fnv1a(h, part), rest...);
}

} // namespace detail

// Derives an independent stream seed from a master seed and a stable key
// (tag plus ids/round numbers). Streams keyed by an entity are unaffected
// by entities that are not part of the key.
template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, const Parts&... parts) {
    std::uint64_t h = detail::fnv1a(0xcbf29ce484222325ull, master);
    h = detail::mix_key(h, tag, parts...);
    // splitmix finalizer to spread low-entropy keys
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

} // namespace trustnet
