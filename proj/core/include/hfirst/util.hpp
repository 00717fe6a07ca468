#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hfirst {

/// Round half away from zero (2.5 -> 3, -2.5 -> -3). Used for every
/// real-to-integer conversion in the pipeline so results are
/// platform-independent.
inline long long round_half_away(double v) { return std::llround(v); }

/// splitmix64 finalizer; used to derive independent sub-seeds from a master
/// seed (trial index, recording index, ...) without correlated streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }

/// FNV-1a 64-bit over a byte string; the config digest primitive.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v, int digits = 16);

/// Shortest decimal form of `v` that parses back to exactly `v`.
/// Keeps config echoes human-readable while staying lossless.
std::string fmt_double(double v);

/// Fisher-Yates with explicit draws from the engine, so shuffles are
/// identical across standard libraries (std::shuffle is not).
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

/// Run fn(0..n-1) on up to `jobs` threads. jobs <= 1 runs inline. The first
/// exception thrown by any iteration is rethrown after all threads join.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

} // namespace hfirst
