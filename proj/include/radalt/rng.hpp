#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

namespace radalt {

/// SplitMix64 step; used both as a stream mixer and as a stable hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive stable hash of a seed plus any number of indices.
/// Identical inputs give identical outputs on every platform; used to
/// derive per-example and per-role RNG streams.
inline std::uint64_t stable_hash(std::uint64_t seed) {
    std::uint64_t s = seed ^ 0xd6e8feb86659fd93ULL;
    return splitmix64(s);
}

template <typename... Rest>
std::uint64_t stable_hash(std::uint64_t seed, std::uint64_t head, Rest... rest) {
    std::uint64_t s = seed ^ 0xd6e8feb86659fd93ULL;
    std::uint64_t mixed = splitmix64(s) ^ head;
    return stable_hash(mixed, rest...);
}

inline constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

/// FNV-1a over raw bytes; used as a content checksum for binary files.
/// Pass the previous return value as `h` to checksum data in chunks.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = kFnvBasis) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic random stream. Distribution code is spelled out here
/// (rather than std:: distributions) so sequences are identical across
/// standard libraries for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal with E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double s = 1.0 / std::sqrt(2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace radalt
