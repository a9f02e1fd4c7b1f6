#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace leodtn {

// splitmix64 finalizer; good avalanche, cheap, endian-free.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based deterministic random stream. Streams derived from the same
/// seed and path always produce the same sequence, independent of how other
/// streams were consumed. Used everywhere reproducibility matters.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(mix64(seed)) {}

    static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = mix64(seed);
        for (std::uint64_t p : path) s = mix64(s ^ mix64(p));
        return RngStream(raw_tag{}, s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Standard normal via Box-Muller (consumes two draws).
    double normal() {
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    struct raw_tag {};
    RngStream(raw_tag, std::uint64_t s) : state_(s) {}
    std::uint64_t state_;
};

}  // namespace leodtn
