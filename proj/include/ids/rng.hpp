#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ids {

// Counter-based random stream. Output i is a pure function of (key, i), so
// any number of streams can be derived from one seed and consumed from
// different threads without coordination; results do not depend on scheduling.
//
// The mixer is the splitmix64 finalizer applied to key ^ golden-ratio-spaced
// counters, which passes the usual avalanche checks and is cheap.
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    // Derive a sub-stream key from a seed and up to three stream coordinates
    // (e.g. tree index, node index). Distinct tuples give distinct keys.
    static Rng stream(std::uint64_t seed, std::uint64_t a = 0,
                      std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ull);
        k = mix(k ^ mix(a + 0xbf58476d1ce4e5b9ull));
        k = mix(k ^ mix(b + 0x94d049bb133111ebull));
        k = mix(k ^ mix(c + 0xd6e8feb86659fd93ull));
        return Rng(k);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + counter_ * 0x9e3779b97f4a7c15ull;
        ++counter_;
        return mix(z);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Multiply-shift range reduction:
    // bias is < 2^-64 per draw and the mapping is fully deterministic.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ids
