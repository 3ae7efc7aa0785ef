#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace ousldp {

// Small self-contained generators so that simulation output is identical
// across standard libraries and across Monte Carlo worker counts.

/// SplitMix64; used to expand seeds into generator state.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

/// xoshiro256++ (Blackman & Vigna), seeded via SplitMix64.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& word : state_) word = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(operator()() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// Standard normal variates by the Marsaglia polar method.
/// Implemented here (rather than std::normal_distribution) so draws are
/// bit-identical for a given seed on every platform.
class NormalSampler {
public:
    explicit NormalSampler(Xoshiro256pp& gen) : gen_(&gen) {}

    double operator()() {
        if (has_cache_) {
            has_cache_ = false;
            return cache_;
        }
        double u, v, s;
        do {
            u = 2.0 * gen_->uniform() - 1.0;
            v = 2.0 * gen_->uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cache_ = v * f;
        has_cache_ = true;
        return u * f;
    }

private:
    Xoshiro256pp* gen_;
    bool has_cache_ = false;
    double cache_ = 0.0;
};

/// Stream for path `index` under `master_seed`. Distinct indices give
/// statistically independent generators, so parallel workers may process any
/// subset of indices and still reproduce the single-threaded result.
inline Xoshiro256pp path_stream(std::uint64_t master_seed, std::uint64_t index) {
    SplitMix64 sm{master_seed ^ (0xA3EC4E9B38C31A05ull + index * 0x9E3779B97F4A7C15ull)};
    return Xoshiro256pp(sm.next());
}

}  // namespace ousldp
