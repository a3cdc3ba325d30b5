#pragma once

// Random number generation for the simulator.
//
// Generator: xoshiro256** (Blackman & Vigna), 256-bit state, period 2^256 - 1;
// passes BigCrush and PractRand. Its output sequence is fixed by its published
// reference code, so results here do not depend on the standard library.
//
// Substreams: stream `k` of seed `s` is the generator whose four state words are
// the first four outputs of SplitMix64 started at mix(s) ^ mix(k + 1), where
// mix is the SplitMix64 finalizer. Work items that own their own stream make
// results independent of how they are scheduled.
//
// Normal variates: Doornik's 128-block ziggurat (ZIGNOR), an exact rejection
// method; the tail beyond 3.4426 is sampled by Marsaglia's exponential method.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace vise {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256StarStar(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform_open() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

/// Generator for stream `stream` of `seed`.
inline Xoshiro256StarStar substream(std::uint64_t seed, std::uint64_t stream) noexcept {
    return Xoshiro256StarStar(splitmix64_mix(seed) ^ splitmix64_mix(stream + 1));
}

/// Standard normal sampler (ziggurat, exact).
class ZigguratNormal {
public:
    static constexpr int blocks = 128;
    static constexpr double tail_start = 3.442619855899;
    static constexpr double block_area = 9.91256303526217e-3;

    ZigguratNormal() noexcept : tab_(&tables()) {}

    template <class Engine>
    double operator()(Engine& rng) const noexcept {
        const Tables& tab = *tab_;
        for (;;) {
            const std::uint64_t bits = rng();
            const double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
            const unsigned i = static_cast<unsigned>(bits & 0x7F);
            if (std::abs(u) < tab.ratio[i]) return u * tab.x[i];
            if (i == 0) return sample_tail(rng, u < 0.0);
            const double x = u * tab.x[i];
            const double f0 = std::exp(-0.5 * (tab.x[i] * tab.x[i] - x * x));
            const double f1 = std::exp(-0.5 * (tab.x[i + 1] * tab.x[i + 1] - x * x));
            if (f1 + rng.uniform_open() * (f0 - f1) < 1.0) return x;
        }
    }

    template <class Engine>
    double operator()(Engine& rng, double mean, double stddev) const noexcept {
        return mean + stddev * (*this)(rng);
    }

    struct Tables {
        std::array<double, blocks + 1> x{};
        std::array<double, blocks> ratio{};
    };

    /// Block edges: x[0] is the base block's virtual width V / f(R), x[1] = R,
    /// x[blocks] = 0.
    static const Tables& tables() noexcept {
        static const Tables tab = [] {
            Tables t;
            double f = std::exp(-0.5 * tail_start * tail_start);
            t.x[0] = block_area / f;
            t.x[1] = tail_start;
            t.x[blocks] = 0.0;
            for (int i = 2; i < blocks; ++i) {
                t.x[i] = std::sqrt(-2.0 * std::log(block_area / t.x[i - 1] + f));
                f = std::exp(-0.5 * t.x[i] * t.x[i]);
            }
            for (int i = 0; i < blocks; ++i) t.ratio[i] = t.x[i + 1] / t.x[i];
            return t;
        }();
        return tab;
    }

private:
    const Tables* tab_;

    template <class Engine>
    static double sample_tail(Engine& rng, bool negative) noexcept {
        double x;
        double y;
        do {
            x = std::log(rng.uniform_open()) / tail_start;
            y = std::log(rng.uniform_open());
        } while (-2.0 * y < x * x);
        return negative ? x - tail_start : tail_start - x;
    }
};

}  // namespace vise
