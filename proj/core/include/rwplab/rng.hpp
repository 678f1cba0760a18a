#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rwplab {

// Counter-based pseudo-random stream. Output i of stream (seed, stream_id)
// depends only on (seed, stream_id, i), so independent substreams can be
// derived per sample index and results do not depend on evaluation order
// or worker count.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream_id + 0xd1b54a32d192ed03ULL))),
          counter_(0) {}

    // Equivalent to the SplitMix64 sequence started at key_.
    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform on (0,1), never exactly 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard normal via Box-Muller. Two uniforms per draw; the cosine and
    // sine halves of each pair are both used.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Uniform integer in [0, bound) by rejection, bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

private:
    // SplitMix64 finalizer.
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rwplab
