#pragma once

#include <cmath>
#include <cstdint>

namespace phlab {

/// Counter-based pseudo-random generator (splitmix64 finalizer over a
/// strided counter). Unlike the standard <random> distributions, the
/// produced sequence is fully specified here, so seeded artifacts
/// (hashing matrices, datasets, experiment draws) reproduce bit-for-bit
/// across standard library implementations.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix(seed ^ mix(stream + kStreamSalt))) {}

    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    /// splitmix64 output function.
    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Derives an independent seed from (base, tag, index); used to split
    /// per-sample streams off an experiment seed.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t tag, std::uint64_t index = 0) {
        return mix(base ^ mix(tag) ^ (mix(index + 1) << 1));
    }

    std::uint64_t next_u64() { return mix(base_ + counter_++ * kGolden); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform index in [0, n); n must be nonzero.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; draws two uniforms per pair.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    static constexpr std::uint64_t kStreamSalt = 0x632d7068ULL;

    std::uint64_t base_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace phlab
