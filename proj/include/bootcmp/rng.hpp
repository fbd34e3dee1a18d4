#pragma once

#include <cstdint>

namespace bootcmp {

/// splitmix64 finalizer (Steele/Lea/Vigna). Stateless avalanche mix used both
/// for substream key derivation and as the per-substream generator step.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Tags keep unrelated resampling procedures on disjoint random streams even
/// when they share a master seed and replicate index.
enum class StreamPurpose : std::uint64_t {
    bootstrap = 0x626F6F7473747261ull,
    permutation = 0x7065726D75746174ull,
    coverage_trial = 0x636F767274726C73ull,
    coverage_boot = 0x636F76726267656Eull,
    repeated_run = 0x7270746472756E73ull,
};

/// Deterministic generator. All random draws in the library go through this
/// type so that results are identical across platforms, runs, and worker
/// counts; the C++ standard distributions are implementation-defined and are
/// deliberately not used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n), n >= 1. Lemire multiply-shift with rejection
    /// so the draw is exactly unbiased.
    std::uint64_t next_below(std::uint64_t n) noexcept {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool next_coin() noexcept { return (next_u64() >> 63) != 0; }

    /// Uniform double strictly inside (0, 1): 53 random bits centered in the
    /// half-open cell, so inverse-CDF transforms never see 0 or 1.
    double next_unit_open() noexcept {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent substream per (master seed, purpose, index).
/// The derivation is a pure function of its arguments, so replicates may be
/// evaluated in any order by any number of workers with identical results.
class ReplicateStream {
public:
    ReplicateStream(std::uint64_t master_seed, StreamPurpose purpose) noexcept
        : master_seed_(master_seed), purpose_(static_cast<std::uint64_t>(purpose)) {}

    Rng substream(std::uint64_t replicate_index) const noexcept {
        std::uint64_t key = mix64(master_seed_ ^ 0x243F6A8885A308D3ull);
        key = mix64(key ^ purpose_);
        key = mix64(key ^ replicate_index);
        return Rng(key);
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t purpose_;
};

/// Forks a fresh 64-bit master seed for a nested procedure (one coverage
/// trial, one cross-validation run) from a parent seed and an index.
inline std::uint64_t fork_seed(std::uint64_t parent_seed, StreamPurpose purpose,
                               std::uint64_t index) noexcept {
    std::uint64_t key = mix64(parent_seed ^ 0x452821E638D01377ull);
    key = mix64(key ^ static_cast<std::uint64_t>(purpose));
    return mix64(key ^ index);
}

}  // namespace bootcmp
