#pragma once

#include "ris/types.hpp"

#include <cstdint>
#include <random>

namespace ris {

/// SplitMix64 finaliser; used to key independent streams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream keys that separate the uses of one seed.
namespace stream_key {
inline constexpr std::uint64_t kAngles = 0x616e676c65730001ULL;
inline constexpr std::uint64_t kTrials = 0x747269616c730002ULL;
inline constexpr std::uint64_t kBootstrap = 0x626f6f7473740003ULL;
}  // namespace stream_key

/// One deterministic random stream. Derived from (seed, key, index) only,
/// so a trial sees the same numbers whatever thread runs it.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t key, std::uint64_t index = 0)
        : engine_(mix64(mix64(seed ^ key) + mix64(index))) {}

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    /// CN(0, 1): real and imaginary parts each N(0, 1/2).
    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * kHalfSqrt, im * kHalfSqrt};
    }
    std::uint64_t next_u64() { return engine_(); }
    std::mt19937_64& engine() { return engine_; }

private:
    static constexpr double kHalfSqrt = 0.70710678118654752440;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

CVector complex_normal_vector(RngStream& rng, int n);
CMatrix complex_normal_matrix(RngStream& rng, int rows, int cols);

}  // namespace ris
