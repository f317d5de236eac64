#pragma once

#include <cstdint>

// Counter-mode randomness: every random quantity is a pure function of a
// 64-bit stream key and an injective word encoding of what is being sampled.
//
// Stream keys:
//   root     = mix64(seed ^ kSeedSalt)
//   replica  = mix64(parent ^ mix64(replica + kReplicaSalt))
// Hashing a word sequence w_0..w_{n-1} under key K:
//   h_0 = K;  h_{j+1} = mix64(h_j ^ w_j) + kGolden;  out = mix64(h_n ^ n)
// A uniform in [0,1) takes the high 53 bits of the output word.
namespace lrperc::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kSeedSalt = 0x6a09e667f3bcc909ULL;
inline constexpr std::uint64_t kReplicaSalt = 0xbb67ae8584caa73bULL;

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t root_key(std::uint64_t seed) { return mix64(seed ^ kSeedSalt); }

constexpr std::uint64_t replica_key(std::uint64_t parent, std::uint64_t replica)
{
    return mix64(parent ^ mix64(replica + kReplicaSalt));
}

class Hasher {
public:
    explicit constexpr Hasher(std::uint64_t key) : h_(key) {}

    constexpr Hasher& absorb(std::uint64_t word)
    {
        h_ = mix64(h_ ^ word) + kGolden;
        ++count_;
        return *this;
    }
    constexpr Hasher& absorb_signed(std::int64_t word) { return absorb(static_cast<std::uint64_t>(word)); }

    constexpr std::uint64_t finish() const { return mix64(h_ ^ count_); }

private:
    std::uint64_t h_;
    std::uint64_t count_ = 0;
};

constexpr double to_unit(std::uint64_t word)
{
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

} // namespace lrperc::rng
