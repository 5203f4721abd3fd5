#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace phlab {

/// 96-bit hash. Bits pack MSB-first: bit 0 is the most significant bit of
/// byte 0. Serializes as 24 lowercase hex characters in byte order.
class BinaryHash {
public:
    static constexpr int kBits = 96;
    static constexpr int kBytes = 12;

    BinaryHash() = default;
    explicit BinaryHash(const std::array<std::uint8_t, kBytes>& bytes) : bytes_(bytes) {}

    bool bit(int i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1; }
    void set_bit(int i, bool v) {
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i & 7)));
        if (v) bytes_[i >> 3] |= mask;
        else bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
    /// {-1,+1} view of a bit: 2*b - 1.
    int signed_bit(int i) const { return bit(i) ? 1 : -1; }

    const std::array<std::uint8_t, kBytes>& bytes() const { return bytes_; }

    std::string to_hex() const;
    /// Parses 24 hex characters (either case); throws ConfigError otherwise.
    static BinaryHash from_hex(std::string_view hex);

    bool operator==(const BinaryHash&) const = default;

private:
    std::array<std::uint8_t, kBytes> bytes_{};
};

/// Fraction of agreeing bit positions, in [0,1]. Equals (1 + s1.s2/96)/2
/// for the signed views.
double hamming_similarity(const BinaryHash& h1, const BinaryHash& h2);

/// Signed {-1,+1} view as doubles, for interpolation arithmetic.
std::array<double, BinaryHash::kBits> signed_view(const BinaryHash& h);

}  // namespace phlab
