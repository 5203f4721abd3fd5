#include "phlab/binary_hash.hpp"

#include <bit>

#include "phlab/errors.hpp"

namespace phlab {

namespace {
int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string BinaryHash::to_hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string out(2 * kBytes, '0');
    for (int i = 0; i < kBytes; ++i) {
        out[2 * i] = digits[bytes_[i] >> 4];
        out[2 * i + 1] = digits[bytes_[i] & 0xf];
    }
    return out;
}

BinaryHash BinaryHash::from_hex(std::string_view hex) {
    if (hex.size() != 2 * kBytes) {
        throw ConfigError("hash hex string must be exactly 24 characters");
    }
    std::array<std::uint8_t, kBytes> bytes{};
    for (int i = 0; i < kBytes; ++i) {
        const int hi = hex_nibble(hex[2 * i]);
        const int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ConfigError("hash hex string contains a non-hex character");
        bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return BinaryHash(bytes);
}

double hamming_similarity(const BinaryHash& h1, const BinaryHash& h2) {
    int differing = 0;
    for (int i = 0; i < BinaryHash::kBytes; ++i) {
        differing += std::popcount(static_cast<unsigned>(h1.bytes()[i] ^ h2.bytes()[i]));
    }
    return static_cast<double>(BinaryHash::kBits - differing) / BinaryHash::kBits;
}

std::array<double, BinaryHash::kBits> signed_view(const BinaryHash& h) {
    std::array<double, BinaryHash::kBits> out;
    for (int i = 0; i < BinaryHash::kBits; ++i) out[i] = h.bit(i) ? 1.0 : -1.0;
    return out;
}

}  // namespace phlab
