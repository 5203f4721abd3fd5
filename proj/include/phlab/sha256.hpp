#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace phlab {

/// Streaming SHA-256 (FIPS 180-4).
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    void update(const std::uint8_t* data, std::size_t len);
    std::array<std::uint8_t, 32> finalize();

    static std::array<std::uint8_t, 32> digest(const std::uint8_t* data, std::size_t len) {
        Sha256 h;
        h.update(data, len);
        return h.finalize();
    }

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t total_len_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffer_len_ = 0;
};

}  // namespace phlab
