#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "phlab/image.hpp"

namespace phlab {

/// Decodes a PPM (P6), PGM (P5) or PNG (8-bit gray/rgb, non-interlaced)
/// byte stream. Integer channel values v in [0,255] map to v/255.
Image decode_image(const std::vector<std::uint8_t>& bytes);

/// Canonical PPM/PGM encoding: "P6\n<w> <h>\n255\n" + raw samples (P5 for
/// single-channel). decode(encode(x)) round-trips bit-exactly.
std::vector<std::uint8_t> encode_ppm(const Image& img);

Image read_image(const std::filesystem::path& path);
void write_ppm(const Image& img, const std::filesystem::path& path);

}  // namespace phlab
