#include "phlab/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "phlab/errors.hpp"

namespace phlab {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

// --- PPM / PGM ---------------------------------------------------------

struct PnmReader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            std::uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    }

    int read_uint() {
        skip_space_and_comments();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw DecodeError("pnm: malformed header (expected integer)");
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000'000L) throw DecodeError("pnm: header value out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

Image decode_pnm(const std::vector<std::uint8_t>& bytes) {
    const int channels = bytes[1] == '6' ? 3 : 1;
    PnmReader r{bytes, 2};
    const int width = r.read_uint();
    const int height = r.read_uint();
    const int maxval = r.read_uint();
    if (width <= 0 || height <= 0) throw DecodeError("pnm: non-positive dimensions");
    if (maxval != 255) throw UnsupportedFormatError("pnm: only maxval 255 is supported");
    // Exactly one whitespace byte separates the header from the raster.
    if (r.pos >= bytes.size() || !std::isspace(bytes[r.pos])) {
        throw DecodeError("pnm: missing raster separator");
    }
    ++r.pos;

    const std::size_t need = static_cast<std::size_t>(width) * height * channels;
    if (bytes.size() - r.pos < need) throw DecodeError("pnm: truncated raster data");

    Image img(width, height, channels);
    for (std::size_t i = 0; i < need; ++i) {
        img.data[i] = bytes[r.pos + i] / 255.0;
    }
    return img;
}

// --- PNG ----------------------------------------------------------------

std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 + 25 || std::memcmp(bytes.data(), kPngSignature, 8) != 0) {
        throw DecodeError("png: bad signature");
    }

    int width = 0, height = 0, channels = 0;
    bool have_ihdr = false, have_iend = false;
    std::vector<std::uint8_t> idat;

    std::size_t pos = 8;
    while (pos + 8 <= bytes.size() && !have_iend) {
        const std::uint32_t len = be32(&bytes[pos]);
        if (pos + 12 + static_cast<std::size_t>(len) > bytes.size()) {
            throw DecodeError("png: truncated chunk");
        }
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const std::uint8_t* data = &bytes[pos + 8];
        const std::uint32_t crc_stored = be32(&bytes[pos + 8 + len]);
        std::uint32_t crc = crc32(0L, &bytes[pos + 4], len + 4);
        if (crc != crc_stored) throw DecodeError("png: chunk crc mismatch");

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw DecodeError("png: bad IHDR length");
            width = static_cast<int>(be32(data));
            height = static_cast<int>(be32(data + 4));
            const int bit_depth = data[8];
            const int color_type = data[9];
            const int compression = data[10];
            const int filter = data[11];
            const int interlace = data[12];
            if (width <= 0 || height <= 0) throw DecodeError("png: non-positive dimensions");
            if (bit_depth != 8) throw UnsupportedFormatError("png: only 8-bit depth is supported");
            if (color_type == 0) channels = 1;
            else if (color_type == 2) channels = 3;
            else throw UnsupportedFormatError("png: only gray (0) and rgb (2) color types are supported");
            if (compression != 0 || filter != 0) throw DecodeError("png: bad compression/filter method");
            if (interlace != 0) throw UnsupportedFormatError("png: interlaced streams are not supported");
            have_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            if (!have_ihdr) throw DecodeError("png: IDAT before IHDR");
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            have_iend = true;
        }
        // Ancillary chunks are skipped.
        pos += 12 + len;
    }
    if (!have_ihdr || !have_iend || idat.empty()) throw DecodeError("png: missing required chunks");

    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(height) * (stride + 1));
    uLongf raw_len = raw.size();
    if (uncompress(raw.data(), &raw_len, idat.data(), idat.size()) != Z_OK || raw_len != raw.size()) {
        throw DecodeError("png: inflate failed");
    }

    // Undo per-row filters in place.
    const int bpp = channels;
    std::vector<std::uint8_t> prev(stride, 0);
    Image img(width, height, channels);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = &raw[static_cast<std::size_t>(y) * (stride + 1)];
        const std::uint8_t filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
            case 0:
                break;
            case 1:  // Sub
                for (std::size_t i = bpp; i < stride; ++i) cur[i] += cur[i - bpp];
                break;
            case 2:  // Up
                for (std::size_t i = 0; i < stride; ++i) cur[i] += prev[i];
                break;
            case 3:  // Average
                for (std::size_t i = 0; i < stride; ++i) {
                    const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                    cur[i] += static_cast<std::uint8_t>((a + prev[i]) / 2);
                }
                break;
            case 4:  // Paeth
                for (std::size_t i = 0; i < stride; ++i) {
                    const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                    const int c = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
                    cur[i] += static_cast<std::uint8_t>(paeth(a, prev[i], c));
                }
                break;
            default:
                throw DecodeError("png: unknown row filter");
        }
        std::memcpy(prev.data(), cur, stride);
        for (std::size_t i = 0; i < stride; ++i) {
            img.data[static_cast<std::size_t>(y) * stride + i] = cur[i] / 255.0;
        }
    }
    return img;
}

}  // namespace

Image decode_image(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
        return decode_pnm(bytes);
    }
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
        return decode_png(bytes);
    }
    throw DecodeError("decode_image: unrecognized format");
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
    if (img.channels != 1 && img.channels != 3) {
        throw ContractError("encode_ppm: expects 1 or 3 channels");
    }
    std::string header = (img.channels == 3 ? "P6\n" : "P5\n") + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.data.size());
    for (double v : img.data) {
        long byte = std::lround(v * 255.0);
        out.push_back(static_cast<std::uint8_t>(std::clamp(byte, 0L, 255L)));
    }
    return out;
}

Image read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    Image img = decode_image(bytes);
    img.id = path.stem().string();
    return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
    auto bytes = encode_ppm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

}  // namespace phlab
