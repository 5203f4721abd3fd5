#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <zlib.h>

#include <cmath>
#include <cstring>

#include "doctest.h"
#include "phlab/errors.hpp"
#include "phlab/image.hpp"
#include "phlab/image_io.hpp"
#include "phlab/rng.hpp"
#include "phlab/ssim.hpp"
#include "support.hpp"

using namespace phlab;

namespace {

std::vector<std::uint8_t> bytes_of(const char* s) {
    return std::vector<std::uint8_t>(s, s + std::strlen(s));
}

}  // namespace

TEST_CASE("decode P6 single red pixel") {
    std::vector<std::uint8_t> ppm = bytes_of("P6\n1 1\n255\n");
    ppm.push_back(255);
    ppm.push_back(0);
    ppm.push_back(0);
    const Image img = decode_image(ppm);
    CHECK(img.width == 1);
    CHECK(img.height == 1);
    CHECK(img.channels == 3);
    CHECK(img.data[0] == 1.0);
    CHECK(img.data[1] == 0.0);
    CHECK(img.data[2] == 0.0);
}

TEST_CASE("decode P5 all-zero") {
    std::vector<std::uint8_t> pgm = bytes_of("P5\n2 2\n255\n");
    pgm.insert(pgm.end(), 4, 0);
    const Image img = decode_image(pgm);
    CHECK(img.channels == 1);
    for (double v : img.data) CHECK(v == 0.0);
}

TEST_CASE("decode handles comments and arbitrary whitespace") {
    std::vector<std::uint8_t> ppm = bytes_of("P6 # wide\n# comment line\n 2\t1 \n255 ");
    ppm.insert(ppm.end(), {10, 20, 30, 40, 50, 60});
    const Image img = decode_image(ppm);
    CHECK(img.width == 2);
    CHECK(img.data[0] == doctest::Approx(10.0 / 255.0));
}

TEST_CASE("ppm round trip is bit-exact on a canonical corpus") {
    CounterRng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 1 + static_cast<int>(rng.uniform_index(9));
        const int h = 1 + static_cast<int>(rng.uniform_index(7));
        const int ch = rng.next_double() < 0.5 ? 1 : 3;
        // Canonical stream built directly, independent of encode_ppm.
        std::string header = (ch == 3 ? "P6\n" : "P5\n") + std::to_string(w) + " " +
                             std::to_string(h) + "\n255\n";
        std::vector<std::uint8_t> original(header.begin(), header.end());
        for (int i = 0; i < w * h * ch; ++i) {
            original.push_back(static_cast<std::uint8_t>(rng.uniform_index(256)));
        }
        CHECK(encode_ppm(decode_image(original)) == original);
    }
}

TEST_CASE("decode errors") {
    CHECK_THROWS_AS(decode_image(bytes_of("P7\n1 1\n255\n")), DecodeError);
    CHECK_THROWS_AS(decode_image(bytes_of("P6\n1 x\n255\n")), DecodeError);
    CHECK_THROWS_AS(decode_image(bytes_of("P6\n1 1\n255\n")), DecodeError);  // truncated raster
    CHECK_THROWS_AS(decode_image(bytes_of("garbage")), DecodeError);

    std::vector<std::uint8_t> deep = bytes_of("P6\n1 1\n65535\n");
    deep.insert(deep.end(), 6, 0);
    CHECK_THROWS_AS(decode_image(deep), UnsupportedFormatError);
}

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type,
               const std::vector<std::uint8_t>& data) {
    put_be32(out, static_cast<std::uint32_t>(data.size()));
    std::vector<std::uint8_t> body(type, type + 4);
    body.insert(body.end(), data.begin(), data.end());
    out.insert(out.end(), body.begin(), body.end());
    put_be32(out, static_cast<std::uint32_t>(crc32(0L, body.data(), body.size())));
}

// Reference PNG writer used as the independent oracle for the decoder:
// writes 8-bit gray/rgb with a chosen row filter applied per the spec.
std::vector<std::uint8_t> write_png(const std::vector<std::uint8_t>& raster, int w, int h, int ch,
                                    int filter) {
    const int bpp = ch;
    const std::size_t stride = static_cast<std::size_t>(w) * ch;
    std::vector<std::uint8_t> raw;
    std::vector<std::uint8_t> prev(stride, 0);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* cur = &raster[y * stride];
        raw.push_back(static_cast<std::uint8_t>(filter));
        for (std::size_t i = 0; i < stride; ++i) {
            const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
            const int b = prev[i];
            const int c = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
            int out = cur[i];
            switch (filter) {
                case 1: out -= a; break;
                case 2: out -= b; break;
                case 3: out -= (a + b) / 2; break;
                case 4: {
                    const int p = a + b - c;
                    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
                    out -= (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
                    break;
                }
                default: break;
            }
            raw.push_back(static_cast<std::uint8_t>(out & 0xff));
        }
        std::memcpy(prev.data(), cur, stride);
    }

    uLongf comp_len = compressBound(raw.size());
    std::vector<std::uint8_t> comp(comp_len);
    REQUIRE(compress(comp.data(), &comp_len, raw.data(), raw.size()) == Z_OK);
    comp.resize(comp_len);

    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(w));
    put_be32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8);                                           // bit depth
    ihdr.push_back(static_cast<std::uint8_t>(ch == 3 ? 2 : 0));  // color type
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", comp);
    put_chunk(png, "IEND", {});
    return png;
}

}  // namespace

TEST_CASE("png decode recovers raster under every row filter") {
    CounterRng rng(905);
    for (int ch : {1, 3}) {
        const int w = 5, h = 4;
        std::vector<std::uint8_t> raster(static_cast<std::size_t>(w) * h * ch);
        for (auto& v : raster) v = static_cast<std::uint8_t>(rng.uniform_index(256));
        for (int filter = 0; filter <= 4; ++filter) {
            const Image img = decode_image(write_png(raster, w, h, ch, filter));
            REQUIRE(img.width == w);
            REQUIRE(img.channels == ch);
            for (std::size_t i = 0; i < raster.size(); ++i) {
                REQUIRE(img.data[i] == doctest::Approx(raster[i] / 255.0));
            }
        }
    }
}

TEST_CASE("png decode errors") {
    std::vector<std::uint8_t> raster(12, 7);
    std::vector<std::uint8_t> png = write_png(raster, 2, 2, 3, 0);
    SUBCASE("corrupted crc") {
        png[20] ^= 0xff;
        CHECK_THROWS_AS(decode_image(png), DecodeError);
    }
    SUBCASE("unsupported bit depth") {
        png[24] = 16;  // IHDR bit depth byte
        CHECK_THROWS_AS(decode_image(png), DecodeError);
    }
}

TEST_CASE("resize: constant image is invariant") {
    Image img(4, 4, 3, 0.5);
    PreprocessSpec spec;
    spec.target_width = 2;
    spec.target_height = 2;
    const Image out = resize_bilinear(img, spec);
    REQUIRE(out.data.size() == 12);
    for (double v : out.data) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("resize: identity size is bitwise equal") {
    const Image img = test::noise_image(6, 5, 3, 77);
    PreprocessSpec spec;
    spec.target_width = 6;
    spec.target_height = 5;
    CHECK(resize_bilinear(img, spec).data == img.data);
}

TEST_CASE("resize: 2x1 upsample matches half-pixel bilinear weights") {
    Image img(2, 1, 1);
    img.data = {0.0, 1.0};
    PreprocessSpec spec;
    spec.target_width = 4;
    spec.target_height = 1;
    const Image out = resize_bilinear(img, spec);
    // Direct evaluation of the half-pixel-center weights.
    const std::vector<double> expected = {0.0, 0.25, 0.75, 1.0};
    REQUIRE(out.data.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(out.data[i] == doctest::Approx(expected[i]));
        if (i) CHECK(out.data[i] >= out.data[i - 1]);
    }
}

TEST_CASE("interpolate endpoints are exact") {
    const Image x1 = test::noise_image(7, 4, 3, 1);
    const Image x2 = test::noise_image(7, 4, 3, 2);
    CHECK(interpolate(x1, x2, 1.0).data == x1.data);
    CHECK(interpolate(x1, x2, 0.0).data == x2.data);
}

TEST_CASE("interpolate midpoint of constants") {
    const Image a(3, 3, 1, 0.2);
    const Image b(3, 3, 1, 0.6);
    for (double v : interpolate(a, b, 0.5).data) CHECK(v == doctest::Approx(0.4));
}

TEST_CASE("interpolate shape mismatch") {
    CHECK_THROWS_AS(interpolate(Image(2, 2, 1), Image(2, 2, 3), 0.5), ContractError);
}

TEST_CASE("interpolate is linear per sample") {
    const Image x1 = test::noise_image(5, 5, 3, 10);
    const Image x2 = test::noise_image(5, 5, 3, 11);
    CounterRng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.next_double();
        const double b = rng.next_double();
        const Image ia = interpolate(x1, x2, a);
        const Image ib = interpolate(x1, x2, b);
        const Image imid = interpolate(x1, x2, (a + b) / 2.0);
        for (std::size_t i = 0; i < ia.data.size(); ++i) {
            CHECK(std::fabs(ia.data[i] + ib.data[i] - 2.0 * imid.data[i]) <= 1e-12);
        }
    }
}

TEST_CASE("combine: one-hot reproduces the member exactly") {
    std::vector<Image> db = {test::noise_image(4, 4, 3, 1), test::noise_image(4, 4, 3, 2),
                             test::noise_image(4, 4, 3, 3)};
    InterpolationWeights w{{0.0, 1.0, 0.0}};
    CHECK(combine(db, w).data == db[1].data);
}

TEST_CASE("combine: equal halves of identical images") {
    const Image img = test::noise_image(4, 4, 3, 9);
    std::vector<Image> db = {img, img};
    const Image out = combine(db, InterpolationWeights{{0.5, 0.5}});
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        CHECK(out.data[i] == doctest::Approx(img.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("combine: signed weights on constants") {
    std::vector<Image> db = {Image(2, 2, 1, 0.8), Image(2, 2, 1, 0.2)};
    // Hand evaluation: 0.5*0.8 - 0.5*0.2 = 0.3, inside [0,1] so no clamp.
    for (double v : combine(db, InterpolationWeights{{0.5, -0.5}}).data) {
        CHECK(v == doctest::Approx(0.3));
    }
}

TEST_CASE("combine clamps, combine_unclamped does not") {
    std::vector<Image> db = {Image(2, 2, 1, 0.1), Image(2, 2, 1, 0.9)};
    const InterpolationWeights w{{0.5, -0.5}};
    for (double v : combine_unclamped(db, w).data) CHECK(v == doctest::Approx(-0.4));
    for (double v : combine(db, w).data) CHECK(v == 0.0);
}

TEST_CASE("combine contract errors") {
    std::vector<Image> db = {Image(2, 2, 1, 0.5), Image(2, 2, 1, 0.5)};
    CHECK_THROWS_AS(combine(db, InterpolationWeights{{0.5, 0.4}}), ContractError);
    CHECK_THROWS_AS(combine(db, InterpolationWeights{{1.0}}), ContractError);
    std::vector<Image> bad = {Image(2, 2, 1, 0.5), Image(3, 2, 1, 0.5)};
    CHECK_THROWS_AS(combine(bad, InterpolationWeights{{0.5, 0.5}}), ContractError);
}

TEST_CASE("combine reduces to interpolate for k=2") {
    const Image x1 = test::noise_image(5, 3, 3, 21);
    const Image x2 = test::noise_image(5, 3, 3, 22);
    CounterRng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = rng.next_double();
        const Image via_combine = combine({x1, x2}, InterpolationWeights{{alpha, 1.0 - alpha}});
        const Image via_interp = interpolate(x1, x2, alpha);
        for (std::size_t i = 0; i < via_combine.data.size(); ++i) {
            CHECK(std::fabs(via_combine.data[i] - via_interp.data[i]) <= 1e-12);
        }
    }
}

TEST_CASE("weights helpers") {
    InterpolationWeights w{{0.5, 0.0, -0.25, 0.25}};
    CHECK(w.valid());
    CHECK(w.to_sparse_text() == "0:0.5 2:-0.25 3:0.25");
    InterpolationWeights zero{{0.0, 0.0}};
    CHECK_THROWS_AS(zero.renormalize(), ContractError);
    InterpolationWeights unnorm{{2.0, -1.0}};
    unnorm.renormalize();
    CHECK(unnorm.valid());
    CHECK(unnorm.p[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("ssim of an image with itself is 1") {
    for (int seed : {1, 2, 3}) {
        const Image img = test::noise_image(8, 8, 3, seed);
        CHECK(ssim(img, img) == doctest::Approx(1.0));
    }
}

TEST_CASE("ssim is symmetric") {
    const Image x = test::noise_image(8, 8, 3, 5);
    const Image y = test::noise_image(8, 8, 3, 6);
    CHECK(ssim(x, y) == doctest::Approx(ssim(y, x)));
}

TEST_CASE("ssim of independent noise is near zero") {
    const Image x = test::noise_image(32, 32, 1, 100);
    const Image y = test::noise_image(32, 32, 1, 101);
    CHECK(std::fabs(ssim(x, y)) < 0.2);
}

TEST_CASE("ssim agrees with a direct evaluation of the statistics") {
    const Image x = test::noise_image(9, 7, 1, 50);
    const Image y = test::noise_image(9, 7, 1, 51);
    const std::size_t n = x.data.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x.data[i];
        my += y.data[i];
    }
    mx /= n;
    my /= n;
    double vx = 0, vy = 0, cov = 0;
    for (std::size_t i = 0; i < n; ++i) {
        vx += (x.data[i] - mx) * (x.data[i] - mx);
        vy += (y.data[i] - my) * (y.data[i] - my);
        cov += (x.data[i] - mx) * (y.data[i] - my);
    }
    vx /= n;
    vy /= n;
    cov /= n;
    const double expected = (2 * mx * my + 0.01) * (2 * cov + 0.03) /
                            ((mx * mx + my * my + 0.01) * (vx + vy + 0.03));
    CHECK(ssim(x, y) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ssim stays within [-1, 1] on random pairs") {
    CounterRng rng(777);
    for (int trial = 0; trial < 10000; ++trial) {
        const Image x = test::noise_image(6, 6, 1, rng.next_u64());
        const Image y = test::noise_image(6, 6, 1, rng.next_u64());
        const double v = ssim(x, y);
        REQUIRE(v >= -1.0);
        REQUIRE(v <= 1.0);
    }
}

TEST_CASE("ssim shape mismatch") {
    CHECK_THROWS_AS(ssim(Image(2, 2, 1), Image(3, 2, 1)), ContractError);
}

TEST_CASE("grayscale uses luma weights") {
    Image img(1, 1, 3);
    img.data = {1.0, 0.5, 0.25};
    const Image gray = to_grayscale(img);
    CHECK(gray.data[0] == doctest::Approx(0.299 * 1.0 + 0.587 * 0.5 + 0.114 * 0.25));
}

TEST_CASE("read/write round trip through the filesystem") {
    test::TempDir dir("phlab_img");
    const Image img = test::noise_image(5, 4, 3, 31);
    const auto path = dir.path() / "img.ppm";
    write_ppm(img, path);
    const Image back = read_image(path);
    CHECK(back.id == "img");
    CHECK(back.same_shape(img));
    // Quantization to bytes then back: within half a step.
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        CHECK(std::fabs(back.data[i] - img.data[i]) <= 0.5 / 255.0 + 1e-12);
    }
    CHECK_THROWS_AS(read_image(dir.path() / "absent.ppm"), IoError);
}
