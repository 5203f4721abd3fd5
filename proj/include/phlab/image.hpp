#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace phlab {

/// Raster image with samples in [0,1], row-major and channel-interleaved.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray) or 3 (rgb)
    std::vector<double> data;
    std::string id;  // stable identifier set by loaders/generators; "" if anonymous

    Image() = default;
    Image(int w, int h, int ch, double fill = 0.0);

    std::size_t sample_count() const { return data.size(); }
    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }

    double at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

/// Target geometry and input normalization for the hash pipeline.
struct PreprocessSpec {
    int target_width = 64;
    int target_height = 64;
    bool grayscale = false;
    // Affine map applied per sample at the embedder input; defaults take
    // [0,1] onto [-1,1].
    double norm_scale = 2.0;
    double norm_offset = -1.0;
};

// Rec. 601 luma weights, used for grayscale conversion everywhere.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Per-sample convex combination alpha*x1 + (1-alpha)*x2. Exact at the
/// endpoints: alpha=1 returns x1 bitwise, alpha=0 returns x2 bitwise.
Image interpolate(const Image& x1, const Image& x2, double alpha);

/// Interpolation weights over an image database: signed entries in [-1,1]
/// whose absolute values sum to one.
struct InterpolationWeights {
    std::vector<double> p;

    double abs_sum() const;
    /// Scales so that abs_sum() == 1; throws ContractError if the vector is
    /// all zero.
    void renormalize();
    bool valid(double tol = 1e-9) const;
    /// Sparse "index:value" text, nonzero entries only, index order.
    std::string to_sparse_text() const;
};

/// Signed per-sample sum over the database, clamped to [0,1] so the result
/// is a valid image for downstream embedders.
Image combine(const std::vector<Image>& database, const InterpolationWeights& weights);

/// Same sum without the clamp; linear in the weights.
Image combine_unclamped(const std::vector<Image>& database, const InterpolationWeights& weights);

/// Bilinear resize to the spec's target dimensions (half-pixel centers).
/// An identity-size resize returns the input unchanged.
Image resize_bilinear(const Image& img, const PreprocessSpec& spec);

/// 3-channel to luma; returns 1-channel inputs unchanged.
Image to_grayscale(const Image& img);

void require_same_shape(const Image& a, const Image& b, const char* op);

}  // namespace phlab
