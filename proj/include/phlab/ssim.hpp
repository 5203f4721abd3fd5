#pragma once

#include "phlab/image.hpp"

namespace phlab {

// Stability constants for the structural-similarity ratio.
inline constexpr double kSsimC1 = 0.01;
inline constexpr double kSsimC2 = 0.03;

/// Structural similarity over global image statistics (single window).
/// Color inputs are reduced to luma first. Symmetric, ssim(x,x) == 1,
/// and bounded to [-1, 1].
double ssim(const Image& x, const Image& y);

}  // namespace phlab
