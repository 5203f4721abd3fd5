#include "phlab/ssim.hpp"

namespace phlab {

double ssim(const Image& x, const Image& y) {
    require_same_shape(x, y, "ssim");
    const Image gx = to_grayscale(x);
    const Image gy = to_grayscale(y);
    const std::size_t n = gx.data.size();

    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_x += gx.data[i];
        sum_y += gy.data[i];
    }
    const double mu_x = sum_x / n;
    const double mu_y = sum_y / n;

    double var_x = 0.0, var_y = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = gx.data[i] - mu_x;
        const double dy = gy.data[i] - mu_y;
        var_x += dx * dx;
        var_y += dy * dy;
        cov += dx * dy;
    }
    var_x /= n;
    var_y /= n;
    cov /= n;

    const double num = (2.0 * mu_x * mu_y + kSsimC1) * (2.0 * cov + kSsimC2);
    const double den = (mu_x * mu_x + mu_y * mu_y + kSsimC1) * (var_x + var_y + kSsimC2);
    return num / den;
}

}  // namespace phlab
