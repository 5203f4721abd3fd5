#include "phlab/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phlab/errors.hpp"

namespace phlab {

Image::Image(int w, int h, int ch, double fill)
    : width(w), height(h), channels(ch),
      data(static_cast<std::size_t>(w) * h * ch, fill) {}

void require_same_shape(const Image& a, const Image& b, const char* op) {
    if (!a.same_shape(b)) {
        std::ostringstream msg;
        msg << op << ": shape mismatch (" << a.width << "x" << a.height << "x" << a.channels
            << " vs " << b.width << "x" << b.height << "x" << b.channels << ")";
        throw ContractError(msg.str());
    }
}

Image interpolate(const Image& x1, const Image& x2, double alpha) {
    require_same_shape(x1, x2, "interpolate");
    Image out(x1.width, x1.height, x1.channels);
    const double beta = 1.0 - alpha;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = alpha * x1.data[i] + beta * x2.data[i];
    }
    return out;
}

double InterpolationWeights::abs_sum() const {
    double s = 0.0;
    for (double v : p) s += std::fabs(v);
    return s;
}

void InterpolationWeights::renormalize() {
    double s = abs_sum();
    if (s <= 0.0) throw ContractError("InterpolationWeights: cannot renormalize all-zero vector");
    for (double& v : p) v /= s;
}

bool InterpolationWeights::valid(double tol) const {
    if (p.empty()) return false;
    for (double v : p) {
        if (!(v >= -1.0 && v <= 1.0)) return false;
    }
    return std::fabs(abs_sum() - 1.0) <= tol;
}

std::string InterpolationWeights::to_sparse_text() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (!first) out << ' ';
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%zu:%.9g", i, p[i]);
        out << buf;
        first = false;
    }
    return out.str();
}

Image combine_unclamped(const std::vector<Image>& database, const InterpolationWeights& weights) {
    if (database.empty()) throw ContractError("combine: empty database");
    if (weights.p.size() != database.size()) {
        throw ContractError("combine: weight count does not match database size");
    }
    if (!weights.valid()) throw ContractError("combine: weights must satisfy sum|p_i| = 1");
    for (std::size_t i = 1; i < database.size(); ++i) {
        require_same_shape(database[0], database[i], "combine");
    }
    Image out(database[0].width, database[0].height, database[0].channels);
    for (std::size_t i = 0; i < database.size(); ++i) {
        const double w = weights.p[i];
        if (w == 0.0) continue;
        const auto& src = database[i].data;
        for (std::size_t s = 0; s < out.data.size(); ++s) out.data[s] += w * src[s];
    }
    return out;
}

Image combine(const std::vector<Image>& database, const InterpolationWeights& weights) {
    Image out = combine_unclamped(database, weights);
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

Image resize_bilinear(const Image& img, const PreprocessSpec& spec) {
    const int tw = spec.target_width;
    const int th = spec.target_height;
    if (tw <= 0 || th <= 0) throw ContractError("resize_bilinear: target dimensions must be positive");
    if (tw == img.width && th == img.height) return img;

    Image out(tw, th, img.channels);
    out.id = img.id;
    const double sx_scale = static_cast<double>(img.width) / tw;
    const double sy_scale = static_cast<double>(img.height) / th;
    for (int oy = 0; oy < th; ++oy) {
        double sy = (oy + 0.5) * sy_scale - 0.5;
        int y0 = static_cast<int>(std::floor(sy));
        double fy = sy - y0;
        if (y0 < 0) { y0 = 0; fy = 0.0; }
        int y1 = std::min(y0 + 1, img.height - 1);
        for (int ox = 0; ox < tw; ++ox) {
            double sx = (ox + 0.5) * sx_scale - 0.5;
            int x0 = static_cast<int>(std::floor(sx));
            double fx = sx - x0;
            if (x0 < 0) { x0 = 0; fx = 0.0; }
            int x1 = std::min(x0 + 1, img.width - 1);
            for (int c = 0; c < img.channels; ++c) {
                double top = (1.0 - fx) * img.at(x0, y0, c) + fx * img.at(x1, y0, c);
                double bot = (1.0 - fx) * img.at(x0, y1, c) + fx * img.at(x1, y1, c);
                out.at(ox, oy, c) = (1.0 - fy) * top + fy * bot;
            }
        }
    }
    return out;
}

Image to_grayscale(const Image& img) {
    if (img.channels == 1) return img;
    if (img.channels != 3) throw ContractError("to_grayscale: expects 1 or 3 channels");
    Image out(img.width, img.height, 1);
    const std::size_t pixels = out.data.size();
    for (std::size_t i = 0; i < pixels; ++i) {
        const double* px = &img.data[i * 3];
        out.data[i] = kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2];
    }
    out.id = img.id;
    return out;
}

}  // namespace phlab
