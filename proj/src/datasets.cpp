#include "phlab/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "phlab/errors.hpp"
#include "phlab/image_io.hpp"
#include "phlab/rng.hpp"

namespace phlab {

namespace {

constexpr std::uint64_t kClassStream = 0x436c73;   // class prototypes
constexpr std::uint64_t kSampleStream = 0x536d70;  // per-sample jitter
constexpr std::uint64_t kNoiseStream = 0x4e6f69;   // random_noise_image

struct ClassPrototype {
    double theta;        // gradient orientation
    double color_a[3];   // gradient endpoints
    double color_b[3];
    double color_m[3];   // motif fill
    int motif;
};

ClassPrototype make_prototype(const SyntheticSpec& spec, int cls) {
    CounterRng rng(spec.rng_seed, CounterRng::derive(kClassStream, cls));
    ClassPrototype proto;
    proto.theta = M_PI * cls / spec.class_count;
    proto.motif = cls % 10;
    for (int ch = 0; ch < 3; ++ch) proto.color_a[ch] = rng.uniform(0.05, 0.95);
    for (int ch = 0; ch < 3; ++ch) proto.color_b[ch] = rng.uniform(0.05, 0.95);
    // Keep the motif clearly contrasted against the gradient so the class
    // signal survives downsampling.
    for (;;) {
        double dist = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
            proto.color_m[ch] = rng.uniform(0.05, 0.95);
            dist += std::fabs(proto.color_m[ch] - 0.5 * (proto.color_a[ch] + proto.color_b[ch]));
        }
        if (dist > 0.8) break;
    }
    return proto;
}

bool in_motif(int motif, double dx, double dy, double r) {
    const double d2 = dx * dx + dy * dy;
    switch (motif) {
        case 0:  // disc
            return d2 <= r * r;
        case 1:  // ring
            return d2 <= r * r && d2 >= 0.36 * r * r;
        case 2:  // square
            return std::max(std::fabs(dx), std::fabs(dy)) <= 0.8 * r;
        case 3:  // diamond
            return std::fabs(dx) + std::fabs(dy) <= 1.1 * r;
        case 4:  // horizontal stripes
            return std::fabs(dx) <= r && std::fabs(dy) <= r &&
                   std::fmod(dy / r * 1.25 + 8.0, 1.0) < 0.5;
        case 5:  // vertical stripes
            return std::fabs(dx) <= r && std::fabs(dy) <= r &&
                   std::fmod(dx / r * 1.25 + 8.0, 1.0) < 0.5;
        case 6:  // cross
            return (std::fabs(dx) <= 0.35 * r && std::fabs(dy) <= r) ||
                   (std::fabs(dy) <= 0.35 * r && std::fabs(dx) <= r);
        case 7:  // triangle, apex up
            return dy >= -0.8 * r && dy <= 0.8 * r && std::fabs(dx) <= 0.5 * (dy + 0.8 * r);
        case 8: {  // checkerboard
            if (std::max(std::fabs(dx), std::fabs(dy)) > 0.9 * r) return false;
            const int ix = static_cast<int>(std::floor(dx / (0.45 * r)));
            const int iy = static_cast<int>(std::floor(dy / (0.45 * r)));
            return ((ix + iy) & 1) == 0;
        }
        case 9: {  // dot grid
            if (std::max(std::fabs(dx), std::fabs(dy)) > r) return false;
            const double cell = 0.5 * r;
            const double gx = std::fmod(dx + 20.25 * cell, cell) - 0.5 * cell;
            const double gy = std::fmod(dy + 20.25 * cell, cell) - 0.5 * cell;
            return gx * gx + gy * gy <= 0.32 * r * 0.32 * r;
        }
        default:
            return false;
    }
}

Image render_sample(const SyntheticSpec& spec, const ClassPrototype& proto, int cls, int index) {
    CounterRng rng(spec.rng_seed,
                   CounterRng::derive(kSampleStream, cls, static_cast<std::uint64_t>(index)));
    const int size = spec.image_size;

    const double cx = 0.5 + rng.uniform(-0.08, 0.08);
    const double cy = 0.5 + rng.uniform(-0.08, 0.08);
    const double radius = 0.30 + rng.uniform(-0.05, 0.05);
    const double phase = rng.uniform(-0.08, 0.08);
    const double theta = proto.theta + rng.uniform(-0.04, 0.04);
    double color_a[3], color_b[3], color_m[3];
    for (int ch = 0; ch < 3; ++ch) {
        color_a[ch] = proto.color_a[ch] + rng.uniform(-0.06, 0.06);
        color_b[ch] = proto.color_b[ch] + rng.uniform(-0.06, 0.06);
        color_m[ch] = proto.color_m[ch] + rng.uniform(-0.06, 0.06);
    }

    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    Image img(size, size, 3);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double u = size > 1 ? static_cast<double>(x) / (size - 1) : 0.5;
            const double v = size > 1 ? static_cast<double>(y) / (size - 1) : 0.5;
            double t = (ct * (u - 0.5) + st * (v - 0.5)) / 1.4 + 0.5 + phase;
            t = std::clamp(t, 0.0, 1.0);
            const bool motif = in_motif(proto.motif, u - cx, v - cy, radius);
            for (int ch = 0; ch < 3; ++ch) {
                double val = motif ? color_m[ch] : color_a[ch] + t * (color_b[ch] - color_a[ch]);
                val += rng.uniform(-0.015, 0.015);
                img.at(x, y, ch) = std::clamp(val, 0.0, 1.0);
            }
        }
    }

    char id[48];
    std::snprintf(id, sizeof(id), "class_%d/synth_%04d", cls, index);
    img.id = id;
    return img;
}

}  // namespace

LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.class_count <= 0 || spec.per_class <= 0 || spec.image_size <= 0) {
        throw ContractError("generate_synthetic: spec fields must be positive");
    }
    LabeledDataset ds;
    ds.class_names.reserve(spec.class_count);
    for (int c = 0; c < spec.class_count; ++c) {
        ds.class_names.push_back("class_" + std::to_string(c));
    }
    ds.images.reserve(static_cast<std::size_t>(spec.class_count) * spec.per_class);
    for (int c = 0; c < spec.class_count; ++c) {
        const ClassPrototype proto = make_prototype(spec, c);
        for (int i = 0; i < spec.per_class; ++i) {
            ds.images.push_back(render_sample(spec, proto, c, i));
            ds.labels.push_back(c);
        }
    }
    return ds;
}

LabeledDataset load_directory(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw IoError("dataset root is not a directory: " + root.string());

    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (class_dirs.empty()) throw IoError("empty dataset: no class subdirectories in " + root.string());

    LabeledDataset ds;
    for (std::size_t label = 0; label < class_dirs.size(); ++label) {
        const auto& dir = class_dirs[label];
        ds.class_names.push_back(dir.filename().string());

        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (ext == ".ppm" || ext == ".pgm" || ext == ".png") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end(),
                  [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

        for (const auto& file : files) {
            try {
                Image img = read_image(file);
                img.id = ds.class_names.back() + "/" + file.filename().string();
                ds.images.push_back(std::move(img));
                ds.labels.push_back(static_cast<int>(label));
            } catch (const DecodeError& e) {
                throw DecodeError(file.string() + ": " + e.what());
            }
        }
    }
    if (ds.images.empty()) throw IoError("empty dataset: no decodable images under " + root.string());
    return ds;
}

std::pair<LabeledDataset, LabeledDataset> split_by_parity(const LabeledDataset& ds) {
    LabeledDataset train, validation;
    train.class_names = ds.class_names;
    validation.class_names = ds.class_names;
    train.split = Split::Train;
    validation.split = Split::Validation;

    std::vector<int> seen(ds.class_names.size(), 0);
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        const int label = ds.labels[i];
        LabeledDataset& dst = (seen[label]++ % 2 == 0) ? train : validation;
        dst.images.push_back(ds.images[i]);
        dst.labels.push_back(label);
    }
    return {std::move(train), std::move(validation)};
}

LabeledDataset subset_per_class(const LabeledDataset& ds, int start, int count) {
    LabeledDataset out;
    out.class_names = ds.class_names;
    out.split = ds.split;
    std::vector<int> seen(ds.class_names.size(), 0);
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        const int label = ds.labels[i];
        const int index = seen[label]++;
        if (index >= start && index < start + count) {
            out.images.push_back(ds.images[i]);
            out.labels.push_back(label);
        }
    }
    return out;
}

Image random_noise_image(int width, int height, int channels, std::uint64_t seed) {
    CounterRng rng(seed, kNoiseStream);
    Image img(width, height, channels);
    for (double& v : img.data) v = rng.next_double();
    return img;
}

void write_manifest(const LabeledDataset& ds, std::ostream& out) {
    out << "path,label\n";
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        out << ds.images[i].id << ',' << ds.labels[i] << '\n';
    }
}

}  // namespace phlab
