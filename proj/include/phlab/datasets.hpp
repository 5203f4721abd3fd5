#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "phlab/image.hpp"

namespace phlab {

enum class Split { Train, Validation };

struct LabeledDataset {
    std::vector<Image> images;
    std::vector<int> labels;
    std::vector<std::string> class_names;
    Split split = Split::Train;

    std::size_t size() const { return images.size(); }
    int class_count() const { return static_cast<int>(class_names.size()); }
};

struct SyntheticSpec {
    int class_count = 10;
    int per_class = 25;
    int image_size = 64;
    std::uint64_t rng_seed = 0;
};

/// Seeded synthetic dataset with class structure: each class pairs a base
/// gradient orientation with a shape motif, and samples jitter position,
/// scale and color around the class prototype. Deterministic per spec.
LabeledDataset generate_synthetic(const SyntheticSpec& spec);

/// Loads `root/<class_name>/<image files>`; labels follow sorted
/// subdirectory names, files sort lexicographically within a class.
LabeledDataset load_directory(const std::filesystem::path& root);

/// (train, validation) split by index parity within each class.
std::pair<LabeledDataset, LabeledDataset> split_by_parity(const LabeledDataset& ds);

/// Samples whose within-class index falls in [start, start+count);
/// class structure is preserved.
LabeledDataset subset_per_class(const LabeledDataset& ds, int start, int count);

/// Uniform noise image; the "random element of image space" used by
/// uniform-hashing statistics and non-invertibility baselines.
Image random_noise_image(int width, int height, int channels, std::uint64_t seed);

/// `path,label` manifest rows (image ids stand in for paths for synthetic
/// datasets).
void write_manifest(const LabeledDataset& ds, std::ostream& out);

}  // namespace phlab
