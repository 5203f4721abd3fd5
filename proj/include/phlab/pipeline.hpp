#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "phlab/binary_hash.hpp"
#include "phlab/image.hpp"

namespace phlab {

inline constexpr int kFeatureDim = 128;
inline constexpr int kHashBits = BinaryHash::kBits;

/// 128-entry real descriptor of an image.
struct FeatureVector {
    std::array<double, kFeatureDim> values{};
};

/// 96 random hyperplane normals in feature space. Entries are standard
/// normal, drawn from a counter-based generator so the matrix reproduces
/// across platforms.
struct HashingMatrix {
    std::vector<double> rows;  // kHashBits x kFeatureDim, row-major
    std::uint64_t seed = 0;

    static HashingMatrix generate(std::uint64_t seed);
    const double* row(int j) const { return &rows[static_cast<std::size_t>(j) * kFeatureDim]; }
};

enum class EmbedderKind { LinearSurrogate, TanhSurrogate, FeatureFile };
enum class DefenseMode { None, ShaAtTheEnd };

// Gain of the tanh applied after the linear projection in the
// tanh-surrogate; small enough that the embedder stays near-linear around
// zero while bending large activations.
inline constexpr double kTanhGain = 0.5;

struct PipelineConfig {
    EmbedderKind embedder = EmbedderKind::LinearSurrogate;
    std::uint64_t embedder_seed = 1;
    std::uint64_t matrix_seed = 2;
    PreprocessSpec preprocess;
    DefenseMode defense = DefenseMode::None;
    std::string feature_file;       // required for EmbedderKind::FeatureFile
    double semantic_ssim_threshold = 0.9;  // operational proxy for semantic similarity
};

/// Hash oracle: the only surface attacks are allowed to touch.
using HashOracle = std::function<BinaryHash(const Image&)>;

/// Thresholds each feature against the hyperplanes: bit j is 1 iff
/// row_j . f >= 0 (ties resolve to 1).
BinaryHash lsh_hash(const FeatureVector& f, const HashingMatrix& m);

/// Packs the 96 bits into 12 bytes, applies SHA-256, and returns the first
/// 96 digest bits under the same packing. Preserves equality, destroys
/// hash-space proximity.
BinaryHash sha_block(const BinaryHash& h);

/// Immutable hash pipeline: preprocess -> embed -> hyperplane LSH ->
/// optional SHA hardening. Hashing is pure and thread-safe.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg);

    FeatureVector embed(const Image& img) const;
    /// Full composition including the configured defense stage.
    BinaryHash hash(const Image& img) const;
    /// Composition without the defense stage.
    BinaryHash raw_hash(const Image& img) const;

    const PipelineConfig& config() const { return cfg_; }
    const HashingMatrix& hashing_matrix() const { return lsh_; }
    /// Surrogate projection, kFeatureDim x input_dim row-major. Empty for
    /// the feature-file embedder.
    const std::vector<double>& embed_matrix() const { return embed_matrix_; }
    int input_dim() const { return input_dim_; }

    /// Opaque closure over hash(); hands attacks a surface with no
    /// visibility into the configuration.
    HashOracle oracle() const;

private:
    PipelineConfig cfg_;
    int input_dim_ = 0;
    std::vector<double> embed_matrix_;
    HashingMatrix lsh_;
    std::unordered_map<std::string, FeatureVector> feature_table_;
};

/// One-shot conveniences; construct a Pipeline for bulk hashing.
FeatureVector embed(const Image& img, const PipelineConfig& cfg);
BinaryHash hash_image(const Image& img, const PipelineConfig& cfg);

/// Parses the feature-file format: one `image_id,v0,...,v127` line per
/// image. Values must be finite.
std::unordered_map<std::string, FeatureVector> load_feature_file(const std::filesystem::path& path);

}  // namespace phlab
