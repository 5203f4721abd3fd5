#include "phlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phlab/errors.hpp"
#include "phlab/rng.hpp"
#include "phlab/sha256.hpp"

namespace phlab {

namespace {
constexpr std::uint64_t kEmbedMatrixStream = 0x456d6254;  // "EmbT"
constexpr std::uint64_t kHashMatrixStream = 0x4c736848;   // "LshH"
}  // namespace

HashingMatrix HashingMatrix::generate(std::uint64_t seed) {
    HashingMatrix m;
    m.seed = seed;
    m.rows.resize(static_cast<std::size_t>(kHashBits) * kFeatureDim);
    CounterRng rng(seed, kHashMatrixStream);
    for (double& v : m.rows) v = rng.next_normal();
    for (int j = 0; j < kHashBits; ++j) {
        double norm2 = 0.0;
        for (int i = 0; i < kFeatureDim; ++i) norm2 += m.row(j)[i] * m.row(j)[i];
        if (norm2 == 0.0) throw ContractError("HashingMatrix: degenerate hyperplane row");
    }
    return m;
}

BinaryHash lsh_hash(const FeatureVector& f, const HashingMatrix& m) {
    for (double v : f.values) {
        if (!std::isfinite(v)) throw ContractError("lsh_hash: feature vector must be finite");
    }
    BinaryHash h;
    for (int j = 0; j < kHashBits; ++j) {
        const double* row = m.row(j);
        double dot = 0.0;
        for (int i = 0; i < kFeatureDim; ++i) dot += row[i] * f.values[i];
        h.set_bit(j, dot >= 0.0);
    }
    return h;
}

BinaryHash sha_block(const BinaryHash& h) {
    const auto digest = Sha256::digest(h.bytes().data(), BinaryHash::kBytes);
    std::array<std::uint8_t, BinaryHash::kBytes> out;
    std::copy(digest.begin(), digest.begin() + BinaryHash::kBytes, out.begin());
    return BinaryHash(out);
}

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    const auto& pp = cfg_.preprocess;
    if (pp.target_width <= 0 || pp.target_height <= 0) {
        throw ConfigError("pipeline: preprocess target dimensions must be positive");
    }
    input_dim_ = pp.target_width * pp.target_height * (pp.grayscale ? 1 : 3);
    lsh_ = HashingMatrix::generate(cfg_.matrix_seed);

    if (cfg_.embedder == EmbedderKind::FeatureFile) {
        if (cfg_.feature_file.empty()) {
            throw ConfigError("pipeline: feature-file embedder requires a feature file path");
        }
        feature_table_ = load_feature_file(cfg_.feature_file);
    } else {
        // Entries scale with 1/sqrt(d) so projections are O(1) regardless of
        // the preprocess resolution; sign patterns are unaffected for the
        // linear surrogate and the tanh gain stays meaningful.
        embed_matrix_.resize(static_cast<std::size_t>(kFeatureDim) * input_dim_);
        CounterRng rng(cfg_.embedder_seed, kEmbedMatrixStream);
        const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim_));
        for (double& v : embed_matrix_) v = rng.next_normal() * scale;
    }
}

FeatureVector Pipeline::embed(const Image& img) const {
    if (cfg_.embedder == EmbedderKind::FeatureFile) {
        auto it = feature_table_.find(img.id);
        if (it == feature_table_.end()) {
            throw MissingFeatureError("feature-file embedder: unknown image id \"" + img.id + "\"");
        }
        return it->second;
    }

    const auto& pp = cfg_.preprocess;
    Image scaled = resize_bilinear(img, pp);
    if (pp.grayscale && scaled.channels != 1) scaled = to_grayscale(scaled);
    if (static_cast<int>(scaled.data.size()) != input_dim_) {
        throw ContractError("embed: image channel count does not match pipeline input");
    }

    std::vector<double> input(scaled.data.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        input[i] = pp.norm_scale * scaled.data[i] + pp.norm_offset;
    }

    FeatureVector f;
    for (int j = 0; j < kFeatureDim; ++j) {
        const double* row = &embed_matrix_[static_cast<std::size_t>(j) * input_dim_];
        double acc = 0.0;
        for (int i = 0; i < input_dim_; ++i) acc += row[i] * input[i];
        f.values[j] = acc;
    }
    if (cfg_.embedder == EmbedderKind::TanhSurrogate) {
        for (double& v : f.values) v = std::tanh(kTanhGain * v);
    }
    return f;
}

BinaryHash Pipeline::raw_hash(const Image& img) const {
    return lsh_hash(embed(img), lsh_);
}

BinaryHash Pipeline::hash(const Image& img) const {
    BinaryHash h = raw_hash(img);
    if (cfg_.defense == DefenseMode::ShaAtTheEnd) h = sha_block(h);
    return h;
}

HashOracle Pipeline::oracle() const {
    return [this](const Image& img) { return hash(img); };
}

FeatureVector embed(const Image& img, const PipelineConfig& cfg) {
    return Pipeline(cfg).embed(img);
}

BinaryHash hash_image(const Image& img, const PipelineConfig& cfg) {
    return Pipeline(cfg).hash(img);
}

std::unordered_map<std::string, FeatureVector> load_feature_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open feature file " + path.string());

    std::unordered_map<std::string, FeatureVector> table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string id;
        if (!std::getline(fields, id, ',') || id.empty()) {
            throw DecodeError("feature file line " + std::to_string(line_no) + ": missing image id");
        }
        FeatureVector f;
        std::string tok;
        for (int i = 0; i < kFeatureDim; ++i) {
            if (!std::getline(fields, tok, ',')) {
                throw DecodeError("feature file line " + std::to_string(line_no) +
                                  ": expected 128 values");
            }
            char* end = nullptr;
            f.values[i] = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || !std::isfinite(f.values[i])) {
                throw DecodeError("feature file line " + std::to_string(line_no) +
                                  ": bad value \"" + tok + "\"");
            }
        }
        if (std::getline(fields, tok, ',')) {
            throw DecodeError("feature file line " + std::to_string(line_no) +
                              ": more than 128 values");
        }
        table[id] = f;
    }
    return table;
}

}  // namespace phlab
