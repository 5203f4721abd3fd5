#pragma once

#include <filesystem>
#include <string>

#include "phlab/datasets.hpp"
#include "phlab/image.hpp"
#include "phlab/pipeline.hpp"
#include "phlab/rng.hpp"

namespace phlab::test {

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                (prefix + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline Image noise_image(int w, int h, int ch, std::uint64_t seed) {
    return random_noise_image(w, h, ch, seed);
}

/// Small, fast pipeline for unit tests.
inline PipelineConfig tiny_config(EmbedderKind kind = EmbedderKind::LinearSurrogate) {
    PipelineConfig cfg;
    cfg.embedder = kind;
    cfg.embedder_seed = 11;
    cfg.matrix_seed = 22;
    cfg.preprocess.target_width = 12;
    cfg.preprocess.target_height = 12;
    return cfg;
}

}  // namespace phlab::test
