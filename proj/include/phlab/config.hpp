#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "phlab/attacks.hpp"
#include "phlab/datasets.hpp"
#include "phlab/pipeline.hpp"

namespace phlab {

/// Flat key=value settings behind the CLI; maps onto the pipeline, attack
/// and dataset configuration structs. Every stream of randomness derives
/// from `seed` unless a more specific seed is pinned explicitly.
struct CliSettings {
    // pipeline
    std::string embedder = "linear-surrogate";
    std::optional<std::uint64_t> embedder_seed;
    std::optional<std::uint64_t> matrix_seed;
    int preprocess_width = 64;
    int preprocess_height = 64;
    bool preprocess_grayscale = false;
    std::string defense = "none";
    std::string feature_file;
    double semantic_ssim_threshold = 0.9;

    // genetic near-collision
    int population_start = 100;
    int population_end = 10;
    double decay_rate = 0.97;
    int iterations = 50;
    int children_per_iter = 20;
    double mutation_range = 0.05;

    // information extraction
    int epochs = 25;
    int steps_per_epoch = 100;
    double learning_rate = 2e-5;
    double entropy_epsilon = 1e-8;

    // synthetic data
    int class_count = 10;
    int per_class = 25;
    int image_size = 64;

    std::uint64_t seed = 42;
    int threads = 0;  // 0 = machine parallelism

    PipelineConfig pipeline_config() const;
    GeneticConfig genetic_config() const;
    ExtractionConfig extraction_config() const;
    SyntheticSpec synthetic_spec() const;

    /// Seed for a named sub-stream (datasets, experiments, ...).
    std::uint64_t derived_seed(std::uint64_t tag) const;
};

// Stream tags for derived seeds.
inline constexpr std::uint64_t kSeedTagEmbedder = 0x456d6264;
inline constexpr std::uint64_t kSeedTagMatrix = 0x4d747278;
inline constexpr std::uint64_t kSeedTagGenetic = 0x47656e65;
inline constexpr std::uint64_t kSeedTagExtraction = 0x45787472;
inline constexpr std::uint64_t kSeedTagDataset = 0x44617461;
inline constexpr std::uint64_t kSeedTagExperiment = 0x45787065;

/// Applies a `key = value` config file ('#' comments, one pair per line).
/// Unknown keys are rejected; keys named in `overridden` keep their
/// current (flag-supplied) values.
void apply_config_file(CliSettings& settings, const std::filesystem::path& path,
                       const std::set<std::string>& overridden);

EmbedderKind parse_embedder_name(const std::string& name);
DefenseMode parse_defense_name(const std::string& name);

}  // namespace phlab
