#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "phlab/binary_hash.hpp"
#include "phlab/image.hpp"
#include "phlab/pipeline.hpp"

namespace phlab {

// All attacks in this module are black-box: they reach the hash only
// through a HashOracle closure and never see pipeline internals.

struct EvasionResult {
    double alpha_star = 0.0;
    Image adversarial_image;
    double ssim_to_source = 0.0;
    bool evaded = false;
    int oracle_calls = 0;
};

/// Scans alpha over {1-grid_step, 1-2*grid_step, ...} descending and
/// returns the first (largest) alpha whose interpolated hash differs from
/// oracle(x). If no alpha in (0,1) flips the hash the result has
/// evaded=false and alpha_star=0.
EvasionResult evade(const Image& x, const Image& x0, const HashOracle& oracle, double grid_step);

struct GeneticConfig {
    int population_start = 100;
    int population_end = 10;
    double decay_rate = 0.97;
    int iterations = 50;
    int children_per_iter = 20;
    double mutation_range = 0.05;
    std::uint64_t rng_seed = 0;
};

struct CollisionResult {
    InterpolationWeights weights;  // best individual ever seen
    Image image;                   // combine(database, weights)
    double fitness = 0.0;
    std::vector<double> best_fitness_per_generation;  // [0] = after initialization
    int oracle_calls = 0;
};

/// Genetic search over signed interpolation weights for an image whose
/// hash maximizes Hamming similarity with the target. Children come from
/// crossover (weight-space interpolation) or single-index mutation with
/// equal probability, renormalized so sum|p_i| = 1; survivors are the top
/// individuals under an exponentially decaying population size.
CollisionResult genetic_near_collision(const BinaryHash& target, const std::vector<Image>& database,
                                       const HashOracle& oracle, const GeneticConfig& cfg);

struct ExtractionConfig {
    int epochs = 25;
    int steps_per_epoch = 100;
    double learning_rate = 2e-5;
    double entropy_epsilon = 1e-8;
    std::uint64_t rng_seed = 0;
};

struct ExtractionResult {
    int predicted_class = -1;
    std::vector<double> support;  // per class: sum |p_i| over members
    InterpolationWeights weights;
};

/// Predicts the class of the image behind `target` from hashes alone:
/// gradient descent on ||sum p_i h_i - h*||^2 - sum |p_i| log(|p_i|+eps)
/// over the signed hash views, renormalizing after every step, then picks
/// the class with the most absolute weight support.
ExtractionResult extract_class(const BinaryHash& target,
                               const std::vector<BinaryHash>& database_hashes,
                               const std::vector<int>& labels, const ExtractionConfig& cfg);

/// Objective and analytic gradient of the extraction loss, exposed so
/// tests can check the gradient against finite differences.
double extraction_loss(const std::vector<double>& p,
                       const std::vector<std::array<double, kHashBits>>& hashes,
                       const std::array<double, kHashBits>& target, double eps);
std::vector<double> extraction_gradient(const std::vector<double>& p,
                                        const std::vector<std::array<double, kHashBits>>& hashes,
                                        const std::array<double, kHashBits>& target, double eps);

using ImageSampler = std::function<Image(int)>;

/// Monte-Carlo estimate of the strong non-invertibility baseline: the best
/// Hamming similarity to `target` among n sampled images' hashes.
double baseline_max_similarity(const BinaryHash& target, const ImageSampler& sampler, int n,
                               const HashOracle& oracle);

}  // namespace phlab
