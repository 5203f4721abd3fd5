#include "phlab/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "phlab/errors.hpp"
#include "phlab/rng.hpp"
#include "phlab/ssim.hpp"

namespace phlab {

namespace {
constexpr std::uint64_t kGeneticStream = 0x47656e;
}

EvasionResult evade(const Image& x, const Image& x0, const HashOracle& oracle, double grid_step) {
    require_same_shape(x, x0, "evade");
    if (!(grid_step > 0.0 && grid_step <= 0.1)) {
        throw ContractError("evade: grid_step must be in (0, 0.1]");
    }

    EvasionResult result;
    const BinaryHash source_hash = oracle(x);
    result.oracle_calls = 1;
    for (int i = 1;; ++i) {
        const double alpha = 1.0 - i * grid_step;
        if (alpha <= 1e-12) break;
        Image candidate = interpolate(x, x0, alpha);
        ++result.oracle_calls;
        if (oracle(candidate) != source_hash) {
            result.alpha_star = alpha;
            result.adversarial_image = std::move(candidate);
            result.evaded = true;
            break;
        }
    }
    if (!result.evaded) {
        // No alpha in (0,1) flips the hash; report the alpha=0 endpoint.
        result.alpha_star = 0.0;
        result.adversarial_image = x0;
    }
    result.ssim_to_source = ssim(x, result.adversarial_image);
    return result;
}

namespace {

struct Individual {
    InterpolationWeights weights;
    double fitness = 0.0;
};

InterpolationWeights random_individual(CounterRng& rng, std::size_t k) {
    // Sparse start: at most five nonzero entries, per-entry values uniform
    // in [-1,1], renormalized onto the weight simplex surface.
    const std::size_t support = std::min<std::size_t>(5, k);
    for (;;) {
        InterpolationWeights w;
        w.p.assign(k, 0.0);
        std::vector<std::size_t> picked;
        while (picked.size() < support) {
            const std::size_t idx = rng.uniform_index(k);
            if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
        }
        for (std::size_t idx : picked) w.p[idx] = rng.uniform(-1.0, 1.0);
        if (w.abs_sum() > 1e-12) {
            w.renormalize();
            return w;
        }
    }
}

}  // namespace

CollisionResult genetic_near_collision(const BinaryHash& target, const std::vector<Image>& database,
                                       const HashOracle& oracle, const GeneticConfig& cfg) {
    if (database.empty()) throw ContractError("genetic_near_collision: empty database");
    if (cfg.population_end > cfg.population_start || cfg.population_start <= 0) {
        throw ContractError("genetic_near_collision: population_end must be <= population_start");
    }
    if (!(cfg.decay_rate > 0.0 && cfg.decay_rate < 1.0)) {
        throw ContractError("genetic_near_collision: decay_rate must be in (0,1)");
    }
    const std::size_t k = database.size();
    CounterRng rng(cfg.rng_seed, kGeneticStream);
    CollisionResult result;

    auto evaluate = [&](const InterpolationWeights& w) {
        ++result.oracle_calls;
        return hamming_similarity(oracle(combine(database, w)), target);
    };

    std::vector<Individual> population;
    population.reserve(cfg.population_start + cfg.children_per_iter);
    for (int i = 0; i < cfg.population_start; ++i) {
        Individual ind{random_individual(rng, k), 0.0};
        ind.fitness = evaluate(ind.weights);
        population.push_back(std::move(ind));
    }

    auto best_of = [](const std::vector<Individual>& pop) {
        return std::max_element(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
            return a.fitness < b.fitness;
        });
    };
    Individual best = *best_of(population);
    result.best_fitness_per_generation.push_back(best.fitness);

    for (int gen = 1; gen <= cfg.iterations; ++gen) {
        for (int c = 0; c < cfg.children_per_iter; ++c) {
            InterpolationWeights child;
            for (;;) {
                if (rng.next_double() < 0.5) {
                    // Crossover: weight-space interpolation of two parents.
                    const auto& p = population[rng.uniform_index(population.size())].weights;
                    const auto& q = population[rng.uniform_index(population.size())].weights;
                    const double alpha = rng.next_double();
                    child.p.resize(k);
                    for (std::size_t i = 0; i < k; ++i) {
                        child.p[i] = alpha * p.p[i] + (1.0 - alpha) * q.p[i];
                    }
                } else {
                    // Mutation: nudge one coordinate.
                    child = population[rng.uniform_index(population.size())].weights;
                    const std::size_t m = rng.uniform_index(k);
                    child.p[m] += rng.uniform(-cfg.mutation_range, cfg.mutation_range);
                }
                if (child.abs_sum() > 1e-12) break;  // redraw the rare degenerate child
            }
            child.renormalize();
            // Closure invariant: every child lands back on the weight simplex.
            if (!child.valid()) throw std::logic_error("genetic: child violates weight invariants");

            Individual ind{std::move(child), 0.0};
            ind.fitness = evaluate(ind.weights);
            population.push_back(std::move(ind));
        }

        // Truncation selection at the decayed population size; parents
        // compete with children, so the best never regresses.
        const int decayed = static_cast<int>(
            std::llround(cfg.population_start * std::pow(cfg.decay_rate, gen)));
        const std::size_t size_g =
            static_cast<std::size_t>(std::max({1, cfg.population_end, decayed}));
        std::stable_sort(population.begin(), population.end(),
                         [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; });
        if (population.size() > size_g) population.resize(size_g);

        if (population.front().fitness > best.fitness) best = population.front();
        result.best_fitness_per_generation.push_back(best.fitness);
    }

    result.weights = best.weights;
    result.fitness = best.fitness;
    result.image = combine(database, best.weights);
    return result;
}

double extraction_loss(const std::vector<double>& p,
                       const std::vector<std::array<double, kHashBits>>& hashes,
                       const std::array<double, kHashBits>& target, double eps) {
    const std::size_t k = hashes.size();
    std::array<double, kHashBits> mix{};
    for (std::size_t i = 0; i < k; ++i) {
        const double w = p[i];
        if (w == 0.0) continue;
        for (int b = 0; b < kHashBits; ++b) mix[b] += w * hashes[i][b];
    }
    double quad = 0.0;
    for (int b = 0; b < kHashBits; ++b) {
        const double r = mix[b] - target[b];
        quad += r * r;
    }
    double entropy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = std::fabs(p[i]);
        entropy += a * std::log(a + eps);
    }
    return quad - entropy;
}

std::vector<double> extraction_gradient(const std::vector<double>& p,
                                        const std::vector<std::array<double, kHashBits>>& hashes,
                                        const std::array<double, kHashBits>& target, double eps) {
    const std::size_t k = hashes.size();
    std::array<double, kHashBits> residual{};
    for (std::size_t i = 0; i < k; ++i) {
        const double w = p[i];
        if (w == 0.0) continue;
        for (int b = 0; b < kHashBits; ++b) residual[b] += w * hashes[i][b];
    }
    for (int b = 0; b < kHashBits; ++b) residual[b] -= target[b];

    std::vector<double> grad(k);
    for (std::size_t i = 0; i < k; ++i) {
        double dot = 0.0;
        for (int b = 0; b < kHashBits; ++b) dot += hashes[i][b] * residual[b];
        const double a = std::fabs(p[i]);
        const double sign = p[i] > 0.0 ? 1.0 : (p[i] < 0.0 ? -1.0 : 0.0);
        grad[i] = 2.0 * dot - sign * (std::log(a + eps) + a / (a + eps));
    }
    return grad;
}

ExtractionResult extract_class(const BinaryHash& target,
                               const std::vector<BinaryHash>& database_hashes,
                               const std::vector<int>& labels, const ExtractionConfig& cfg) {
    const std::size_t k = database_hashes.size();
    if (k < 2) throw ContractError("extract_class: need at least two database hashes");
    if (labels.size() != k) throw ContractError("extract_class: labels/hashes length mismatch");

    int class_count = 0;
    for (int label : labels) {
        if (label < 0) throw ContractError("extract_class: negative class id");
        class_count = std::max(class_count, label + 1);
    }

    std::vector<std::array<double, kHashBits>> hashes(k);
    for (std::size_t i = 0; i < k; ++i) hashes[i] = signed_view(database_hashes[i]);
    const std::array<double, kHashBits> t = signed_view(target);

    std::vector<double> p(k, 1.0 / static_cast<double>(k));
    const int total_steps = cfg.epochs * cfg.steps_per_epoch;
    for (int step = 0; step < total_steps; ++step) {
        const std::vector<double> grad = extraction_gradient(p, hashes, t, cfg.entropy_epsilon);
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            p[i] -= cfg.learning_rate * grad[i];
            abs_sum += std::fabs(p[i]);
        }
        if (abs_sum <= 0.0) throw ContractError("extract_class: weights collapsed to zero");
        for (double& v : p) v /= abs_sum;
    }

    ExtractionResult result;
    result.support.assign(class_count, 0.0);
    for (std::size_t i = 0; i < k; ++i) result.support[labels[i]] += std::fabs(p[i]);
    result.predicted_class = static_cast<int>(
        std::max_element(result.support.begin(), result.support.end()) - result.support.begin());
    result.weights.p = std::move(p);
    return result;
}

double baseline_max_similarity(const BinaryHash& target, const ImageSampler& sampler, int n,
                               const HashOracle& oracle) {
    if (n < 1) throw ContractError("baseline_max_similarity: n must be >= 1");
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        best = std::max(best, hamming_similarity(oracle(sampler(i)), target));
    }
    return best;
}

}  // namespace phlab
