#include "phlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "phlab/errors.hpp"
#include "phlab/rng.hpp"

namespace phlab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("config: key \"" + key + "\" expects an unsigned integer, got \"" + value + "\"");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("config: key \"" + key + "\" expects an integer, got \"" + value + "\"");
    }
    return static_cast<int>(v);
}

double parse_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("config: key \"" + key + "\" expects a number, got \"" + value + "\"");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: key \"" + key + "\" expects a boolean, got \"" + value + "\"");
}

}  // namespace

EmbedderKind parse_embedder_name(const std::string& name) {
    if (name == "linear-surrogate" || name == "linear") return EmbedderKind::LinearSurrogate;
    if (name == "tanh-surrogate" || name == "tanh") return EmbedderKind::TanhSurrogate;
    if (name == "feature-file") return EmbedderKind::FeatureFile;
    throw ConfigError("unknown embedder \"" + name +
                      "\" (expected linear-surrogate, tanh-surrogate or feature-file)");
}

DefenseMode parse_defense_name(const std::string& name) {
    if (name == "none") return DefenseMode::None;
    if (name == "sha" || name == "sha-at-the-end") return DefenseMode::ShaAtTheEnd;
    throw ConfigError("unknown defense \"" + name + "\" (expected none or sha-at-the-end)");
}

std::uint64_t CliSettings::derived_seed(std::uint64_t tag) const {
    return CounterRng::derive(seed, tag);
}

PipelineConfig CliSettings::pipeline_config() const {
    PipelineConfig cfg;
    cfg.embedder = parse_embedder_name(embedder);
    cfg.embedder_seed = embedder_seed.value_or(derived_seed(kSeedTagEmbedder));
    cfg.matrix_seed = matrix_seed.value_or(derived_seed(kSeedTagMatrix));
    if (preprocess_width <= 0 || preprocess_height <= 0) {
        throw ConfigError("preprocess dimensions must be positive");
    }
    cfg.preprocess.target_width = preprocess_width;
    cfg.preprocess.target_height = preprocess_height;
    cfg.preprocess.grayscale = preprocess_grayscale;
    cfg.defense = parse_defense_name(defense);
    cfg.feature_file = feature_file;
    if (!(semantic_ssim_threshold > 0.0 && semantic_ssim_threshold < 1.0)) {
        throw ConfigError("semantic_ssim_threshold must lie in (0, 1)");
    }
    cfg.semantic_ssim_threshold = semantic_ssim_threshold;
    return cfg;
}

GeneticConfig CliSettings::genetic_config() const {
    GeneticConfig cfg;
    cfg.population_start = population_start;
    cfg.population_end = population_end;
    cfg.decay_rate = decay_rate;
    cfg.iterations = iterations;
    cfg.children_per_iter = children_per_iter;
    cfg.mutation_range = mutation_range;
    cfg.rng_seed = derived_seed(kSeedTagGenetic);
    if (cfg.population_end > cfg.population_start || cfg.population_start <= 0) {
        throw ConfigError("population_end must be <= population_start (both positive)");
    }
    if (!(cfg.decay_rate > 0.0 && cfg.decay_rate < 1.0)) {
        throw ConfigError("decay_rate must lie in (0, 1)");
    }
    return cfg;
}

ExtractionConfig CliSettings::extraction_config() const {
    ExtractionConfig cfg;
    cfg.epochs = epochs;
    cfg.steps_per_epoch = steps_per_epoch;
    cfg.learning_rate = learning_rate;
    cfg.entropy_epsilon = entropy_epsilon;
    cfg.rng_seed = derived_seed(kSeedTagExtraction);
    if (cfg.epochs <= 0 || cfg.steps_per_epoch <= 0 || cfg.learning_rate <= 0.0 ||
        cfg.entropy_epsilon <= 0.0) {
        throw ConfigError("extraction parameters must be positive");
    }
    return cfg;
}

SyntheticSpec CliSettings::synthetic_spec() const {
    SyntheticSpec spec;
    spec.class_count = class_count;
    spec.per_class = per_class;
    spec.image_size = image_size;
    spec.rng_seed = derived_seed(kSeedTagDataset);
    if (spec.class_count <= 0 || spec.per_class <= 0 || spec.image_size <= 0) {
        throw ConfigError("synthetic dataset parameters must be positive");
    }
    return spec;
}

void apply_config_file(CliSettings& s, const std::filesystem::path& path,
                       const std::set<std::string>& overridden) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());

    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> keys = {
        {"embedder", [&](const std::string&, const std::string& v) { parse_embedder_name(v); s.embedder = v; }},
        {"embedder_seed", [&](const std::string& k, const std::string& v) { s.embedder_seed = parse_u64(k, v); }},
        {"matrix_seed", [&](const std::string& k, const std::string& v) { s.matrix_seed = parse_u64(k, v); }},
        {"preprocess_width", [&](const std::string& k, const std::string& v) { s.preprocess_width = parse_int(k, v); }},
        {"preprocess_height", [&](const std::string& k, const std::string& v) { s.preprocess_height = parse_int(k, v); }},
        {"preprocess_grayscale", [&](const std::string& k, const std::string& v) { s.preprocess_grayscale = parse_bool(k, v); }},
        {"defense", [&](const std::string&, const std::string& v) { parse_defense_name(v); s.defense = v; }},
        {"feature_file", [&](const std::string&, const std::string& v) { s.feature_file = v; }},
        {"semantic_ssim_threshold", [&](const std::string& k, const std::string& v) { s.semantic_ssim_threshold = parse_real(k, v); }},
        {"population_start", [&](const std::string& k, const std::string& v) { s.population_start = parse_int(k, v); }},
        {"population_end", [&](const std::string& k, const std::string& v) { s.population_end = parse_int(k, v); }},
        {"decay_rate", [&](const std::string& k, const std::string& v) { s.decay_rate = parse_real(k, v); }},
        {"iterations", [&](const std::string& k, const std::string& v) { s.iterations = parse_int(k, v); }},
        {"children_per_iter", [&](const std::string& k, const std::string& v) { s.children_per_iter = parse_int(k, v); }},
        {"mutation_range", [&](const std::string& k, const std::string& v) { s.mutation_range = parse_real(k, v); }},
        {"epochs", [&](const std::string& k, const std::string& v) { s.epochs = parse_int(k, v); }},
        {"steps_per_epoch", [&](const std::string& k, const std::string& v) { s.steps_per_epoch = parse_int(k, v); }},
        {"learning_rate", [&](const std::string& k, const std::string& v) { s.learning_rate = parse_real(k, v); }},
        {"entropy_epsilon", [&](const std::string& k, const std::string& v) { s.entropy_epsilon = parse_real(k, v); }},
        {"class_count", [&](const std::string& k, const std::string& v) { s.class_count = parse_int(k, v); }},
        {"per_class", [&](const std::string& k, const std::string& v) { s.per_class = parse_int(k, v); }},
        {"image_size", [&](const std::string& k, const std::string& v) { s.image_size = parse_int(k, v); }},
        {"seed", [&](const std::string& k, const std::string& v) { s.seed = parse_u64(k, v); }},
        {"threads", [&](const std::string& k, const std::string& v) { s.threads = parse_int(k, v); }},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.resize(hash_pos);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
        }
        if (overridden.count(key)) continue;  // explicit flags win
        it->second(key, value);
    }
}

}  // namespace phlab
