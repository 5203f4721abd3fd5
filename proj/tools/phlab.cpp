#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "phlab/attacks.hpp"
#include "phlab/config.hpp"
#include "phlab/datasets.hpp"
#include "phlab/errors.hpp"
#include "phlab/experiments.hpp"
#include "phlab/image_io.hpp"
#include "phlab/parallel.hpp"
#include "phlab/pipeline.hpp"
#include "phlab/rng.hpp"
#include "phlab/ssim.hpp"

namespace {

using namespace phlab;

struct Args {
    CliSettings settings;
    std::string config_path;
    std::string out_dir = "reports";

    // hash
    std::string hash_image_path;

    // attack
    std::string source_path, carrier_path;
    double grid_step = 0.01;
    std::string target_hash_hex, target_image_path;
    std::string database_dir;

    // experiment
    std::string experiment_name;
    int pairs = -1;    // -1 = experiment default
    int steps = 101;
    int targets = -1;
    bool paper_scale = false;
};

LabeledDataset synthetic_or_directory(const Args& args, int per_class_override = -1) {
    if (!args.database_dir.empty()) return load_directory(args.database_dir);
    SyntheticSpec spec = args.settings.synthetic_spec();
    if (per_class_override > 0) spec.per_class = per_class_override;
    return generate_synthetic(spec);
}

int cmd_hash(const Args& args) {
    const Pipeline pipeline(args.settings.pipeline_config());
    const Image img = read_image(args.hash_image_path);
    const BinaryHash raw = pipeline.raw_hash(img);
    std::cout << raw.to_hex() << "\n";
    if (pipeline.config().defense == DefenseMode::ShaAtTheEnd) {
        std::cout << sha_block(raw).to_hex() << "\n";
    }
    return 0;
}

int cmd_attack_evade(const Args& args) {
    const Pipeline pipeline(args.settings.pipeline_config());
    const Image source = read_image(args.source_path);
    const Image carrier = read_image(args.carrier_path);
    const EvasionResult res = evade(source, carrier, pipeline.oracle(), args.grid_step);
    const bool semantic_ok = res.ssim_to_source >= pipeline.config().semantic_ssim_threshold;

    ExperimentReport report;
    report.name = "attack_evade";
    report.config = {{"source", args.source_path},
                     {"carrier", args.carrier_path},
                     {"grid_step", format_double(args.grid_step)}};
    report.csv_header = {"alpha_star", "ssim", "evaded", "oracle_calls"};
    report.csv_rows.push_back({format_double(res.alpha_star), format_double(res.ssim_to_source),
                               res.evaded ? "1" : "0", std::to_string(res.oracle_calls)});
    emit_report(report, args.out_dir);
    if (res.evaded) write_ppm(res.adversarial_image, std::filesystem::path(args.out_dir) / "attack_evade_image.ppm");

    std::cout << "alpha_star=" << format_double(res.alpha_star)
              << " ssim=" << format_double(res.ssim_to_source)
              << " evaded=" << (res.evaded ? "true" : "false")
              << " semantic_ok=" << (semantic_ok ? "true" : "false") << "\n";
    return 0;
}

BinaryHash resolve_target_hash(const Args& args, const Pipeline& pipeline) {
    if (!args.target_hash_hex.empty()) return BinaryHash::from_hex(args.target_hash_hex);
    if (!args.target_image_path.empty()) return pipeline.hash(read_image(args.target_image_path));
    throw ConfigError("either --target-hash or --target-image is required");
}

int cmd_attack_collide(const Args& args) {
    const Pipeline pipeline(args.settings.pipeline_config());
    const BinaryHash target = resolve_target_hash(args, pipeline);
    const LabeledDataset db = synthetic_or_directory(args);
    const CollisionResult res =
        genetic_near_collision(target, db.images, pipeline.oracle(), args.settings.genetic_config());

    ExperimentReport report;
    report.name = "attack_collide";
    report.config = {{"database", std::to_string(db.size())},
                     {"target", target.to_hex()}};
    report.csv_header = {"generation", "best_fitness"};
    for (std::size_t g = 0; g < res.best_fitness_per_generation.size(); ++g) {
        report.csv_rows.push_back({std::to_string(g), format_double(res.best_fitness_per_generation[g])});
    }
    emit_report(report, args.out_dir);
    write_ppm(res.image, std::filesystem::path(args.out_dir) / "attack_collide_image.ppm");
    {
        std::ofstream weights(std::filesystem::path(args.out_dir) / "attack_collide_weights.txt");
        weights << res.weights.to_sparse_text() << "\n";
    }

    std::cout << "best_fitness=" << format_double(res.fitness)
              << " oracle_calls=" << res.oracle_calls << "\n";
    return 0;
}

int cmd_attack_extract(const Args& args) {
    const Pipeline pipeline(args.settings.pipeline_config());
    const BinaryHash target = resolve_target_hash(args, pipeline);
    const LabeledDataset db = synthetic_or_directory(args);

    std::vector<BinaryHash> hashes(db.size());
    const HashOracle oracle = pipeline.oracle();
    parallel_for(db.size(), [&](std::size_t i) { hashes[i] = oracle(db.images[i]); });
    const ExtractionResult res =
        extract_class(target, hashes, db.labels, args.settings.extraction_config());

    ExperimentReport report;
    report.name = "attack_extract";
    report.config = {{"database", std::to_string(db.size())},
                     {"target", target.to_hex()}};
    report.csv_header = {"class", "name", "support"};
    for (std::size_t c = 0; c < res.support.size(); ++c) {
        report.csv_rows.push_back({std::to_string(c), db.class_names[c], format_double(res.support[c])});
    }
    emit_report(report, args.out_dir);

    std::cout << "predicted_class=" << res.predicted_class
              << " name=" << db.class_names[res.predicted_class]
              << " support=" << format_double(res.support[res.predicted_class]) << "\n";
    return 0;
}

void print_report_summary(const ExperimentReport& report, const std::string& out_dir) {
    std::cout << report.name << ":";
    for (const auto& agg : report.aggregates) {
        if (agg.name.rfind("accuracy_", 0) == 0) continue;  // per-class detail stays in the files
        std::cout << " " << agg.name << "=" << format_double(agg.mean);
    }
    std::cout << " -> " << out_dir << "/" << report.name << ".csv\n";
}

int cmd_experiment(Args& args) {
    const std::string& name = args.experiment_name;
    const std::set<std::string> known = {"sweep", "evasion", "collision", "extraction", "defense"};
    if (!known.count(name)) {
        throw ConfigError("unknown experiment \"" + name +
                          "\" (valid: sweep, evasion, collision, extraction, defense)");
    }

    const std::uint64_t exp_seed = args.settings.derived_seed(kSeedTagExperiment);

    auto make_pipeline = [&](DefenseMode defense) {
        PipelineConfig cfg = args.settings.pipeline_config();
        cfg.defense = defense;
        return Pipeline(cfg);
    };
    const DefenseMode configured_defense = parse_defense_name(args.settings.defense);

    auto pool_dataset = [&](int per_class) {
        if (!args.database_dir.empty()) return load_directory(args.database_dir);
        SyntheticSpec spec = args.settings.synthetic_spec();
        spec.per_class = per_class;
        return generate_synthetic(spec);
    };

    if (name == "sweep") {
        const int pairs = args.pairs > 0 ? args.pairs : (args.paper_scale ? 1000 : 40);
        const LabeledDataset ds = pool_dataset(args.settings.per_class);
        const Pipeline pipeline = make_pipeline(configured_defense);
        ExperimentReport report = run_averaged_sweep(ds, pairs, args.steps, pipeline.oracle(), exp_seed);
        emit_report(report, args.out_dir);
        print_report_summary(report, args.out_dir);
        return 0;
    }
    if (name == "evasion") {
        const int pairs = args.pairs > 0 ? args.pairs : (args.paper_scale ? 10000 : 200);
        const LabeledDataset ds = pool_dataset(args.settings.per_class);
        const Pipeline pipeline = make_pipeline(configured_defense);
        ExperimentReport report = run_evasion_eval(ds, pairs, args.grid_step, pipeline.oracle(), exp_seed);
        emit_report(report, args.out_dir);
        print_report_summary(report, args.out_dir);
        return 0;
    }

    // Collision/extraction need class-consistent train and target pools:
    // one generated corpus, parity split, truncated to the scale in use.
    auto split_pools = [&](int train_per_class, int eval_per_class) {
        const LabeledDataset pool = pool_dataset(2 * std::max(train_per_class, eval_per_class));
        auto [train, validation] = split_by_parity(pool);
        return std::make_pair(subset_per_class(train, 0, train_per_class),
                              subset_per_class(validation, 0, eval_per_class));
    };

    auto run_collision = [&](DefenseMode defense, const std::string& suffix) {
        const int train_pc = args.paper_scale ? 25 : 10;
        const int target_total = args.targets > 0 ? args.targets : (args.paper_scale ? 150 : 30);
        const int target_pc =
            std::max(1, target_total / std::max(1, args.settings.class_count));
        auto [train, targets] = split_pools(train_pc, target_pc);
        GeneticConfig cfg = args.settings.genetic_config();
        cfg.rng_seed = CounterRng::derive(exp_seed, 0x636f6c);
        const Pipeline pipeline = make_pipeline(defense);
        ExperimentReport report = run_collision_eval(train, targets, cfg, pipeline.oracle());
        report.name += suffix;
        emit_report(report, args.out_dir);
        print_report_summary(report, args.out_dir);
    };
    auto run_extraction = [&](DefenseMode defense, const std::string& suffix) {
        const int train_pc = 50;
        const int test_pc = args.paper_scale ? 100 : 20;
        auto [train, test] = split_pools(train_pc, test_pc);
        const Pipeline pipeline = make_pipeline(defense);
        ExperimentReport report =
            run_extraction_eval(train, test, args.settings.extraction_config(), pipeline.oracle());
        report.name += suffix;
        emit_report(report, args.out_dir);
        print_report_summary(report, args.out_dir);
    };

    if (name == "collision") {
        run_collision(configured_defense, "");
        return 0;
    }
    if (name == "extraction") {
        run_extraction(configured_defense, "");
        return 0;
    }

    // defense: pre/post SHA comparisons plus the hardened sweep.
    run_collision(DefenseMode::None, "_defense_none");
    run_collision(DefenseMode::ShaAtTheEnd, "_defense_sha");
    run_extraction(DefenseMode::None, "_defense_none");
    run_extraction(DefenseMode::ShaAtTheEnd, "_defense_sha");
    {
        const int pairs = args.pairs > 0 ? args.pairs : (args.paper_scale ? 1000 : 40);
        const LabeledDataset ds = pool_dataset(args.settings.per_class);
        const Pipeline pipeline = make_pipeline(DefenseMode::ShaAtTheEnd);
        ExperimentReport report = run_averaged_sweep(ds, pairs, args.steps, pipeline.oracle(), exp_seed);
        report.name += "_defense_sha";
        emit_report(report, args.out_dir);
        print_report_summary(report, args.out_dir);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Args args;
    CLI::App app{"phlab: perceptual-hash security laboratory"};
    app.require_subcommand(1);

    app.add_option("--config", args.config_path, "key = value configuration file");
    auto* o_seed = app.add_option("--seed", args.settings.seed, "master seed (default 42)");
    auto* o_threads = app.add_option("--threads", args.settings.threads, "worker thread cap");
    auto* o_embedder = app.add_option("--embedder", args.settings.embedder,
                                      "linear-surrogate | tanh-surrogate | feature-file");
    std::uint64_t embedder_seed_flag = 0, matrix_seed_flag = 0;
    auto* o_eseed = app.add_option("--embedder-seed", embedder_seed_flag, "pin the embedder seed");
    auto* o_mseed = app.add_option("--matrix-seed", matrix_seed_flag, "pin the hashing-matrix seed");
    auto* o_pw = app.add_option("--preprocess-width", args.settings.preprocess_width, "");
    auto* o_ph = app.add_option("--preprocess-height", args.settings.preprocess_height, "");
    auto* o_gray = app.add_flag("--grayscale", args.settings.preprocess_grayscale,
                                "single-channel embedder input");
    auto* o_defense = app.add_option("--defense", args.settings.defense, "none | sha-at-the-end");
    auto* o_ff = app.add_option("--feature-file", args.settings.feature_file,
                                "feature table for the feature-file embedder");
    auto* o_classes = app.add_option("--classes", args.settings.class_count, "synthetic class count");
    auto* o_per_class = app.add_option("--per-class", args.settings.per_class, "synthetic images per class");
    auto* o_imgsize = app.add_option("--image-size", args.settings.image_size, "synthetic image size");

    auto* hash_cmd = app.add_subcommand("hash", "hash an image file");
    hash_cmd->fallthrough();
    hash_cmd->add_option("image", args.hash_image_path, "PPM/PGM/PNG image")->required();

    auto* attack_cmd = app.add_subcommand("attack", "run a black-box attack");
    attack_cmd->require_subcommand(1);
    attack_cmd->fallthrough();
    auto* evade_cmd = attack_cmd->add_subcommand("evade", "hash-evading interpolation");
    evade_cmd->fallthrough();
    evade_cmd->add_option("--source", args.source_path)->required();
    evade_cmd->add_option("--carrier", args.carrier_path)->required();
    evade_cmd->add_option("--grid-step", args.grid_step, "alpha grid step (default 0.01)");
    evade_cmd->add_option("--out", args.out_dir, "report directory");

    auto* collide_cmd = attack_cmd->add_subcommand("collide", "genetic near-collision search");
    collide_cmd->fallthrough();
    collide_cmd->add_option("--target-hash", args.target_hash_hex, "24-hex target");
    collide_cmd->add_option("--target-image", args.target_image_path, "image whose hash to match");
    collide_cmd->add_option("--database", args.database_dir, "class-per-subdirectory image root");
    collide_cmd->add_option("--iterations", args.settings.iterations);
    collide_cmd->add_option("--population-start", args.settings.population_start);
    collide_cmd->add_option("--population-end", args.settings.population_end);
    collide_cmd->add_option("--children", args.settings.children_per_iter);
    collide_cmd->add_option("--out", args.out_dir, "report directory");

    auto* extract_cmd = attack_cmd->add_subcommand("extract", "class extraction from a hash");
    extract_cmd->fallthrough();
    extract_cmd->add_option("--target-hash", args.target_hash_hex, "24-hex target");
    extract_cmd->add_option("--target-image", args.target_image_path, "image whose class to infer");
    extract_cmd->add_option("--database", args.database_dir, "class-per-subdirectory image root");
    extract_cmd->add_option("--epochs", args.settings.epochs);
    extract_cmd->add_option("--steps-per-epoch", args.settings.steps_per_epoch);
    extract_cmd->add_option("--out", args.out_dir, "report directory");

    auto* experiment_cmd = app.add_subcommand("experiment", "reproduce a figure-style result");
    experiment_cmd->fallthrough();
    experiment_cmd->add_option("name", args.experiment_name,
                               "sweep | evasion | collision | extraction | defense")->required();
    experiment_cmd->add_option("--out", args.out_dir, "report directory (default reports)");
    experiment_cmd->add_option("--pairs", args.pairs, "sample pairs");
    experiment_cmd->add_option("--steps", args.steps, "alpha grid points (default 101)");
    experiment_cmd->add_option("--targets", args.targets, "collision target count");
    experiment_cmd->add_option("--grid-step", args.grid_step, "evasion alpha step");
    experiment_cmd->add_option("--database", args.database_dir, "use this image root instead of synthetic data");
    experiment_cmd->add_flag("--paper-scale", args.paper_scale, "full paper sample counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (o_eseed->count() > 0) args.settings.embedder_seed = embedder_seed_flag;
        if (o_mseed->count() > 0) args.settings.matrix_seed = matrix_seed_flag;

        if (!args.config_path.empty()) {
            // Explicit flags take precedence over config-file values.
            std::set<std::string> overridden;
            const std::pair<CLI::Option*, const char*> tracked[] = {
                {o_seed, "seed"}, {o_threads, "threads"}, {o_embedder, "embedder"},
                {o_eseed, "embedder_seed"}, {o_mseed, "matrix_seed"},
                {o_pw, "preprocess_width"}, {o_ph, "preprocess_height"},
                {o_gray, "preprocess_grayscale"}, {o_defense, "defense"},
                {o_ff, "feature_file"}, {o_classes, "class_count"},
                {o_per_class, "per_class"}, {o_imgsize, "image_size"},
            };
            for (const auto& [opt, key] : tracked) {
                if (opt->count() > 0) overridden.insert(key);
            }
            apply_config_file(args.settings, args.config_path, overridden);
        }

        if (o_threads->count() == 0 && args.settings.threads == 0) {
            if (const char* env = std::getenv("PHLAB_THREADS")) {
                args.settings.threads = std::atoi(env);
            }
        }
        if (args.settings.threads > 0) set_worker_threads(args.settings.threads);

        if (hash_cmd->parsed()) return cmd_hash(args);
        if (attack_cmd->parsed()) {
            if (evade_cmd->parsed()) return cmd_attack_evade(args);
            if (collide_cmd->parsed()) return cmd_attack_collide(args);
            if (extract_cmd->parsed()) return cmd_attack_extract(args);
        }
        if (experiment_cmd->parsed()) return cmd_experiment(args);
        throw ConfigError("no subcommand given");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
