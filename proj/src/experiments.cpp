#include "phlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "phlab/errors.hpp"
#include "phlab/parallel.hpp"
#include "phlab/rng.hpp"
#include "phlab/ssim.hpp"

namespace phlab {

namespace {
constexpr std::uint64_t kSweepPairTag = 0x5377;
constexpr std::uint64_t kEvasionPairTag = 0x4576;
constexpr std::uint64_t kCollisionGaTag = 0x4761;
constexpr std::uint64_t kCollisionBaseTag = 0x4273;

constexpr double kMidBandLow = 0.2;
constexpr double kMidBandHigh = 0.8;
}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Aggregate aggregate_of(std::string name, const std::vector<double>& samples) {
    Aggregate agg;
    agg.name = std::move(name);
    agg.n = samples.size();
    if (samples.empty()) return agg;

    double sum = 0.0;
    for (double v : samples) sum += v;
    agg.mean = sum / samples.size();

    if (samples.size() >= 2) {
        double ss = 0.0;
        for (double v : samples) {
            const double d = v - agg.mean;
            ss += d * d;
        }
        agg.std_dev = std::sqrt(ss / (samples.size() - 1));
        const double sem = agg.std_dev / std::sqrt(static_cast<double>(samples.size()));
        agg.ci95 = 1.96 * sem;
        agg.ci99 = 2.576 * sem;
    }
    return agg;
}

const Aggregate* ExperimentReport::find_aggregate(const std::string& name) const {
    for (const auto& agg : aggregates) {
        if (agg.name == name) return &agg;
    }
    return nullptr;
}

InterpolationSweep run_interpolation_sweep(const Image& x1, const Image& x2, int steps,
                                           const HashOracle& oracle) {
    require_same_shape(x1, x2, "run_interpolation_sweep");
    if (steps < 2) throw ContractError("run_interpolation_sweep: steps must be >= 2");

    InterpolationSweep sweep;
    sweep.alphas.resize(steps);
    std::vector<BinaryHash> hashes(steps);
    for (int i = 0; i < steps; ++i) {
        const double alpha = static_cast<double>(i) / (steps - 1);
        sweep.alphas[i] = alpha;
        hashes[i] = oracle(interpolate(x1, x2, alpha));
    }
    // The grid endpoints are x2 (alpha=0) and x1 (alpha=1) bitwise, so
    // their hashes anchor the two similarity series.
    const BinaryHash& h1 = hashes.back();
    const BinaryHash& h2 = hashes.front();

    sweep.sim_to_x1.resize(steps);
    sweep.sim_to_x2.resize(steps);
    sweep.sim_adjacent.resize(steps);
    sweep.sim_adjacent[0] = 1.0;
    for (int i = 0; i < steps; ++i) {
        sweep.sim_to_x1[i] = hamming_similarity(hashes[i], h1);
        sweep.sim_to_x2[i] = hamming_similarity(hashes[i], h2);
        if (i > 0) sweep.sim_adjacent[i] = hamming_similarity(hashes[i - 1], hashes[i]);
    }
    return sweep;
}

ExperimentReport run_averaged_sweep(const LabeledDataset& ds, int pairs, int steps,
                                    const HashOracle& oracle, std::uint64_t seed) {
    if (ds.size() < 2) throw ContractError("run_averaged_sweep: dataset needs at least 2 images");
    if (pairs < 1) throw ContractError("run_averaged_sweep: pairs must be >= 1");

    // Pair indices come from a single driver-owned stream; the sweeps
    // themselves may then run on any number of workers.
    CounterRng rng(seed, kSweepPairTag);
    std::vector<std::pair<std::size_t, std::size_t>> picks(pairs);
    for (auto& pick : picks) {
        pick.first = rng.uniform_index(ds.size());
        do {
            pick.second = rng.uniform_index(ds.size());
        } while (pick.second == pick.first);
    }

    std::vector<InterpolationSweep> sweeps(pairs);
    parallel_for(pairs, [&](std::size_t i) {
        sweeps[i] = run_interpolation_sweep(ds.images[picks[i].first], ds.images[picks[i].second],
                                            steps, oracle);
    });

    ExperimentReport report;
    report.name = "averaged_sweep";
    report.config = {{"pairs", std::to_string(pairs)},
                     {"steps", std::to_string(steps)},
                     {"seed", std::to_string(seed)}};
    report.csv_header = {"alpha",       "mean_sim_x1", "ci99_sim_x1", "mean_sim_x2",
                         "ci99_sim_x2", "mean_sim_adjacent", "ci99_sim_adjacent"};

    ChartSeries s1{"sim_to_x1", {}, {}, {}};
    ChartSeries s2{"sim_to_x2", {}, {}, {}};
    ChartSeries sa{"sim_adjacent", {}, {}, {}};
    std::vector<double> mid_band;
    for (int i = 0; i < steps; ++i) {
        std::vector<double> v1(pairs), v2(pairs), va(pairs);
        for (int p = 0; p < pairs; ++p) {
            v1[p] = sweeps[p].sim_to_x1[i];
            v2[p] = sweeps[p].sim_to_x2[i];
            va[p] = sweeps[p].sim_adjacent[i];
        }
        const double alpha = static_cast<double>(i) / (steps - 1);
        const Aggregate a1 = aggregate_of("", v1);
        const Aggregate a2 = aggregate_of("", v2);
        const Aggregate aa = aggregate_of("", va);
        report.csv_rows.push_back({format_double(alpha), format_double(a1.mean),
                                   format_double(a1.ci99), format_double(a2.mean),
                                   format_double(a2.ci99), format_double(aa.mean),
                                   format_double(aa.ci99)});
        s1.x.push_back(alpha); s1.y.push_back(a1.mean); s1.ci.push_back(a1.ci99);
        s2.x.push_back(alpha); s2.y.push_back(a2.mean); s2.ci.push_back(a2.ci99);
        sa.x.push_back(alpha); sa.y.push_back(aa.mean); sa.ci.push_back(aa.ci99);
        if (alpha >= kMidBandLow && alpha <= kMidBandHigh) {
            mid_band.insert(mid_band.end(), v1.begin(), v1.end());
        }
    }
    report.aggregates.push_back(aggregate_of("mid_alpha_sim_x1", mid_band));
    report.chart.kind = ChartKind::Line;
    report.chart.x_label = "alpha";
    report.chart.y_label = "hamming similarity";
    report.chart.series = {std::move(s1), std::move(s2), std::move(sa)};
    return report;
}

ExperimentReport run_evasion_eval(const LabeledDataset& ds, int pairs, double grid_step,
                                  const HashOracle& oracle, std::uint64_t seed) {
    if (ds.size() < 2) throw ContractError("run_evasion_eval: dataset needs at least 2 images");

    CounterRng rng(seed, kEvasionPairTag);
    const bool multi_class = ds.class_count() > 1;
    std::vector<std::pair<std::size_t, std::size_t>> picks(pairs);
    for (auto& pick : picks) {
        pick.first = rng.uniform_index(ds.size());
        // The carrier should be semantically unrelated to the source, so
        // prefer a different class when the dataset has one.
        for (int attempt = 0;; ++attempt) {
            pick.second = rng.uniform_index(ds.size());
            if (pick.second == pick.first) continue;
            if (!multi_class || attempt > 1000 ||
                ds.labels[pick.first] != ds.labels[pick.second]) {
                break;
            }
        }
    }

    std::vector<EvasionResult> results(pairs);
    parallel_for(pairs, [&](std::size_t i) {
        results[i] = evade(ds.images[picks[i].first], ds.images[picks[i].second], oracle, grid_step);
    });

    ExperimentReport report;
    report.name = "evasion";
    report.config = {{"pairs", std::to_string(pairs)},
                     {"grid_step", format_double(grid_step)},
                     {"seed", std::to_string(seed)}};
    report.csv_header = {"pair", "source", "carrier", "alpha_star", "ssim", "evaded"};

    std::vector<double> success(pairs), ssims(pairs);
    for (int i = 0; i < pairs; ++i) {
        const auto& r = results[i];
        report.csv_rows.push_back({std::to_string(i), std::to_string(picks[i].first),
                                   std::to_string(picks[i].second), format_double(r.alpha_star),
                                   format_double(r.ssim_to_source), r.evaded ? "1" : "0"});
        success[i] = r.evaded ? 1.0 : 0.0;
        ssims[i] = r.ssim_to_source;
    }
    report.aggregates.push_back(aggregate_of("success_rate", success));
    report.aggregates.push_back(aggregate_of("ssim", ssims));

    report.chart.kind = ChartKind::Bar;
    report.chart.y_label = "value";
    report.chart.bar_labels = {"success_rate", "mean_ssim"};
    ChartSeries bars{"evasion", {0.0, 1.0},
                     {report.aggregates[0].mean, report.aggregates[1].mean},
                     {report.aggregates[0].ci95, report.aggregates[1].ci95}};
    report.chart.series = {std::move(bars)};
    return report;
}

ExperimentReport run_collision_eval(const LabeledDataset& train, const LabeledDataset& targets,
                                    const GeneticConfig& cfg, const HashOracle& oracle) {
    if (train.size() == 0 || targets.size() == 0) {
        throw ContractError("run_collision_eval: train and target sets must be nonempty");
    }
    const std::size_t n_targets = targets.size();
    const Image& shape_ref = train.images.front();

    std::vector<CollisionResult> ga(n_targets);
    std::vector<double> baselines(n_targets);
    parallel_for(n_targets, [&](std::size_t t) {
        const BinaryHash target_hash = oracle(targets.images[t]);
        GeneticConfig per_target = cfg;
        per_target.rng_seed = CounterRng::derive(cfg.rng_seed, kCollisionGaTag, t);
        ga[t] = genetic_near_collision(target_hash, train.images, oracle, per_target);

        // Matched-budget baseline: the same number of oracle queries spent
        // on uniformly random images.
        const std::uint64_t base_seed = CounterRng::derive(cfg.rng_seed, kCollisionBaseTag, t);
        ImageSampler sampler = [&shape_ref, base_seed](int i) {
            return random_noise_image(shape_ref.width, shape_ref.height, shape_ref.channels,
                                      CounterRng::derive(base_seed, 0, static_cast<std::uint64_t>(i)));
        };
        baselines[t] = baseline_max_similarity(target_hash, sampler, ga[t].oracle_calls, oracle);
    });

    ExperimentReport report;
    report.name = "collision";
    report.config = {{"targets", std::to_string(n_targets)},
                     {"database", std::to_string(train.size())},
                     {"population_start", std::to_string(cfg.population_start)},
                     {"population_end", std::to_string(cfg.population_end)},
                     {"decay_rate", format_double(cfg.decay_rate)},
                     {"iterations", std::to_string(cfg.iterations)},
                     {"children_per_iter", std::to_string(cfg.children_per_iter)},
                     {"mutation_range", format_double(cfg.mutation_range)},
                     {"seed", std::to_string(cfg.rng_seed)}};
    report.csv_header = {"target", "generation", "best_fitness"};

    const std::size_t generations = ga.front().best_fitness_per_generation.size();
    std::vector<double> finals(n_targets);
    for (std::size_t t = 0; t < n_targets; ++t) {
        for (std::size_t g = 0; g < ga[t].best_fitness_per_generation.size(); ++g) {
            report.csv_rows.push_back({std::to_string(t), std::to_string(g),
                                       format_double(ga[t].best_fitness_per_generation[g])});
        }
        finals[t] = ga[t].fitness;
    }
    report.aggregates.push_back(aggregate_of("final_fitness", finals));
    report.aggregates.push_back(aggregate_of("baseline_max_similarity", baselines));

    ChartSeries mean_series{"mean_best_fitness", {}, {}, {}};
    ChartSeries base_series{"random_baseline", {}, {}, {}};
    const Aggregate base_agg = report.aggregates[1];
    for (std::size_t g = 0; g < generations; ++g) {
        std::vector<double> at_g;
        at_g.reserve(n_targets);
        for (std::size_t t = 0; t < n_targets; ++t) {
            if (g < ga[t].best_fitness_per_generation.size()) {
                at_g.push_back(ga[t].best_fitness_per_generation[g]);
            }
        }
        const Aggregate agg = aggregate_of("", at_g);
        mean_series.x.push_back(static_cast<double>(g));
        mean_series.y.push_back(agg.mean);
        mean_series.ci.push_back(agg.ci95);
        base_series.x.push_back(static_cast<double>(g));
        base_series.y.push_back(base_agg.mean);
    }
    report.chart.kind = ChartKind::Line;
    report.chart.x_label = "generation";
    report.chart.y_label = "hamming similarity";
    report.chart.series = {std::move(mean_series), std::move(base_series)};
    return report;
}

ExperimentReport run_extraction_eval(const LabeledDataset& train, const LabeledDataset& test,
                                     const ExtractionConfig& cfg, const HashOracle& oracle) {
    if (train.size() < 2) throw ContractError("run_extraction_eval: train set needs >= 2 images");
    if (test.size() == 0) throw ContractError("run_extraction_eval: test set is empty");

    // The attack itself only ever sees these hashes plus labels.
    std::vector<BinaryHash> train_hashes(train.size());
    parallel_for(train.size(), [&](std::size_t i) { train_hashes[i] = oracle(train.images[i]); });

    std::vector<ExtractionResult> results(test.size());
    std::vector<BinaryHash> test_hashes(test.size());
    parallel_for(test.size(), [&](std::size_t i) { test_hashes[i] = oracle(test.images[i]); });
    parallel_for(test.size(), [&](std::size_t i) {
        results[i] = extract_class(test_hashes[i], train_hashes, train.labels, cfg);
    });

    ExperimentReport report;
    report.name = "extraction";
    report.config = {{"train", std::to_string(train.size())},
                     {"test", std::to_string(test.size())},
                     {"classes", std::to_string(train.class_count())},
                     {"epochs", std::to_string(cfg.epochs)},
                     {"steps_per_epoch", std::to_string(cfg.steps_per_epoch)},
                     {"learning_rate", format_double(cfg.learning_rate)},
                     {"entropy_epsilon", format_double(cfg.entropy_epsilon)}};
    report.csv_header = {"target", "true_class", "predicted_class", "correct"};

    const int classes = train.class_count();
    std::vector<double> correct(test.size());
    std::vector<std::vector<double>> per_class(classes);
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int truth = test.labels[i];
        const int predicted = results[i].predicted_class;
        const bool ok = predicted == truth;
        report.csv_rows.push_back({std::to_string(i), std::to_string(truth),
                                   std::to_string(predicted), ok ? "1" : "0"});
        correct[i] = ok ? 1.0 : 0.0;
        if (truth >= 0 && truth < classes) per_class[truth].push_back(ok ? 1.0 : 0.0);
    }
    report.aggregates.push_back(aggregate_of("accuracy", correct));

    ChartSeries bars{"accuracy", {}, {}, {}};
    for (int c = 0; c < classes; ++c) {
        const Aggregate agg = aggregate_of("accuracy_" + train.class_names[c], per_class[c]);
        report.aggregates.push_back(agg);
        bars.x.push_back(static_cast<double>(c));
        bars.y.push_back(agg.mean);
        bars.ci.push_back(agg.ci95);
        report.chart.bar_labels.push_back(train.class_names[c]);
    }
    bars.x.push_back(static_cast<double>(classes));
    bars.y.push_back(report.aggregates[0].mean);
    bars.ci.push_back(report.aggregates[0].ci95);
    report.chart.bar_labels.push_back("overall");
    report.chart.kind = ChartKind::Bar;
    report.chart.y_label = "accuracy";
    report.chart.series = {std::move(bars)};
    return report;
}

// --- emission ------------------------------------------------------------

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + path.string());
}

std::string render_csv(const ExperimentReport& report) {
    std::ostringstream out;
    for (const auto& [key, value] : report.config) {
        out << "# " << key << "=" << value << "\n";
    }
    for (const auto& agg : report.aggregates) {
        out << "# aggregate " << agg.name << " mean=" << format_double(agg.mean)
            << " std=" << format_double(agg.std_dev) << " ci95=" << format_double(agg.ci95)
            << " ci99=" << format_double(agg.ci99) << " n=" << agg.n << "\n";
    }
    for (std::size_t i = 0; i < report.csv_header.size(); ++i) {
        if (i) out << ',';
        out << report.csv_header[i];
    }
    out << '\n';
    for (const auto& row : report.csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;

constexpr double kSvgW = 860.0, kSvgH = 520.0;
constexpr double kPlotX0 = 70.0, kPlotX1 = 820.0, kPlotY0 = 460.0, kPlotY1 = 50.0;

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct AxisMap {
    double lo, hi, px0, px1;
    double operator()(double v) const {
        if (hi == lo) return 0.5 * (px0 + px1);
        return px0 + (v - lo) / (hi - lo) * (px1 - px0);
    }
};

std::string render_svg(const ExperimentReport& report) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgW << "\" height=\"" << kSvgH
        << "\" viewBox=\"0 0 " << kSvgW << " " << kSvgH << "\">\n";
    out << "<title>" << report.name << "</title>\n";
    out << "<rect width=\"" << kSvgW << "\" height=\"" << kSvgH << "\" fill=\"white\"/>\n";

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& series : report.chart.series) {
        for (std::size_t i = 0; i < series.y.size(); ++i) {
            const double ci = i < series.ci.size() ? series.ci[i] : 0.0;
            const double x = i < series.x.size() ? series.x[i] : static_cast<double>(i);
            if (first) {
                xmin = xmax = x;
                ymin = series.y[i] - ci;
                ymax = series.y[i] + ci;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, series.y[i] - ci);
                ymax = std::max(ymax, series.y[i] + ci);
            }
        }
    }
    if (report.chart.kind == ChartKind::Bar) ymin = std::min(ymin, 0.0);
    double pad = 0.05 * (ymax - ymin);
    if (pad == 0.0) pad = 0.5;
    ymin -= pad;
    ymax += pad;
    if (report.chart.kind == ChartKind::Bar) {
        xmin -= 0.75;
        xmax += 0.75;
    }

    const AxisMap mx{xmin, xmax, kPlotX0, kPlotX1};
    const AxisMap my{ymin, ymax, kPlotY0, kPlotY1};

    // Axes and ticks.
    out << "<line x1=\"" << svg_num(kPlotX0) << "\" y1=\"" << svg_num(kPlotY0) << "\" x2=\""
        << svg_num(kPlotX1) << "\" y2=\"" << svg_num(kPlotY0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << svg_num(kPlotX0) << "\" y1=\"" << svg_num(kPlotY0) << "\" x2=\""
        << svg_num(kPlotX0) << "\" y2=\"" << svg_num(kPlotY1) << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double ty = ymin + tick * (ymax - ymin) / 4.0;
        const double py = my(ty);
        out << "<line x1=\"" << svg_num(kPlotX0 - 4) << "\" y1=\"" << svg_num(py) << "\" x2=\""
            << svg_num(kPlotX0) << "\" y2=\"" << svg_num(py) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << svg_num(kPlotX0 - 8) << "\" y=\"" << svg_num(py + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(ty) << "</text>\n";
        if (report.chart.kind == ChartKind::Line) {
            const double tx = xmin + tick * (xmax - xmin) / 4.0;
            const double px = mx(tx);
            out << "<line x1=\"" << svg_num(px) << "\" y1=\"" << svg_num(kPlotY0) << "\" x2=\""
                << svg_num(px) << "\" y2=\"" << svg_num(kPlotY0 + 4) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << svg_num(px) << "\" y=\"" << svg_num(kPlotY0 + 18)
                << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double(tx) << "</text>\n";
        }
    }
    if (!report.chart.x_label.empty()) {
        out << "<text x=\"" << svg_num(0.5 * (kPlotX0 + kPlotX1)) << "\" y=\""
            << svg_num(kPlotY0 + 38) << "\" font-size=\"13\" text-anchor=\"middle\">"
            << report.chart.x_label << "</text>\n";
    }
    if (!report.chart.y_label.empty()) {
        out << "<text x=\"16\" y=\"" << svg_num(0.5 * (kPlotY0 + kPlotY1))
            << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
            << svg_num(0.5 * (kPlotY0 + kPlotY1)) << ")\">" << report.chart.y_label << "</text>\n";
    }

    int color = 0;
    for (const auto& series : report.chart.series) {
        const char* stroke = kPalette[color % kPaletteSize];
        if (report.chart.kind == ChartKind::Line) {
            out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < series.y.size(); ++i) {
                if (i) out << ' ';
                out << svg_num(mx(series.x[i])) << ',' << svg_num(my(series.y[i]));
            }
            out << "\"/>\n";
        } else {
            const double slot = (kPlotX1 - kPlotX0) / (xmax - xmin);
            const double bar_w = 0.6 * slot;
            for (std::size_t i = 0; i < series.y.size(); ++i) {
                const double cx = mx(series.x[i]);
                const double top = my(std::max(series.y[i], 0.0));
                const double bottom = my(std::min(series.y[i], 0.0));
                out << "<rect x=\"" << svg_num(cx - bar_w / 2) << "\" y=\"" << svg_num(top)
                    << "\" width=\"" << svg_num(bar_w) << "\" height=\"" << svg_num(bottom - top)
                    << "\" fill=\"" << stroke << "\"/>\n";
                if (i < report.chart.bar_labels.size()) {
                    out << "<text x=\"" << svg_num(cx) << "\" y=\"" << svg_num(kPlotY0 + 18)
                        << "\" font-size=\"11\" text-anchor=\"middle\">" << report.chart.bar_labels[i]
                        << "</text>\n";
                }
            }
        }
        // Confidence whiskers.
        for (std::size_t i = 0; i < series.ci.size() && i < series.y.size(); ++i) {
            if (series.ci[i] <= 0.0) continue;
            const double cx = mx(series.x[i]);
            const double y_hi = my(series.y[i] + series.ci[i]);
            const double y_lo = my(series.y[i] - series.ci[i]);
            out << "<line x1=\"" << svg_num(cx) << "\" y1=\"" << svg_num(y_lo) << "\" x2=\""
                << svg_num(cx) << "\" y2=\"" << svg_num(y_hi) << "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
            out << "<line x1=\"" << svg_num(cx - 2.5) << "\" y1=\"" << svg_num(y_hi) << "\" x2=\""
                << svg_num(cx + 2.5) << "\" y2=\"" << svg_num(y_hi) << "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
            out << "<line x1=\"" << svg_num(cx - 2.5) << "\" y1=\"" << svg_num(y_lo) << "\" x2=\""
                << svg_num(cx + 2.5) << "\" y2=\"" << svg_num(y_lo) << "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
        }
        ++color;
    }

    // Legend.
    double ly = kPlotY1 + 6;
    color = 0;
    for (const auto& series : report.chart.series) {
        const char* stroke = kPalette[color % kPaletteSize];
        out << "<rect x=\"" << svg_num(kPlotX1 - 150) << "\" y=\"" << svg_num(ly) << "\" width=\"12\" height=\"12\" fill=\""
            << stroke << "\"/>\n";
        out << "<text x=\"" << svg_num(kPlotX1 - 132) << "\" y=\"" << svg_num(ly + 10)
            << "\" font-size=\"12\">" << series.name << "</text>\n";
        ly += 16;
        ++color;
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    write_file(out_dir / (report.name + ".csv"), render_csv(report));
    write_file(out_dir / (report.name + ".svg"), render_svg(report));
}

}  // namespace phlab
