#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "phlab/attacks.hpp"
#include "phlab/datasets.hpp"
#include "phlab/pipeline.hpp"

namespace phlab {

/// Hash similarities along a uniform interpolation grid between two
/// images. sim_adjacent[i] compares grid points i-1 and i; entry 0 is 1 by
/// convention.
struct InterpolationSweep {
    std::vector<double> alphas;
    std::vector<double> sim_to_x1;
    std::vector<double> sim_to_x2;
    std::vector<double> sim_adjacent;
};

struct Aggregate {
    std::string name;
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation
    double ci95 = 0.0;     // half-width, 1.96 * std / sqrt(n)
    double ci99 = 0.0;     // half-width, 2.576 * std / sqrt(n)
    std::size_t n = 0;
};

Aggregate aggregate_of(std::string name, const std::vector<double>& samples);

enum class ChartKind { Line, Bar };

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> ci;  // per-point half-widths; empty for none
};

struct ChartSpec {
    ChartKind kind = ChartKind::Line;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    std::vector<std::string> bar_labels;  // bar charts: one label per x position
};

struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> config;  // snapshot, emitted as comments
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::vector<Aggregate> aggregates;
    ChartSpec chart;

    const Aggregate* find_aggregate(const std::string& name) const;
};

InterpolationSweep run_interpolation_sweep(const Image& x1, const Image& x2, int steps,
                                           const HashOracle& oracle);

/// Averages sweep series over randomly sampled unordered pairs; per-alpha
/// means carry 99% confidence intervals. Also aggregates the mid-band
/// (0.2 <= alpha <= 0.8) mean of sim_to_x1.
ExperimentReport run_averaged_sweep(const LabeledDataset& ds, int pairs, int steps,
                                    const HashOracle& oracle, std::uint64_t seed);

/// Evasion attack over sampled pairs; carriers are drawn from a different
/// class than the source whenever the dataset has more than one class.
ExperimentReport run_evasion_eval(const LabeledDataset& ds, int pairs, double grid_step,
                                  const HashOracle& oracle, std::uint64_t seed);

/// Genetic near-collision per target with per-generation trajectories,
/// plus the random-sampling baseline at the same oracle-query budget.
ExperimentReport run_collision_eval(const LabeledDataset& train, const LabeledDataset& targets,
                                    const GeneticConfig& cfg, const HashOracle& oracle);

/// Information-extraction accuracy per class and overall.
ExperimentReport run_extraction_eval(const LabeledDataset& train, const LabeledDataset& test,
                                     const ExtractionConfig& cfg, const HashOracle& oracle);

/// Writes `<name>.csv` and `<name>.svg` into out_dir, byte-deterministic
/// for a given report.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

/// Fixed-format float used in all emitted files ("%.9g").
std::string format_double(double v);

}  // namespace phlab
