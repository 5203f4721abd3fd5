#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "phlab/datasets.hpp"
#include "phlab/errors.hpp"
#include "phlab/experiments.hpp"
#include "support.hpp"

using namespace phlab;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

LabeledDataset tiny_dataset(int classes, int per_class, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.class_count = classes;
    spec.per_class = per_class;
    spec.image_size = 16;
    spec.rng_seed = seed;
    return generate_synthetic(spec);
}

int data_row_count(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("aggregate_of matches hand-computed statistics") {
    const Aggregate agg = aggregate_of("demo", {1.0, 2.0, 3.0, 4.0});
    CHECK(agg.mean == doctest::Approx(2.5));
    CHECK(agg.std_dev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(agg.ci95 == doctest::Approx(1.96 * agg.std_dev / 2.0));
    CHECK(agg.ci99 == doctest::Approx(2.576 * agg.std_dev / 2.0));
    CHECK(agg.n == 4);

    const Aggregate empty = aggregate_of("none", {});
    CHECK(empty.n == 0);
    CHECK(empty.mean == 0.0);
}

TEST_CASE("ci half-width shrinks by 1/sqrt(2) when the sample count doubles") {
    // Duplicating a sample block keeps the spread identical, isolating the
    // 1/sqrt(N) factor.
    std::vector<double> base;
    CounterRng rng(17);
    for (int i = 0; i < 200; ++i) base.push_back(rng.next_double());
    std::vector<double> doubled = base;
    doubled.insert(doubled.end(), base.begin(), base.end());
    const Aggregate small = aggregate_of("a", base);
    const Aggregate large = aggregate_of("b", doubled);
    const double factor = large.ci95 / small.ci95;
    CHECK(factor > 0.65);
    CHECK(factor < 0.75);
}

TEST_CASE("interpolation sweep of an image with itself is flat") {
    const Pipeline pipeline(test::tiny_config());
    const Image x = test::noise_image(12, 12, 3, 3);
    const InterpolationSweep sweep = run_interpolation_sweep(x, x, 21, pipeline.oracle());
    REQUIRE(sweep.alphas.size() == 21);
    for (int i = 0; i < 21; ++i) {
        CHECK(sweep.sim_to_x1[i] == 1.0);
        CHECK(sweep.sim_to_x2[i] == 1.0);
        CHECK(sweep.sim_adjacent[i] == 1.0);
    }
}

TEST_CASE("interpolation sweep endpoints and monotonicity under the linear surrogate") {
    const Pipeline pipeline(test::tiny_config());
    const Image x1 = test::noise_image(12, 12, 3, 8);
    const Image x2 = test::noise_image(12, 12, 3, 9);
    const InterpolationSweep sweep = run_interpolation_sweep(x1, x2, 101, pipeline.oracle());
    CHECK(sweep.sim_to_x1.back() == 1.0);
    CHECK(sweep.sim_to_x2.front() == 1.0);
    CHECK(sweep.sim_adjacent.front() == 1.0);
    for (std::size_t i = 1; i < sweep.sim_to_x1.size(); ++i) {
        REQUIRE(sweep.sim_to_x1[i] >= sweep.sim_to_x1[i - 1]);
        REQUIRE(sweep.sim_to_x2[i] <= sweep.sim_to_x2[i - 1]);
    }
    CHECK_THROWS_AS(run_interpolation_sweep(x1, x2, 1, pipeline.oracle()), ContractError);
}

TEST_CASE("averaged sweep over identical images reduces to the flat sweep") {
    const Pipeline pipeline(test::tiny_config());
    LabeledDataset ds;
    ds.class_names = {"only"};
    ds.images = {test::noise_image(12, 12, 3, 4), test::noise_image(12, 12, 3, 4)};
    ds.labels = {0, 0};
    const ExperimentReport report = run_averaged_sweep(ds, 1, 11, pipeline.oracle(), 5);
    REQUIRE(report.csv_rows.size() == 11);
    for (const auto& row : report.csv_rows) {
        CHECK(row[1] == "1");  // mean_sim_x1
        CHECK(row[3] == "1");  // mean_sim_x2
    }
    const Aggregate* mid = report.find_aggregate("mid_alpha_sim_x1");
    REQUIRE(mid != nullptr);
    CHECK(mid->mean == doctest::Approx(1.0));
}

TEST_CASE("averaged sweep is deterministic for a fixed seed") {
    const Pipeline pipeline(test::tiny_config());
    const LabeledDataset ds = tiny_dataset(3, 4, 2);
    const ExperimentReport a = run_averaged_sweep(ds, 5, 21, pipeline.oracle(), 99);
    const ExperimentReport b = run_averaged_sweep(ds, 5, 21, pipeline.oracle(), 99);
    CHECK(a.csv_rows == b.csv_rows);
    const ExperimentReport c = run_averaged_sweep(ds, 5, 21, pipeline.oracle(), 100);
    CHECK(a.csv_rows != c.csv_rows);
}

TEST_CASE("evasion eval rows match the requested pair count") {
    const Pipeline pipeline(test::tiny_config(EmbedderKind::TanhSurrogate));
    const LabeledDataset ds = tiny_dataset(3, 4, 6);
    const ExperimentReport report = run_evasion_eval(ds, 10, 0.02, pipeline.oracle(), 7);
    CHECK(report.csv_rows.size() == 10);
    REQUIRE(report.find_aggregate("success_rate") != nullptr);
    REQUIRE(report.find_aggregate("ssim") != nullptr);
    // Carriers come from a different class than the source.
    for (const auto& row : report.csv_rows) {
        const std::size_t i = std::stoul(row[1]);
        const std::size_t j = std::stoul(row[2]);
        CHECK(ds.labels[i] != ds.labels[j]);
    }
}

TEST_CASE("coarser evasion grids cost structural similarity") {
    const Pipeline pipeline(test::tiny_config(EmbedderKind::TanhSurrogate));
    const LabeledDataset ds = tiny_dataset(4, 4, 21);
    const ExperimentReport coarse = run_evasion_eval(ds, 12, 0.1, pipeline.oracle(), 3);
    const ExperimentReport fine = run_evasion_eval(ds, 12, 0.01, pipeline.oracle(), 3);
    // A coarse grid rounds alpha* further from 1, blending in more carrier.
    CHECK(coarse.find_aggregate("ssim")->mean < fine.find_aggregate("ssim")->mean);
}

TEST_CASE("collision eval emits per-generation trajectories and a baseline") {
    const Pipeline pipeline(test::tiny_config());
    const LabeledDataset train = tiny_dataset(2, 3, 8);
    const LabeledDataset targets = subset_per_class(tiny_dataset(2, 2, 9), 0, 1);
    GeneticConfig cfg;
    cfg.population_start = 10;
    cfg.population_end = 3;
    cfg.iterations = 4;
    cfg.children_per_iter = 5;
    cfg.rng_seed = 3;
    const ExperimentReport report = run_collision_eval(train, targets, cfg, pipeline.oracle());
    CHECK(report.csv_rows.size() == targets.size() * (cfg.iterations + 1));
    REQUIRE(report.find_aggregate("final_fitness") != nullptr);
    REQUIRE(report.find_aggregate("baseline_max_similarity") != nullptr);
    CHECK(report.find_aggregate("final_fitness")->n == targets.size());
    REQUIRE(report.chart.series.size() == 2);
    CHECK(report.chart.series[0].y.size() == static_cast<std::size_t>(cfg.iterations) + 1);
}

TEST_CASE("extraction eval reports accuracy per class and overall") {
    const Pipeline pipeline(test::tiny_config());
    const LabeledDataset pool = tiny_dataset(2, 8, 10);
    const auto [train, validation] = split_by_parity(pool);
    const LabeledDataset test_set = subset_per_class(validation, 0, 2);
    ExtractionConfig cfg;
    cfg.epochs = 5;
    cfg.steps_per_epoch = 50;
    const ExperimentReport report = run_extraction_eval(train, test_set, cfg, pipeline.oracle());
    CHECK(report.csv_rows.size() == test_set.size());
    const Aggregate* acc = report.find_aggregate("accuracy");
    REQUIRE(acc != nullptr);
    CHECK(acc->n == test_set.size());
    CHECK(report.find_aggregate("accuracy_class_0") != nullptr);
    CHECK(report.find_aggregate("accuracy_class_1") != nullptr);
    CHECK(report.chart.bar_labels.back() == "overall");
}

TEST_CASE("single-class extraction is trivially perfect") {
    const Pipeline pipeline(test::tiny_config());
    const LabeledDataset pool = tiny_dataset(1, 8, 11);
    const auto [train, validation] = split_by_parity(pool);
    ExtractionConfig cfg;
    cfg.epochs = 2;
    cfg.steps_per_epoch = 20;
    const ExperimentReport report = run_extraction_eval(train, validation, cfg, pipeline.oracle());
    CHECK(report.find_aggregate("accuracy")->mean == doctest::Approx(1.0));
}

TEST_CASE("emit_report writes deterministic files") {
    test::TempDir dir("phlab_emit");
    const Pipeline pipeline(test::tiny_config());
    const LabeledDataset ds = tiny_dataset(3, 4, 12);
    const ExperimentReport report = run_averaged_sweep(ds, 3, 11, pipeline.oracle(), 1);

    emit_report(report, dir.path() / "a");
    emit_report(report, dir.path() / "b");
    CHECK(slurp(dir.path() / "a" / "averaged_sweep.csv") ==
          slurp(dir.path() / "b" / "averaged_sweep.csv"));
    CHECK(slurp(dir.path() / "a" / "averaged_sweep.svg") ==
          slurp(dir.path() / "b" / "averaged_sweep.svg"));

    const std::string csv = slurp(dir.path() / "a" / "averaged_sweep.csv");
    CHECK(data_row_count(csv) == 11);
    CHECK(csv.find("alpha,mean_sim_x1") != std::string::npos);
}

TEST_CASE("emit_report on an empty report yields a header-only csv") {
    test::TempDir dir("phlab_empty");
    ExperimentReport report;
    report.name = "empty";
    report.csv_header = {"a", "b"};
    emit_report(report, dir.path());
    CHECK(slurp(dir.path() / "empty.csv") == "a,b\n");
}

TEST_CASE("sweep svg contains three polyline series") {
    test::TempDir dir("phlab_svg");
    const Pipeline pipeline(test::tiny_config());
    const LabeledDataset ds = tiny_dataset(2, 3, 13);
    const ExperimentReport report = run_averaged_sweep(ds, 2, 11, pipeline.oracle(), 2);
    emit_report(report, dir.path());
    const std::string svg = slurp(dir.path() / "averaged_sweep.svg");
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 9;
    }
    CHECK(count == 3);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("unwritable output directory raises an io error") {
    ExperimentReport report;
    report.name = "x";
    report.csv_header = {"a"};
    CHECK_THROWS_AS(emit_report(report, "/proc/definitely_not_writable/phlab"), IoError);
}
