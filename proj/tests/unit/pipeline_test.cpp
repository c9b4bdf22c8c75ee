#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "ust/error.hpp"
#include "ust/pipeline.hpp"

namespace fs = std::filesystem;
using ust::Mode;

namespace {

ust::PipelineConfig small_config() {
    ust::PipelineConfig c;
    c.extraction.min_len = 3;
    c.extraction.max_len = 6;
    c.extraction.k = 6;
    return c;
}

void write_dataset(const fs::path& root, const std::string& name, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto train = ust::oracle::planted_motif(rng, 10, 16);
    const auto test = ust::oracle::planted_motif(rng, 8, 16);
    const auto dir = root / name;
    fs::create_directories(dir);
    ust::save_dataset(train, dir / (name + "_TRAIN.tsv"), dir / "train_unc.tmp");
    ust::save_dataset(test, dir / (name + "_TEST.tsv"), dir / "test_unc.tmp");
    fs::remove(dir / "train_unc.tmp");
    fs::remove(dir / "test_unc.tmp");
}

ust::BenchmarkOptions bench_options(const fs::path& dir) {
    ust::BenchmarkOptions o;
    o.data_dir = dir;
    o.seed = 3;
    o.pipeline = small_config();
    return o;
}

}  // namespace

TEST(Modes, Names) {
    for (auto m : {Mode::st, Mode::ust_flat, Mode::ust_gauss}) EXPECT_EQ(ust::mode_from_string(ust::to_string(m)), m);
    EXPECT_THROW(ust::mode_from_string("ust"), ust::ConfigError);
    EXPECT_EQ(ust::encoding_for(Mode::st), ust::Encoding::best_only);
    EXPECT_EQ(ust::encoding_for(Mode::ust_flat), ust::Encoding::flatten);
    EXPECT_EQ(ust::encoding_for(Mode::ust_gauss), ust::Encoding::gaussian);
}

TEST(Pipeline, ZeroUncertaintyFlattenMatchesClassic) {
    const auto train = ust::load_dataset(fs::path(UST_TEST_DATA_DIR) / "ucr/Chinatown/Chinatown_TRAIN.tsv");
    const auto test = ust::load_dataset(fs::path(UST_TEST_DATA_DIR) / "ucr/Chinatown/Chinatown_TEST.tsv");
    const auto config = small_config();
    const auto st = ust::run_pipeline(train, test, Mode::st, config);
    const auto flat = ust::run_pipeline(train, test, Mode::ust_flat, config);
    EXPECT_EQ(flat.predictions, st.predictions);
    EXPECT_EQ(flat.accuracy, st.accuracy);
    EXPECT_EQ(flat.shapelets, st.shapelets);
}

TEST(Pipeline, RandomCertainDataFlattenMatchesClassic) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        const auto train = ust::oracle::random_dataset(rng, 12, 14, 2, false);
        const auto test = ust::oracle::random_dataset(rng, 10, 14, 2, false);
        const auto st = ust::run_pipeline(train, test, Mode::st, small_config());
        const auto flat = ust::run_pipeline(train, test, Mode::ust_flat, small_config());
        EXPECT_EQ(flat.predictions, st.predictions) << trial;
    }
}

TEST(Pipeline, ResultIsSelfConsistent) {
    std::mt19937_64 rng(14);
    const auto train = ust::oracle::planted_motif(rng, 12, 20);
    const auto test = ust::oracle::planted_motif(rng, 10, 20);
    const auto r = ust::run_pipeline(train, test, Mode::ust_gauss, small_config());
    EXPECT_EQ(r.predictions.size(), test.size());
    EXPECT_EQ(r.accuracy, ust::evaluate(r.predictions, test.labels()));
    EXPECT_EQ(r.shapelets.size(), 6u);
    EXPECT_TRUE(r.model.gaussian_stats);
}

TEST(Benchmark, ShapeAndTallies) {
    ust::testing::TempDir dir;
    write_dataset(dir.path(), "alpha", 1);
    write_dataset(dir.path(), "beta", 2);
    const auto report = ust::run_benchmark(bench_options(dir.path()));
    ASSERT_EQ(report.rows.size(), 6u);
    ASSERT_EQ(report.tallies.size(), 3u);
    EXPECT_EQ(report.dataset_count(), 2u);
    EXPECT_FALSE(report.all_failed());
    for (const auto& r : report.rows) {
        EXPECT_TRUE(r.error.empty()) << r.error;
        ASSERT_TRUE(r.accuracy);
        EXPECT_GE(*r.accuracy, 0.0);
        EXPECT_LE(*r.accuracy, 1.0);
        EXPECT_EQ(r.seed, 3u);
        EXPECT_EQ(r.k, 6u);
    }
    for (const auto& t : report.tallies) EXPECT_EQ(t.wins + t.ties + t.losses + t.missing, 2u);

    const auto csv = ust::report_csv(report);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "dataset,mode,seed,k,accuracy,extract_s,transform_s,fit_s,predict_s,error");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
    const auto summary = ust::summary_csv(report);
    EXPECT_EQ(summary.substr(0, summary.find('\n')), "mode_a,mode_b,wins,ties,losses,missing");
    EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);
}

TEST(Benchmark, MatchesInProcessPipeline) {
    ust::testing::TempDir dir;
    write_dataset(dir.path(), "alpha", 5);
    const auto options = bench_options(dir.path());
    const auto report = ust::run_benchmark(options);
    const auto [train, test] = ust::prepare_dataset(ust::discover_datasets(dir.path()).front(), options);
    EXPECT_FALSE(train.is_certain());
    for (const auto& row : report.rows) {
        const auto r = ust::run_pipeline(train, test, row.mode, options.pipeline);
        EXPECT_EQ(*row.accuracy, r.accuracy) << ust::to_string(row.mode);
    }
}

TEST(Benchmark, DeterministicAcrossRunsAndThreads) {
    ust::testing::TempDir dir;
    write_dataset(dir.path(), "alpha", 1);
    write_dataset(dir.path(), "beta", 2);
    auto options = bench_options(dir.path());
    const auto first = ust::report_csv(ust::run_benchmark(options), false);
    EXPECT_EQ(ust::report_csv(ust::run_benchmark(options), false), first);
    options.pipeline.extraction.threads = 4;
    EXPECT_EQ(ust::report_csv(ust::run_benchmark(options), false), first);
    options.seed = 4;
    EXPECT_NE(ust::report_csv(ust::run_benchmark(options), false), first);
}

TEST(Benchmark, CorruptDatasetIsIsolated) {
    ust::testing::TempDir dir;
    write_dataset(dir.path(), "alpha", 1);
    write_dataset(dir.path(), "gamma", 2);
    fs::create_directories(dir / "beta");
    ust::testing::write_file(dir / "beta" / "beta_TRAIN.tsv", "1\t0\t1\n2\tnot-a-number\t0\n");
    ust::testing::write_file(dir / "beta" / "beta_TEST.tsv", "1\t0\t1\n");

    const auto report = ust::run_benchmark(bench_options(dir.path()));
    ASSERT_EQ(report.rows.size(), 9u);
    for (const auto& r : report.rows) {
        if (r.dataset == "beta") {
            EXPECT_FALSE(r.error.empty());
            EXPECT_FALSE(r.accuracy);
            EXPECT_NE(r.error.find("beta_TRAIN.tsv:2:2"), std::string::npos) << r.error;
        } else {
            EXPECT_TRUE(r.error.empty()) << r.error;
        }
    }
    for (const auto& t : report.tallies) EXPECT_EQ(t.missing, 1u);
    EXPECT_FALSE(report.all_failed());
}

TEST(Benchmark, AllFailed) {
    ust::testing::TempDir dir;
    fs::create_directories(dir / "empty");
    const auto report = ust::run_benchmark(bench_options(dir.path()));
    EXPECT_EQ(report.rows.size(), 3u);
    EXPECT_TRUE(report.all_failed());
}

TEST(Benchmark, NoDatasetsIsAConfigError) {
    ust::testing::TempDir dir;
    EXPECT_THROW(ust::run_benchmark(bench_options(dir.path())), ust::ConfigError);
    EXPECT_THROW(ust::run_benchmark(bench_options(dir / "missing")), ust::IoError);
}

TEST(Benchmark, UncertaintyFilesSkipNoise) {
    ust::testing::TempDir dir;
    std::mt19937_64 rng(3);
    const auto train = ust::oracle::random_dataset(rng, 6, 8, 2, true);
    const auto test = ust::oracle::random_dataset(rng, 4, 8, 2, true);
    fs::create_directories(dir / "u");
    ust::save_dataset(train, dir / "u" / "u_TRAIN.tsv", dir / "u" / "u_TRAIN_UNC.tsv");
    ust::save_dataset(test, dir / "u" / "u_TEST.tsv", dir / "u" / "u_TEST_UNC.tsv");
    const auto files = ust::discover_datasets(dir.path());
    ASSERT_EQ(files.size(), 1u);
    const auto [a, b] = ust::prepare_dataset(files.front(), bench_options(dir.path()));
    EXPECT_EQ(a, train);
    EXPECT_EQ(b, test);
}
