#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "temp_dir.hpp"
#include "ust/ust.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;
using ust::testing::read_file;
using ust::testing::TempDir;

namespace {

struct Run {
    int status = 0;
    std::string out;
    std::string err;
};

Run run(const TempDir& dir, const std::string& args) {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd =
        std::string("\"") + UST_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
    if (status != -1) status = WEXITSTATUS(status);
#endif
    return {status, read_file(out), read_file(err)};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

const fs::path kData = fs::path(UST_TEST_DATA_DIR) / "ucr";
const fs::path kTrain = kData / "Chinatown" / "Chinatown_TRAIN.tsv";
const fs::path kTest = kData / "Chinatown" / "Chinatown_TEST.tsv";

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Cli, UsageErrorsExitNonzero) {
    TempDir dir;
    EXPECT_NE(run(dir, "").status, 0);
    EXPECT_NE(run(dir, "frobnicate").status, 0);
    EXPECT_EQ(run(dir, "--help").status, 0);
}

TEST(Cli, AddNoiseIsDeterministic) {
    TempDir dir;
    const auto a = run(dir, "add-noise --values " + q(kTrain) + " --out " + q(dir / "a.tsv") + " --seed 7");
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_TRUE(fs::exists(dir / "a_UNC.tsv"));
    const auto b = run(dir, "add-noise --values " + q(kTrain) + " --out " + q(dir / "b.tsv") +
                                " --out-uncertainty " + q(dir / "bu.tsv") + " --seed 7");
    ASSERT_EQ(b.status, 0) << b.err;
    EXPECT_EQ(read_file(dir / "a.tsv"), read_file(dir / "b.tsv"));
    EXPECT_EQ(read_file(dir / "a_UNC.tsv"), read_file(dir / "bu.tsv"));

    const auto clean = ust::load_dataset(kTrain);
    const auto expected = ust::inject_noise(clean, ust::NoiseSpec::from_dataset_std(7));
    EXPECT_EQ(ust::load_dataset(dir / "a.tsv", dir / "a_UNC.tsv"), expected.data);
}

TEST(Cli, AddNoiseMissingInputNamesPath) {
    TempDir dir;
    const auto missing = dir / "nope.tsv";
    const auto r = run(dir, "add-noise --values " + q(missing) + " --out " + q(dir / "o.tsv"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find(missing.string()), std::string::npos) << r.err;
}

TEST(Cli, AddNoiseOnConstantDataWarns) {
    TempDir dir;
    ust::testing::write_file(dir / "c.tsv", "1\t2\t2\t2\n2\t2\t2\t2\n");
    const auto r = run(dir, "add-noise --values " + q(dir / "c.tsv") + " --out " + q(dir / "o.tsv"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_EQ(read_file(dir / "o_UNC.tsv"), "0\t0\t0\n0\t0\t0\n");
    EXPECT_EQ(ust::load_dataset(dir / "o.tsv"), ust::load_dataset(dir / "c.tsv"));
}

TEST(Cli, StepwiseRunMatchesInProcessPipeline) {
    TempDir dir;
    for (const std::string mode : {"st", "ust-flat", "ust-gauss"}) {
        SCOPED_TRACE(mode);
        ASSERT_EQ(run(dir, "add-noise --values " + q(kTrain) + " --out " + q(dir / "train.tsv") + " --seed 2").status,
                  0);
        ASSERT_EQ(run(dir, "add-noise --values " + q(kTest) + " --out " + q(dir / "test.tsv") + " --seed 2" +
                               " --stream 1 --sigma-from " + q(kTrain))
                      .status,
                  0);
        const std::string ext = " --min-len 4 --max-len 8 --k 5";
        auto r = run(dir, "extract --train " + q(dir / "train.tsv") + " --train-uncertainty " +
                              q(dir / "train_UNC.tsv") + " --mode " + mode + ext + " --out " + q(dir / "s.json"));
        ASSERT_EQ(r.status, 0) << r.err;
        r = run(dir, "transform --values " + q(dir / "train.tsv") + " --uncertainty " + q(dir / "train_UNC.tsv") +
                         " --shapelets " + q(dir / "s.json") + " --mode " + mode + " --out " + q(dir / "ftrain.csv"));
        ASSERT_EQ(r.status, 0) << r.err;
        r = run(dir, "transform --values " + q(dir / "test.tsv") + " --uncertainty " + q(dir / "test_UNC.tsv") +
                         " --shapelets " + q(dir / "s.json") + " --mode " + mode + " --out " + q(dir / "ftest.csv"));
        ASSERT_EQ(r.status, 0) << r.err;
        r = run(dir, "classify --train " + q(dir / "ftrain.csv") + " --test " + q(dir / "ftest.csv") + " --mode " +
                         mode + " --model-out " + q(dir / "m.json") + " --out " + q(dir / "pred.txt"));
        ASSERT_EQ(r.status, 0) << r.err;

        const auto [train, test] = ust::inject_noise_split(ust::load_dataset(kTrain), ust::load_dataset(kTest),
                                                           ust::NoiseSpec::from_dataset_std(2));
        ust::PipelineConfig config;
        config.extraction.min_len = 4;
        config.extraction.max_len = 8;
        config.extraction.k = 5;
        const auto expected = ust::run_pipeline(train.data, test.data, ust::mode_from_string(mode), config);
        EXPECT_EQ(lines(read_file(dir / "pred.txt")), expected.predictions);

        std::ostringstream acc;
        acc << "accuracy=" << expected.accuracy;
        EXPECT_NE(r.out.find(acc.str()), std::string::npos) << r.out;

        r = run(dir, "classify --model " + q(dir / "m.json") + " --test " + q(dir / "ftest.csv") + " --out " +
                         q(dir / "pred2.txt"));
        ASSERT_EQ(r.status, 0) << r.err;
        EXPECT_EQ(read_file(dir / "pred2.txt"), read_file(dir / "pred.txt"));
    }
}

TEST(Cli, TransformWithTooLongShapeletFails) {
    TempDir dir;
    ust::UncertainShapelet s;
    for (int i = 0; i < 30; ++i) s.values.emplace_back(i);
    ust::save_shapelets(std::vector{s}, dir / "s.json");
    const auto r = run(dir, "transform --values " + q(kTrain) + " --shapelets " + q(dir / "s.json") + " --out " +
                                q(dir / "f.csv"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("length"), std::string::npos) << r.err;
}

TEST(Cli, ClassifyStOnUncertainFeaturesWarns) {
    TempDir dir;
    ust::UncertainFeatureMatrix f;
    f.k = 1;
    f.rows = {{{1.0, 0.5}}, {{2.0, 0.5}}, {{3.0, 0.1}}, {{4.0, 0.1}}};
    f.labels = {"a", "a", "b", "b"};
    ust::save_features_csv(f, dir / "f.csv");
    const auto r = run(dir, "classify --train " + q(dir / "f.csv") + " --test " + q(dir / "f.csv") + " --mode st");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_NE(r.out.find("accuracy=1"), std::string::npos);
}

TEST(Cli, BenchmarkIsByteStable) {
    TempDir dir;
    fs::create_directories(dir / "data" / "Chinatown");
    fs::copy(kData / "Chinatown", dir / "data" / "Chinatown", fs::copy_options::recursive);
    const std::string args = "benchmark --data-dir " + q(dir / "data") + " --seed 1 --min-len 4 --max-len 8 --k 6";
    auto r = run(dir, args + " --no-timings --out " + q(dir / "r1.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    r = run(dir, args + " --no-timings --threads 4 --out " + q(dir / "r2.csv") + " --summary " + q(dir / "s2.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(read_file(dir / "r1.csv"), read_file(dir / "r2.csv"));
    EXPECT_EQ(read_file(dir / "r1.summary.csv"), read_file(dir / "s2.csv"));
    EXPECT_EQ(lines(read_file(dir / "r1.csv")).size(), 4u);

    r = run(dir, args + " --out " + q(dir / "r3.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto timed = lines(read_file(dir / "r3.csv"));
    EXPECT_EQ(timed[0], "dataset,mode,seed,k,accuracy,extract_s,transform_s,fit_s,predict_s,error");
    EXPECT_EQ(timed[1].find(",,,,"), std::string::npos);
}

TEST(Cli, BenchmarkFailsOnlyWhenEveryDatasetFails) {
    TempDir dir;
    fs::create_directories(dir / "data" / "broken");
    ust::testing::write_file(dir / "data" / "broken" / "broken_TRAIN.tsv", "x\n");
    const auto r = run(dir, "benchmark --data-dir " + q(dir / "data") + " --out " + q(dir / "r.csv"));
    EXPECT_NE(r.status, 0);
    EXPECT_TRUE(fs::exists(dir / "r.csv"));
    EXPECT_NE(r.err.find("broken"), std::string::npos);
}
