#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ust/classify.hpp"
#include "ust/series.hpp"
#include "ust/shapelet.hpp"

namespace ust {

/// st: classical shapelet transform on the best values (uncertainty ignored).
/// ust-flat / ust-gauss: uncertain shapelet transform with the flatten or
/// gaussian feature encoding.
enum class Mode { st, ust_flat, ust_gauss };

std::string_view to_string(Mode m) noexcept;
/// Accepts "st", "ust-flat", "ust-gauss". Throws ConfigError otherwise.
Mode mode_from_string(std::string_view name);
Encoding encoding_for(Mode m) noexcept;

struct PipelineConfig {
    ExtractionConfig extraction;
    TreeParams tree;
};

struct StageTimings {
    double extract_s = 0.0;
    double transform_s = 0.0;
    double fit_s = 0.0;
    double predict_s = 0.0;
};

/// Step 1. st runs the classical extractor on the bests.
std::vector<UncertainShapelet> extract_for_mode(Mode mode, const UncertainDataset& train,
                                                const ExtractionConfig& config);

/// Step 2. st runs the classical transform on the bests.
UncertainFeatureMatrix transform_for_mode(Mode mode, const UncertainDataset& d,
                                          const std::vector<UncertainShapelet>& shapelets, unsigned threads = 1);

struct PipelineResult {
    std::vector<UncertainShapelet> shapelets;
    Model model;
    std::vector<std::string> predictions;
    double accuracy = 0.0;
    StageTimings timings;
};

/// Runs extraction, transform, fit and predict in-process.
PipelineResult run_pipeline(const UncertainDataset& train, const UncertainDataset& test, Mode mode,
                            const PipelineConfig& config);

/// Same as run_pipeline but reuses shapelets extracted earlier for `mode`.
PipelineResult run_pipeline_with_shapelets(const UncertainDataset& train, const UncertainDataset& test, Mode mode,
                                           const std::vector<UncertainShapelet>& shapelets,
                                           const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Benchmark harness

enum class NoiseMode { dataset_std, fixed, none };

struct BenchmarkOptions {
    std::filesystem::path data_dir;
    std::vector<Mode> modes{Mode::st, Mode::ust_flat, Mode::ust_gauss};
    std::uint64_t seed = 0;
    NoiseMode noise = NoiseMode::dataset_std;
    double sigma = 0.0;
    PipelineConfig pipeline;
};

/// A dataset in UCR layout: <dir>/<name>/<name>_TRAIN.tsv and _TEST.tsv,
/// optionally with <name>_TRAIN_UNC.tsv / <name>_TEST_UNC.tsv.
struct DatasetFiles {
    std::string name;
    std::filesystem::path train;
    std::filesystem::path test;
    std::optional<std::filesystem::path> train_uncertainty;
    std::optional<std::filesystem::path> test_uncertainty;
};

/// Subdirectories of `dir` that hold a train/test pair, sorted by name.
/// Subdirectories missing either file are still listed so that the failure
/// is reported per dataset. Throws IoError if `dir` is not a directory.
std::vector<DatasetFiles> discover_datasets(const std::filesystem::path& dir);

struct BenchmarkRow {
    std::string dataset;
    Mode mode = Mode::st;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    std::optional<double> accuracy;
    StageTimings timings;
    /// Empty on success.
    std::string error;
};

/// Datasets on which mode `a` scored higher / equal / lower than mode `b`;
/// `missing` counts datasets where either run failed.
struct PairwiseTally {
    Mode a = Mode::st;
    Mode b = Mode::st;
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;
    std::size_t missing = 0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    std::vector<PairwiseTally> tallies;

    std::size_t dataset_count() const;
    /// True if no dataset completed any mode.
    bool all_failed() const;
};

/// Loads and (unless noise is disabled or uncertainty files are present)
/// noises each dataset with the master seed, then runs every mode. A failure
/// is recorded on that dataset's rows; the remaining datasets still run.
BenchmarkReport run_benchmark(const BenchmarkOptions& options);

/// Loads and noises one dataset exactly as run_benchmark does.
std::pair<UncertainDataset, UncertainDataset> prepare_dataset(const DatasetFiles& files,
                                                              const BenchmarkOptions& options);

/// Header: dataset,mode,seed,k,accuracy,extract_s,transform_s,fit_s,predict_s,error
/// With `timings` false the four timing fields are left empty, which makes
/// the output a pure function of the inputs and options.
std::string report_csv(const BenchmarkReport& report, bool timings = true);

/// Header: mode_a,mode_b,wins,ties,losses,missing
std::string summary_csv(const BenchmarkReport& report);

}  // namespace ust
