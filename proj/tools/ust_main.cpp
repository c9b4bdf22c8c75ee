// ust: command-line front end for uncertain shapelet transform experiments.
//
//   ust add-noise  --values D_TRAIN.tsv --out noisy.tsv --seed 7
//   ust extract    --train noisy.tsv --train-uncertainty noisy_UNC.tsv --mode ust-flat --out shapelets.json
//   ust transform  --values noisy.tsv --uncertainty noisy_UNC.tsv --shapelets shapelets.json --out train.csv
//   ust classify   --train train.csv --test test.csv --mode ust-flat
//   ust benchmark  --data-dir datasets/ --out report.csv

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ust/ust.hpp"

namespace fs = std::filesystem;

namespace {

struct ExtractionFlags {
    std::size_t min_len = 3;
    std::optional<std::size_t> max_len;
    std::optional<std::size_t> k;
    std::size_t stride = 1;
    unsigned threads = 1;

    void attach(CLI::App* app) {
        app->add_option("--min-len", min_len, "Shortest candidate shapelet")->capture_default_str();
        app->add_option("--max-len", max_len, "Longest candidate shapelet (default: series length)");
        app->add_option("--k", k, "Number of shapelets (default: min(10 * classes, 200))");
        app->add_option("--stride", stride, "Step between candidate start offsets")->capture_default_str();
        app->add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();
    }

    ust::ExtractionConfig config() const { return {min_len, max_len, k, stride, threads}; }
};

struct TreeFlags {
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_leaf = 1;

    void attach(CLI::App* app) {
        app->add_option("--max-depth", max_depth, "Tree depth limit (default: unlimited)");
        app->add_option("--min-samples-leaf", min_samples_leaf, "Minimum rows per leaf")->capture_default_str();
    }

    ust::TreeParams params() const { return {max_depth, min_samples_leaf}; }
};

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

fs::path default_uncertainty_path(const fs::path& values) {
    fs::path out = values;
    out.replace_filename(values.stem().string() + "_UNC" + values.extension().string());
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ust::IoError(path.string(), "cannot open file for writing");
    out << text;
    out.flush();
    if (!out) throw ust::IoError(path.string(), "write failure");
}

std::optional<fs::path> optional_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

void require_file(const std::string& path) {
    if (!path.empty() && !fs::exists(path)) throw ust::IoError(path, "no such file");
}

// ---------------------------------------------------------------------------

struct AddNoiseOptions {
    std::string values;
    std::string out;
    std::string out_uncertainty;
    std::string sigma_from;
    std::optional<double> sigma;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

int cmd_add_noise(const AddNoiseOptions& o) {
    require_file(o.values);
    require_file(o.sigma_from);
    const auto data = ust::load_dataset(o.values);

    double sigma = 0.0;
    if (o.sigma) {
        sigma = ust::NoiseSpec::fixed(o.seed, *o.sigma).fixed_sigma;
    } else if (!o.sigma_from.empty()) {
        sigma = ust::dataset_std(ust::load_dataset(o.sigma_from));
    } else {
        sigma = ust::dataset_std(data);
    }

    const auto noisy = ust::inject_noise_with_sigma(data, sigma, o.seed, o.stream);
    if (noisy.degenerate) warn("noise scale is zero; output carries no uncertainty");

    const fs::path unc = o.out_uncertainty.empty() ? default_uncertainty_path(o.out) : fs::path(o.out_uncertainty);
    ust::save_dataset(noisy.data, o.out, unc);
    std::cout << "sigma=" << noisy.sigma << " values=" << o.out << " uncertainty=" << unc.string() << '\n';
    return 0;
}

struct ExtractOptions {
    std::string train;
    std::string train_uncertainty;
    std::string mode = "ust-flat";
    std::string out;
    ExtractionFlags extraction;
};

int cmd_extract(const ExtractOptions& o) {
    require_file(o.train);
    require_file(o.train_uncertainty);
    const auto mode = ust::mode_from_string(o.mode);
    const auto train = ust::load_dataset(o.train, optional_path(o.train_uncertainty));
    if (mode == ust::Mode::st && !train.is_certain()) warn("mode st ignores uncertainties; using best values");

    const auto shapelets = ust::extract_for_mode(mode, train, o.extraction.config());
    ust::save_shapelets(shapelets, o.out);
    std::cout << "extracted " << shapelets.size() << " shapelets -> " << o.out << '\n';
    return 0;
}

struct TransformOptions {
    std::string values;
    std::string uncertainty;
    std::string shapelets;
    std::string mode = "ust-flat";
    std::string out;
    unsigned threads = 1;
};

int cmd_transform(const TransformOptions& o) {
    require_file(o.values);
    require_file(o.uncertainty);
    require_file(o.shapelets);
    const auto mode = ust::mode_from_string(o.mode);
    const auto data = ust::load_dataset(o.values, optional_path(o.uncertainty));
    if (mode == ust::Mode::st && !data.is_certain()) warn("mode st ignores uncertainties; using best values");

    const auto shapelets = ust::load_shapelets(o.shapelets);
    const auto features = ust::transform_for_mode(mode, data, shapelets, o.threads);
    ust::save_features_csv(features, o.out);
    std::cout << "transformed " << features.size() << " series x " << features.k << " shapelets -> " << o.out
              << '\n';
    return 0;
}

struct ClassifyOptions {
    std::string train;
    std::string test;
    std::string model;
    std::string mode = "ust-flat";
    std::string model_out;
    std::string predictions_out;
    TreeFlags tree;
};

int cmd_classify(const ClassifyOptions& o) {
    require_file(o.train);
    require_file(o.test);
    require_file(o.model);
    if (o.train.empty() == o.model.empty()) throw ust::ConfigError("give exactly one of --train or --model");

    ust::Model model;
    if (!o.model.empty()) {
        model = ust::Model::load(o.model);
    } else {
        const auto mode = ust::mode_from_string(o.mode);
        const auto train = ust::load_features_csv(o.train);
        if (mode == ust::Mode::st && !train.is_certain()) warn("mode st ignores uncertainties; using best values");
        model = ust::Model::fit(train, ust::encoding_for(mode), o.tree.params());
    }
    if (!o.model_out.empty()) model.save(o.model_out);

    const auto test = ust::load_features_csv(o.test);
    const auto predictions = model.predict(test);
    if (!o.predictions_out.empty()) {
        std::ostringstream text;
        for (const auto& p : predictions) text << p << '\n';
        write_text(o.predictions_out, text.str());
    }
    std::cout << "accuracy=" << ust::evaluate(predictions, test.labels) << '\n';
    return 0;
}

struct BenchmarkFlags {
    std::string data_dir;
    std::string out;
    std::string summary;
    std::vector<std::string> modes{"st", "ust-flat", "ust-gauss"};
    std::uint64_t seed = 0;
    std::string noise = "dataset-std";
    double sigma = 0.0;
    bool no_timings = false;
    ExtractionFlags extraction;
    TreeFlags tree;
};

int cmd_benchmark(const BenchmarkFlags& o) {
    ust::BenchmarkOptions options;
    options.data_dir = o.data_dir;
    options.modes.clear();
    for (const auto& m : o.modes) options.modes.push_back(ust::mode_from_string(m));
    options.seed = o.seed;
    if (o.noise == "dataset-std") {
        options.noise = ust::NoiseMode::dataset_std;
    } else if (o.noise == "fixed") {
        options.noise = ust::NoiseMode::fixed;
        options.sigma = ust::NoiseSpec::fixed(o.seed, o.sigma).fixed_sigma;
    } else if (o.noise == "none") {
        options.noise = ust::NoiseMode::none;
    } else {
        throw ust::ConfigError("unknown noise mode '" + o.noise + "' (expected dataset-std, fixed or none)");
    }
    options.pipeline.extraction = o.extraction.config();
    options.pipeline.tree = o.tree.params();

    const auto report = ust::run_benchmark(options);
    write_text(o.out, ust::report_csv(report, !o.no_timings));
    const fs::path summary = o.summary.empty() ? fs::path(o.out).replace_extension(".summary.csv") : fs::path(o.summary);
    write_text(summary, ust::summary_csv(report));

    for (const auto& row : report.rows) {
        if (!row.error.empty()) std::cerr << "error: " << row.dataset << " [" << ust::to_string(row.mode) << "]: "
                                          << row.error << '\n';
    }
    std::cout << ust::summary_csv(report);
    return report.all_failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uncertain shapelet transform for uncertain time-series classification"};
    app.require_subcommand(1);

    AddNoiseOptions noise;
    auto* add_noise = app.add_subcommand("add-noise", "Inject Gaussian measurement noise into a certain dataset");
    add_noise->add_option("--values", noise.values, "Certain values file (TSV)")->required();
    add_noise->add_option("--out", noise.out, "Output values file")->required();
    add_noise->add_option("--out-uncertainty", noise.out_uncertainty,
                          "Output uncertainty file (default: <out stem>_UNC<ext>)");
    add_noise->add_option("--seed", noise.seed, "Master seed")->capture_default_str();
    add_noise->add_option("--stream", noise.stream, "Noise stream id (0 train, 1 test)")->capture_default_str();
    auto* sigma_opt = add_noise->add_option("--sigma", noise.sigma, "Fixed noise standard deviation");
    add_noise->add_option("--sigma-from", noise.sigma_from, "Take sigma as the pooled std of this dataset")
        ->excludes(sigma_opt);

    ExtractOptions extract;
    auto* extract_cmd = app.add_subcommand("extract", "Extract the top-k shapelets of a training set");
    extract_cmd->add_option("--train", extract.train, "Training values file (TSV)")->required();
    extract_cmd->add_option("--train-uncertainty", extract.train_uncertainty, "Training uncertainty file (TSV)");
    extract_cmd->add_option("--mode", extract.mode, "st, ust-flat or ust-gauss")->capture_default_str();
    extract_cmd->add_option("--out", extract.out, "Output shapelet JSON")->required();
    extract.extraction.attach(extract_cmd);

    TransformOptions transform;
    auto* transform_cmd = app.add_subcommand("transform", "Compute shapelet distance features");
    transform_cmd->add_option("--values", transform.values, "Values file (TSV)")->required();
    transform_cmd->add_option("--uncertainty", transform.uncertainty, "Uncertainty file (TSV)");
    transform_cmd->add_option("--shapelets", transform.shapelets, "Shapelet JSON from extract")->required();
    transform_cmd->add_option("--mode", transform.mode, "st, ust-flat or ust-gauss")->capture_default_str();
    transform_cmd->add_option("--out", transform.out, "Output feature CSV")->required();
    transform_cmd->add_option("--threads", transform.threads, "Worker threads, 0 = all cores")->capture_default_str();

    ClassifyOptions classify;
    auto* classify_cmd = app.add_subcommand("classify", "Train a decision tree on features and score a test set");
    classify_cmd->add_option("--train", classify.train, "Training feature CSV");
    classify_cmd->add_option("--model", classify.model, "Previously saved model JSON (instead of --train)");
    classify_cmd->add_option("--test", classify.test, "Test feature CSV")->required();
    classify_cmd->add_option("--mode", classify.mode, "st, ust-flat or ust-gauss")->capture_default_str();
    classify_cmd->add_option("--model-out", classify.model_out, "Write the fitted model JSON here");
    classify_cmd->add_option("--out,--predictions-out", classify.predictions_out,
                             "Write one predicted label per line here");
    classify.tree.attach(classify_cmd);

    BenchmarkFlags bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "Run every mode on a directory of UCR-style datasets");
    bench_cmd->add_option("--data-dir", bench.data_dir, "Directory of <name>/<name>_{TRAIN,TEST}.tsv")->required();
    bench_cmd->add_option("--out", bench.out, "Report CSV")->required();
    bench_cmd->add_option("--summary", bench.summary, "Win/tie/loss CSV (default: <out>.summary.csv)");
    bench_cmd->add_option("--modes", bench.modes, "Modes to run")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--mode", bench.modes, "Alias of --modes")->delimiter(',');
    bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--noise", bench.noise, "dataset-std, fixed or none")->capture_default_str();
    bench_cmd->add_option("--sigma", bench.sigma, "Noise std for --noise fixed");
    bench_cmd->add_flag("--no-timings", bench.no_timings, "Leave timing columns empty (byte-stable report)");
    bench.extraction.attach(bench_cmd);
    bench.tree.attach(bench_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (add_noise->parsed()) return cmd_add_noise(noise);
        if (extract_cmd->parsed()) return cmd_extract(extract);
        if (transform_cmd->parsed()) return cmd_transform(transform);
        if (classify_cmd->parsed()) return cmd_classify(classify);
        if (bench_cmd->parsed()) return cmd_benchmark(bench);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
