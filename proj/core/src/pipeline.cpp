#include "ust/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "text.hpp"
#include "ust/error.hpp"

namespace ust {

std::string_view to_string(Mode m) noexcept {
    switch (m) {
        case Mode::st: return "st";
        case Mode::ust_flat: return "ust-flat";
        case Mode::ust_gauss: return "ust-gauss";
    }
    return "unknown";
}

Mode mode_from_string(std::string_view name) {
    if (name == "st") return Mode::st;
    if (name == "ust-flat") return Mode::ust_flat;
    if (name == "ust-gauss") return Mode::ust_gauss;
    throw ConfigError("unknown mode '" + std::string(name) + "' (expected st, ust-flat or ust-gauss)");
}

Encoding encoding_for(Mode m) noexcept {
    switch (m) {
        case Mode::st: return Encoding::best_only;
        case Mode::ust_flat: return Encoding::flatten;
        case Mode::ust_gauss: return Encoding::gaussian;
    }
    return Encoding::flatten;
}

std::vector<UncertainShapelet> extract_for_mode(Mode mode, const UncertainDataset& train,
                                                const ExtractionConfig& config) {
    return mode == Mode::st ? extract_shapelets_classic(train, config) : extract_shapelets(train, config);
}

UncertainFeatureMatrix transform_for_mode(Mode mode, const UncertainDataset& d,
                                          const std::vector<UncertainShapelet>& shapelets, unsigned threads) {
    return mode == Mode::st ? shapelet_transform_classic(d, shapelets, threads)
                            : shapelet_transform(d, shapelets, threads);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PipelineResult run_pipeline_with_shapelets(const UncertainDataset& train, const UncertainDataset& test, Mode mode,
                                           const std::vector<UncertainShapelet>& shapelets,
                                           const PipelineConfig& config) {
    PipelineResult r;
    r.shapelets = shapelets;
    const unsigned threads = config.extraction.threads;

    auto t = Clock::now();
    const auto train_features = transform_for_mode(mode, train, shapelets, threads);
    const auto test_features = transform_for_mode(mode, test, shapelets, threads);
    r.timings.transform_s = seconds_since(t);

    t = Clock::now();
    r.model = Model::fit(train_features, encoding_for(mode), config.tree);
    r.timings.fit_s = seconds_since(t);

    t = Clock::now();
    r.predictions = r.model.predict(test_features);
    r.timings.predict_s = seconds_since(t);

    r.accuracy = evaluate(r.predictions, test_features.labels);
    return r;
}

PipelineResult run_pipeline(const UncertainDataset& train, const UncertainDataset& test, Mode mode,
                            const PipelineConfig& config) {
    const auto t = Clock::now();
    auto shapelets = extract_for_mode(mode, train, config.extraction);
    const double extract_s = seconds_since(t);
    auto r = run_pipeline_with_shapelets(train, test, mode, shapelets, config);
    r.timings.extract_s = extract_s;
    return r;
}

// ---------------------------------------------------------------------------

std::vector<DatasetFiles> discover_datasets(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError(dir.string(), "not a directory");

    std::vector<DatasetFiles> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory()) continue;
        DatasetFiles f;
        f.name = entry.path().filename().string();
        f.train = entry.path() / (f.name + "_TRAIN.tsv");
        f.test = entry.path() / (f.name + "_TEST.tsv");
        const auto train_unc = entry.path() / (f.name + "_TRAIN_UNC.tsv");
        const auto test_unc = entry.path() / (f.name + "_TEST_UNC.tsv");
        if (fs::exists(train_unc)) f.train_uncertainty = train_unc;
        if (fs::exists(test_unc)) f.test_uncertainty = test_unc;
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return out;
}

std::pair<UncertainDataset, UncertainDataset> prepare_dataset(const DatasetFiles& files,
                                                              const BenchmarkOptions& options) {
    auto train = load_dataset(files.train, files.train_uncertainty);
    auto test = load_dataset(files.test, files.test_uncertainty);
    if (train.series_length() != test.series_length()) {
        throw DimensionError("train and test series lengths differ (" + std::to_string(train.series_length()) +
                             " vs " + std::to_string(test.series_length()) + ")");
    }
    const bool already_uncertain = files.train_uncertainty || files.test_uncertainty;
    if (options.noise == NoiseMode::none || already_uncertain) return {std::move(train), std::move(test)};

    const NoiseSpec spec = options.noise == NoiseMode::fixed ? NoiseSpec::fixed(options.seed, options.sigma)
                                                             : NoiseSpec::from_dataset_std(options.seed);
    auto [noisy_train, noisy_test] = inject_noise_split(train, test, spec);
    return {std::move(noisy_train.data), std::move(noisy_test.data)};
}

BenchmarkReport run_benchmark(const BenchmarkOptions& options) {
    if (options.modes.empty()) throw ConfigError("benchmark needs at least one mode");
    const auto datasets = discover_datasets(options.data_dir);
    if (datasets.empty()) throw ConfigError("no datasets found under " + options.data_dir.string());

    BenchmarkReport report;
    for (const auto& files : datasets) {
        std::optional<std::pair<UncertainDataset, UncertainDataset>> data;
        std::string load_error;
        try {
            data = prepare_dataset(files, options);
        } catch (const std::exception& e) {
            load_error = e.what();
        }

        // ust-flat and ust-gauss share one uncertain extraction.
        std::map<bool, std::pair<std::vector<UncertainShapelet>, double>> extracted;
        for (Mode mode : options.modes) {
            BenchmarkRow row;
            row.dataset = files.name;
            row.mode = mode;
            row.seed = options.seed;
            if (!data) {
                row.error = load_error;
                report.rows.push_back(std::move(row));
                continue;
            }
            try {
                const bool classic = mode == Mode::st;
                auto it = extracted.find(classic);
                if (it == extracted.end()) {
                    const auto t = Clock::now();
                    auto shapelets = extract_for_mode(mode, data->first, options.pipeline.extraction);
                    it = extracted.emplace(classic, std::make_pair(std::move(shapelets), seconds_since(t))).first;
                }
                const auto result =
                    run_pipeline_with_shapelets(data->first, data->second, mode, it->second.first, options.pipeline);
                row.k = result.shapelets.size();
                row.accuracy = result.accuracy;
                row.timings = result.timings;
                row.timings.extract_s = it->second.second;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            report.rows.push_back(std::move(row));
        }
    }

    for (std::size_t i = 0; i < options.modes.size(); ++i) {
        for (std::size_t j = i + 1; j < options.modes.size(); ++j) {
            PairwiseTally tally{options.modes[i], options.modes[j]};
            for (const auto& files : datasets) {
                std::optional<double> a;
                std::optional<double> b;
                for (const auto& row : report.rows) {
                    if (row.dataset != files.name) continue;
                    if (row.mode == tally.a) a = row.accuracy;
                    if (row.mode == tally.b) b = row.accuracy;
                }
                if (!a || !b) {
                    ++tally.missing;
                } else if (*a > *b) {
                    ++tally.wins;
                } else if (*a < *b) {
                    ++tally.losses;
                } else {
                    ++tally.ties;
                }
            }
            report.tallies.push_back(tally);
        }
    }
    return report;
}

std::size_t BenchmarkReport::dataset_count() const {
    std::set<std::string> names;
    for (const auto& r : rows) names.insert(r.dataset);
    return names.size();
}

bool BenchmarkReport::all_failed() const {
    return std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.error.empty(); });
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", s);
    return buf;
}

}  // namespace

std::string report_csv(const BenchmarkReport& report, bool timings) {
    std::ostringstream out;
    out << "dataset,mode,seed,k,accuracy,extract_s,transform_s,fit_s,predict_s,error\n";
    for (const auto& r : report.rows) {
        out << csv_field(r.dataset) << ',' << to_string(r.mode) << ',' << r.seed << ',' << r.k << ',';
        if (r.accuracy) out << detail::format_real(*r.accuracy);
        out << ',';
        if (timings && r.error.empty()) {
            out << format_seconds(r.timings.extract_s) << ',' << format_seconds(r.timings.transform_s) << ','
                << format_seconds(r.timings.fit_s) << ',' << format_seconds(r.timings.predict_s) << ',';
        } else {
            out << ",,,,";
        }
        out << csv_field(r.error) << '\n';
    }
    return out.str();
}

std::string summary_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "mode_a,mode_b,wins,ties,losses,missing\n";
    for (const auto& t : report.tallies) {
        out << to_string(t.a) << ',' << to_string(t.b) << ',' << t.wins << ',' << t.ties << ',' << t.losses << ','
            << t.missing << '\n';
    }
    return out.str();
}

}  // namespace ust
