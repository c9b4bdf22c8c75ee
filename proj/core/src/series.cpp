#include "ust/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "text.hpp"
#include "ust/error.hpp"

namespace ust {

UncertainDataset::UncertainDataset(std::vector<UncertainSeries> instances)
    : instances_(std::move(instances)) {
    std::vector<std::string> labels;
    labels.reserve(instances_.size());
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        const auto& s = instances_[i];
        if (s.values.empty()) throw Error("instance " + std::to_string(i) + " is empty");
        if (s.label.empty()) throw Error("instance " + std::to_string(i) + " has no label");
        if (i == 0) {
            length_ = s.values.size();
        } else if (s.values.size() != length_) {
            throw DimensionError("instance " + std::to_string(i) + " has length " +
                                 std::to_string(s.values.size()) + ", expected " + std::to_string(length_));
        }
        labels.push_back(s.label);
    }
    classes_ = LabelIndex(labels);
}

std::vector<std::string> UncertainDataset::labels() const {
    std::vector<std::string> out;
    out.reserve(instances_.size());
    for (const auto& s : instances_) out.push_back(s.label);
    return out;
}

bool UncertainDataset::is_certain() const noexcept {
    for (const auto& s : instances_)
        for (const auto& v : s.values)
            if (v.uncertainty() != 0.0) return false;
    return true;
}

UncertainDataset UncertainDataset::bests_only() const {
    std::vector<UncertainSeries> out = instances_;
    for (auto& s : out)
        for (auto& v : s.values) v = UncertainValue(v.best());
    return UncertainDataset(std::move(out));
}

namespace {

struct RawTable {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers;
};

RawTable read_table(const std::filesystem::path& path, bool has_label, bool non_negative) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open file");

    const std::string name = path.string();
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim_eol(line);
        if (detail::trim(text).empty()) continue;

        const auto fields = detail::split(text, '\t');
        std::size_t first_value = 0;
        if (has_label) {
            const auto label = detail::trim(fields[0]);
            if (label.empty()) throw ParseError(name, line_no, 1, "missing class label");
            if (fields.size() < 2) throw ParseError(name, line_no, 2, "row has a label but no values");
            table.labels.emplace_back(label);
            first_value = 1;
        }

        std::vector<double> row;
        row.reserve(fields.size() - first_value);
        for (std::size_t c = first_value; c < fields.size(); ++c) {
            const auto token = detail::trim(fields[c]);
            const auto value = detail::parse_real(token);
            if (!value || !std::isfinite(*value)) {
                throw ParseError(name, line_no, c + 1, "expected a finite real, got '" + std::string(token) + "'");
            }
            if (non_negative && *value < 0.0) {
                throw ParseError(name, line_no, c + 1, "uncertainty must be non-negative, got " + std::string(token));
            }
            row.push_back(*value);
        }

        if (table.rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError(name, line_no, first_value + std::min(row.size(), width) + 1,
                             "ragged row: " + std::to_string(row.size()) + " values, expected " + std::to_string(width));
        }
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(line_no);
    }
    if (in.bad()) throw IoError(name, "read failure");
    if (table.rows.empty()) throw ParseError(name, 0, 0, "file contains no instances");
    return table;
}

}  // namespace

UncertainDataset load_dataset(const std::filesystem::path& values_path,
                              const std::optional<std::filesystem::path>& uncertainty_path) {
    RawTable values = read_table(values_path, true, false);
    std::optional<RawTable> deltas;
    if (uncertainty_path) {
        deltas = read_table(*uncertainty_path, false, true);
        const std::string name = uncertainty_path->string();
        if (deltas->rows.size() != values.rows.size()) {
            throw ParseError(name, 0, 0,
                             "shape mismatch: " + std::to_string(deltas->rows.size()) + " rows, values file has " +
                                 std::to_string(values.rows.size()));
        }
        if (deltas->rows.front().size() != values.rows.front().size()) {
            throw ParseError(name, deltas->line_numbers.front(),
                             std::min(deltas->rows.front().size(), values.rows.front().size()) + 1,
                             "shape mismatch: " + std::to_string(deltas->rows.front().size()) +
                                 " columns, values file has " + std::to_string(values.rows.front().size()));
        }
    }

    std::vector<UncertainSeries> instances;
    instances.reserve(values.rows.size());
    for (std::size_t i = 0; i < values.rows.size(); ++i) {
        UncertainSeries s;
        s.label = std::move(values.labels[i]);
        s.values.reserve(values.rows[i].size());
        for (std::size_t j = 0; j < values.rows[i].size(); ++j) {
            const double delta = deltas ? deltas->rows[i][j] : 0.0;
            s.values.emplace_back(values.rows[i][j], delta);
        }
        instances.push_back(std::move(s));
    }
    return UncertainDataset(std::move(instances));
}

void save_dataset(const UncertainDataset& d, const std::filesystem::path& values_path,
                  const std::filesystem::path& uncertainty_path) {
    std::ostringstream values;
    std::ostringstream deltas;
    for (const auto& s : d.instances()) {
        values << s.label;
        for (std::size_t j = 0; j < s.values.size(); ++j) {
            values << '\t' << detail::format_real(s.values[j].best());
            if (j > 0) deltas << '\t';
            deltas << detail::format_real(s.values[j].uncertainty());
        }
        values << '\n';
        deltas << '\n';
    }

    auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string(), "cannot open file for writing");
        out << text;
        out.flush();
        if (!out) throw IoError(path.string(), "write failure");
    };
    write(values_path, values.str());
    write(uncertainty_path, deltas.str());
}

double dataset_std(const UncertainDataset& d) {
    if (d.empty()) throw Error("dataset_std: empty dataset");
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : d.instances()) {
        for (const auto& v : s.values) sum += v.best();
        n += s.values.size();
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& s : d.instances())
        for (const auto& v : s.values) ss += (v.best() - mean) * (v.best() - mean);
    return std::sqrt(ss / static_cast<double>(n));
}

NoiseSpec NoiseSpec::fixed(std::uint64_t seed, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("fixed noise scale must be positive and finite, got " + std::to_string(sigma));
    }
    return {seed, NoiseScale::fixed, sigma};
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t instance, std::uint64_t index) {
    std::uint64_t key = splitmix64(seed);
    key = splitmix64(key ^ stream);
    key = splitmix64(key ^ instance);
    key = splitmix64(key ^ index);
    const std::uint64_t a = splitmix64(key);
    const std::uint64_t b = splitmix64(a);
    constexpr double kScale = 0x1.0p-53;
    const double u1 = static_cast<double>((a >> 11) + 1) * kScale;
    const double u2 = static_cast<double>(b >> 11) * kScale;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

NoisyDataset inject_noise_with_sigma(const UncertainDataset& d, double sigma, std::uint64_t seed,
                                     std::uint64_t stream) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("noise scale must be non-negative and finite, got " + std::to_string(sigma));
    }
    if (!d.is_certain()) throw ConfigError("noise injection expects a certain dataset (all uncertainties zero)");
    if (sigma == 0.0) return {d, 0.0, true};

    std::vector<UncertainSeries> out = d.instances();
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& values = out[i].values;
        for (std::size_t j = 0; j < values.size(); ++j) {
            const double clean = values[j].best();
            const double noisy = clean + sigma * standard_normal(seed, stream, i, j);
            // Record the perturbation actually realised after rounding, so
            // that uncertainty == |noisy - clean| holds bit for bit.
            values[j] = UncertainValue(noisy, noisy - clean);
        }
    }
    return {UncertainDataset(std::move(out)), sigma, false};
}

namespace {

double resolve_sigma(const UncertainDataset& d, const NoiseSpec& spec) {
    if (spec.scale == NoiseScale::fixed) {
        if (!(spec.fixed_sigma > 0.0)) throw ConfigError("fixed noise scale must be positive");
        return spec.fixed_sigma;
    }
    return dataset_std(d);
}

}  // namespace

NoisyDataset inject_noise(const UncertainDataset& d, const NoiseSpec& spec, std::uint64_t stream) {
    return inject_noise_with_sigma(d, resolve_sigma(d, spec), spec.seed, stream);
}

std::pair<NoisyDataset, NoisyDataset> inject_noise_split(const UncertainDataset& train,
                                                         const UncertainDataset& test,
                                                         const NoiseSpec& spec) {
    const double sigma = resolve_sigma(train, spec);
    return {inject_noise_with_sigma(train, sigma, spec.seed, kTrainStream),
            inject_noise_with_sigma(test, sigma, spec.seed, kTestStream)};
}

}  // namespace ust
