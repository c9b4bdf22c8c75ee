#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ust/labels.hpp"
#include "ust/uncertain.hpp"

namespace ust {

/// A chronological sequence of uncertain measurements plus its class label.
struct UncertainSeries {
    UncertainVector values;
    std::string label;

    std::size_t size() const noexcept { return values.size(); }
};

/// A labelled collection of equal-length uncertain series.
class UncertainDataset {
public:
    UncertainDataset() = default;

    /// Throws ust::Error if the instances differ in length, any series is
    /// empty, or any label is empty.
    explicit UncertainDataset(std::vector<UncertainSeries> instances);

    const std::vector<UncertainSeries>& instances() const noexcept { return instances_; }
    const UncertainSeries& operator[](std::size_t i) const { return instances_[i]; }
    std::size_t size() const noexcept { return instances_.size(); }
    bool empty() const noexcept { return instances_.empty(); }

    /// Common series length m (0 for an empty dataset).
    std::size_t series_length() const noexcept { return length_; }

    const LabelIndex& classes() const noexcept { return classes_; }
    std::vector<std::string> labels() const;

    /// True if every uncertainty in the dataset is exactly zero.
    bool is_certain() const noexcept;

    /// Same series and labels with every uncertainty dropped to zero.
    UncertainDataset bests_only() const;

    bool operator==(const UncertainDataset& other) const { return instances_ == other.instances_; }

private:
    std::vector<UncertainSeries> instances_;
    std::size_t length_ = 0;
    LabelIndex classes_;
};

inline bool operator==(const UncertainSeries& a, const UncertainSeries& b) {
    return a.label == b.label && a.values == b.values;
}

/// Reads a values file (TSV, one instance per line: label then m reals) and
/// optionally a matching uncertainty file (TSV, m non-negative reals per line,
/// no label). Without an uncertainty file every uncertainty is zero.
///
/// Throws ParseError naming file, line and column on malformed input, ragged
/// rows, or a shape mismatch between the two files.
UncertainDataset load_dataset(const std::filesystem::path& values_path,
                              const std::optional<std::filesystem::path>& uncertainty_path = std::nullopt);

/// Writes both files with 17 significant digits, so load_dataset recovers
/// the dataset bit for bit. Throws IoError naming the failing path.
void save_dataset(const UncertainDataset& d, const std::filesystem::path& values_path,
                  const std::filesystem::path& uncertainty_path);

/// Population standard deviation of all best values of all instances pooled.
double dataset_std(const UncertainDataset& d);

enum class NoiseScale { dataset_std, fixed };

struct NoiseSpec {
    std::uint64_t seed = 0;
    NoiseScale scale = NoiseScale::dataset_std;
    double fixed_sigma = 0.0;

    static NoiseSpec from_dataset_std(std::uint64_t seed) { return {seed, NoiseScale::dataset_std, 0.0}; }
    /// Throws ConfigError unless sigma > 0 and finite.
    static NoiseSpec fixed(std::uint64_t seed, double sigma);
};

struct NoisyDataset {
    UncertainDataset data;
    double sigma = 0.0;
    /// Set when sigma resolved to zero; data then equals the input.
    bool degenerate = false;
};

/// One standard-normal draw, a pure function of its four coordinates.
///
/// The coordinates are folded through the SplitMix64 finaliser into a 64-bit
/// key; two further SplitMix64 steps give uniforms u1 in (0, 1] and u2 in
/// [0, 1) with 53-bit resolution, and the draw is the cosine branch of the
/// Box-Muller transform, sqrt(-2 ln u1) cos(2 pi u2). This algorithm is part
/// of the file-level reproducibility contract and must not change.
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t instance, std::uint64_t index);

/// Adds zero-mean Gaussian noise to a certain dataset. Every value t becomes
/// t' ± |t' - t| with t' = t + sigma * standard_normal(seed, stream, i, j),
/// i the instance index and j the time index.
///
/// sigma is dataset_std(d) or the fixed scale from `spec`. Throws ConfigError
/// if the input already carries uncertainty.
NoisyDataset inject_noise(const UncertainDataset& d, const NoiseSpec& spec, std::uint64_t stream = 0);

/// Like inject_noise, with an explicit sigma (>= 0).
NoisyDataset inject_noise_with_sigma(const UncertainDataset& d, double sigma, std::uint64_t seed,
                                     std::uint64_t stream = 0);

/// Stream ids used when noising a train/test pair.
inline constexpr std::uint64_t kTrainStream = 0;
inline constexpr std::uint64_t kTestStream = 1;

/// Noises a train/test split. Sigma is resolved on the training split and
/// reused for the test split; the two splits use independent streams
/// (kTrainStream, kTestStream) of the same seed.
std::pair<NoisyDataset, NoisyDataset> inject_noise_split(const UncertainDataset& train,
                                                         const UncertainDataset& test,
                                                         const NoiseSpec& spec);

}  // namespace ust
