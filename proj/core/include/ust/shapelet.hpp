#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ust/features.hpp"
#include "ust/series.hpp"
#include "ust/uncertain.hpp"

namespace ust {

/// An uncertain distance paired with the class index of the series it was
/// measured against.
struct LabeledDistance {
    UncertainValue distance;
    std::size_t label = 0;
};

/// Quality of the split {d <= threshold} / {d > threshold} of a labelled
/// distance list, with <= taken under the uncertain order.
struct SplitEvaluation {
    UncertainValue threshold;
    double gain = 0.0;
    std::size_t near_count = 0;
    std::size_t far_count = 0;
    /// best(next larger distance) - best(threshold); 0 when nothing is larger.
    double margin = 0.0;
};

/// Distance from a subsequence to a series: the smallest udissim over all
/// windows of the series with the subsequence's length, under the uncertain
/// order. Throws DimensionError if the subsequence is empty or longer than
/// the series.
UncertainValue subsequence_distance(std::span<const UncertainValue> subsequence,
                                    std::span<const UncertainValue> series);

SplitEvaluation information_gain(std::span<const LabeledDistance> distances, const UncertainValue& threshold);

/// Scans every observed distance as a candidate threshold and returns the
/// split with the highest gain. Equal gains prefer the larger margin, then the
/// smaller threshold. Throws ust::Error on an empty input.
SplitEvaluation best_split(std::span<const LabeledDistance> distances);

struct ExtractionConfig {
    std::size_t min_len = 3;
    /// Defaults to the series length.
    std::optional<std::size_t> max_len;
    /// Defaults to min(10 * number of classes, 200).
    std::optional<std::size_t> k;
    std::size_t stride = 1;
    /// Worker threads for candidate scoring; 0 uses the hardware concurrency.
    /// Results do not depend on this value.
    unsigned threads = 1;
};

/// ExtractionConfig with defaults filled in and checked against a dataset.
struct ResolvedExtractionConfig {
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    std::size_t k = 0;
    std::size_t stride = 1;
    unsigned threads = 1;
};

/// Throws ConfigError if the configuration admits no candidate.
ResolvedExtractionConfig resolve(const ExtractionConfig& config, std::size_t series_length, std::size_t num_classes);

struct UncertainShapelet {
    UncertainVector values;
    std::size_t source_instance = 0;
    std::size_t start_offset = 0;
    /// Information gain of the best split, in bits.
    double quality = 0.0;
    UncertainValue split_threshold;

    std::size_t length() const noexcept { return values.size(); }

    bool operator==(const UncertainShapelet&) const = default;
};

/// Scores every subsequence of every training series (lengths min_len..max_len,
/// start offsets stepping by stride) by the information gain of its best
/// split, and keeps the k best after pruning overlapping candidates taken
/// from the same series.
///
/// The result is sorted by quality, descending. Ties are broken by larger
/// split margin, then shorter length, then smaller (source_instance,
/// start_offset), so the output does not depend on thread scheduling.
std::vector<UncertainShapelet> extract_shapelets(const UncertainDataset& train, const ExtractionConfig& config);

/// Classical shapelet extraction on the best values only, with the squared
/// Euclidean distance. Selection rules are those of extract_shapelets; the
/// returned shapelets carry zero uncertainty.
std::vector<UncertainShapelet> extract_shapelets_classic(const UncertainDataset& train,
                                                         const ExtractionConfig& config);

/// Row i, column j = subsequence_distance(shapelets[j].values, d[i].values).
UncertainFeatureMatrix shapelet_transform(const UncertainDataset& d, std::span<const UncertainShapelet> shapelets,
                                          unsigned threads = 1);

/// Classical transform: squared Euclidean distances on the best values only.
UncertainFeatureMatrix shapelet_transform_classic(const UncertainDataset& d,
                                                  std::span<const UncertainShapelet> shapelets,
                                                  unsigned threads = 1);

// JSON shapelet set, the hand-off between the extract and transform steps:
// [{source_instance, start_offset, length, quality,
//   threshold: {best, uncertainty}, values: [{best, uncertainty}, ...]}, ...]
std::string shapelets_to_json(std::span<const UncertainShapelet> shapelets);
/// Throws ParseError (with `source` as the file name) on malformed input.
std::vector<UncertainShapelet> shapelets_from_json(const std::string& text, const std::string& source = "<json>");
void save_shapelets(std::span<const UncertainShapelet> shapelets, const std::filesystem::path& path);
std::vector<UncertainShapelet> load_shapelets(const std::filesystem::path& path);

}  // namespace ust
