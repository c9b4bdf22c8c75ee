#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ust/features.hpp"
#include "ust/labels.hpp"

namespace ust {

/// How an uncertain feature matrix is turned into plain reals.
enum class Encoding {
    best_only,  ///< k columns: the best values; uncertainty discarded (classical ST).
    flatten,    ///< 2k columns: bests, then uncertainties.
    gaussian,   ///< k columns: density of each best under a per-column normal law.
};

std::string_view to_string(Encoding e) noexcept;
/// Throws ConfigError for an unknown name.
Encoding encoding_from_string(std::string_view name);

struct EncodedMatrix {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    Encoding encoding = Encoding::flatten;

    std::size_t size() const noexcept { return rows.size(); }
    std::size_t width() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

EncodedMatrix encode_best_only(const UncertainFeatureMatrix& f);

/// row = [best_1 .. best_k, delta_1 .. delta_k]
EncodedMatrix encode_flatten(const UncertainFeatureMatrix& f);

/// Inverse of encode_flatten. Throws DimensionError on an odd row width.
UncertainFeatureMatrix decode_flatten(const EncodedMatrix& e);

/// Per-column extremes of the training bests.
struct GaussianEncodingStats {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t size() const noexcept { return min.size(); }
    double mean(std::size_t j) const { return 0.5 * (min.at(j) + max.at(j)); }

    bool operator==(const GaussianEncodingStats&) const = default;
};

/// Throws ust::Error on an empty matrix.
GaussianEncodingStats fit_gaussian_stats(const UncertainFeatureMatrix& train);

/// Normal density with standard deviation 1/sqrt(2 pi), which reduces to
/// exp(-pi (x - mean)^2): 1 at the mean, symmetric around it. Results that
/// would underflow to zero are held at the smallest positive double.
double gaussian_score(double x, double mean);

/// Entry (i, j) = gaussian_score(best_ij, stats.mean(j)). Uncertainties are
/// not used. Values outside [min_j, max_j] are encoded as is.
EncodedMatrix encode_gaussian(const UncertainFeatureMatrix& f, const GaussianEncodingStats& stats);

struct TreeParams {
    /// Unlimited when empty. A depth of 0 gives a single leaf.
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_leaf = 1;

    bool operator==(const TreeParams&) const = default;
};

/// Binary CART classifier with entropy (information gain) splits.
///
/// Candidate thresholds are midpoints between consecutive distinct values of
/// a feature; rows with value <= threshold go left. Among equal gains the
/// lowest feature index and then the lowest threshold win. A node becomes a
/// leaf when it is pure, at max_depth, or when no split leaves
/// min_samples_leaf rows on both sides. Leaves predict the majority class;
/// ties go to the canonically smallest label.
class DecisionTree {
public:
    /// Throws ust::Error for an empty matrix or rows of differing width.
    static DecisionTree fit(const EncodedMatrix& train, const TreeParams& params = {});

    /// Throws DimensionError if the row width differs from num_features().
    const std::string& predict_one(std::span<const double> row) const;
    std::vector<std::string> predict(const EncodedMatrix& e) const;

    std::size_t num_features() const noexcept { return num_features_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t depth() const;
    const LabelIndex& classes() const noexcept { return classes_; }
    const TreeParams& params() const noexcept { return params_; }

    /// Nested {feature, threshold, left, right} / {leaf, distribution} form.
    std::string to_json() const;
    static DecisionTree from_json(const std::string& text);

private:
    struct Node {
        // Internal nodes have feature >= 0; leaves have feature == -1.
        int feature = -1;
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        std::size_t label = 0;
        std::vector<std::size_t> distribution;
    };

    friend class TreeBuilder;
    friend struct TreeJson;

    std::vector<Node> nodes_;
    LabelIndex classes_;
    std::size_t num_features_ = 0;
    TreeParams params_;
};

/// Fraction of positions where prediction and truth agree. Throws
/// DimensionError on a length mismatch and ust::Error on empty input.
double evaluate(std::span<const std::string> predictions, std::span<const std::string> truth);

/// A fitted tree together with the encoding (and its training statistics)
/// needed to apply it to fresh feature matrices.
struct Model {
    Encoding encoding = Encoding::flatten;
    std::optional<GaussianEncodingStats> gaussian_stats;
    DecisionTree tree;

    static Model fit(const UncertainFeatureMatrix& train, Encoding encoding, const TreeParams& params = {});
    EncodedMatrix encode(const UncertainFeatureMatrix& f) const;
    std::vector<std::string> predict(const UncertainFeatureMatrix& f) const;

    std::string to_json() const;
    static Model from_json(const std::string& text, const std::string& source = "<json>");
    void save(const std::filesystem::path& path) const;
    static Model load(const std::filesystem::path& path);
};

/// Feature matrix CSV: header `label,f1,...,f2k`, one row per series holding
/// the k bests followed by the k uncertainties, 17 significant digits.
void save_features_csv(const UncertainFeatureMatrix& f, const std::filesystem::path& path);
/// Throws ParseError naming file, line and column on malformed input.
UncertainFeatureMatrix load_features_csv(const std::filesystem::path& path);

}  // namespace ust
