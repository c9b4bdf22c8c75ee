#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ust {

/// Class labels are opaque tokens ("1", "-1", "walk"). The canonical order
/// puts numeric tokens first, ordered by value, then the remaining tokens in
/// lexicographic byte order. Numeric ties (e.g. "1" and "1.0") fall back to
/// byte order so the order stays strict.
bool label_less(const std::string& a, const std::string& b);

/// Maps the distinct labels of a dataset onto dense indices 0..size()-1 in
/// canonical order. Index 0 is the canonically smallest label.
class LabelIndex {
public:
    LabelIndex() = default;
    explicit LabelIndex(std::span<const std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t index) const { return labels_.at(index); }

    std::optional<std::size_t> find(const std::string& label) const;
    /// Throws ust::Error for a label not seen at construction.
    std::size_t index(const std::string& label) const;

    std::vector<std::size_t> encode(std::span<const std::string> labels) const;

private:
    std::vector<std::string> labels_;
};

}  // namespace ust
