#include "ust/labels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ust/error.hpp"

namespace ust {

namespace {

std::optional<double> numeric_value(const std::string& s) {
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace

bool label_less(const std::string& a, const std::string& b) {
    const auto na = numeric_value(a);
    const auto nb = numeric_value(b);
    if (na && nb) {
        if (*na != *nb) return *na < *nb;
        return a < b;
    }
    if (na != nb && (na || nb)) return na.has_value();
    return a < b;
}

LabelIndex::LabelIndex(std::span<const std::string> labels) : labels_(labels.begin(), labels.end()) {
    std::sort(labels_.begin(), labels_.end(), label_less);
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

std::optional<std::size_t> LabelIndex::find(const std::string& label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label, label_less);
    if (it == labels_.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t LabelIndex::index(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw Error("unknown class label '" + label + "'");
}

std::vector<std::size_t> LabelIndex::encode(std::span<const std::string> labels) const {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(index(l));
    return out;
}

}  // namespace ust
