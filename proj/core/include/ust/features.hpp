#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ust/uncertain.hpp"

namespace ust {

/// One row per series: the k uncertain distances from that series to k
/// shapelets, in shapelet order, plus the series' class label.
struct UncertainFeatureMatrix {
    std::vector<UncertainVector> rows;
    std::vector<std::string> labels;
    std::size_t k = 0;

    std::size_t size() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }

    /// True if every distance carries zero uncertainty.
    bool is_certain() const noexcept {
        for (const auto& r : rows)
            for (const auto& v : r)
                if (v.uncertainty() != 0.0) return false;
        return true;
    }

    bool operator==(const UncertainFeatureMatrix&) const = default;
};

}  // namespace ust
