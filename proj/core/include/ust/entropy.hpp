#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ust {

/// Shannon entropy (bits) of a class histogram. Classes are visited in
/// index order, so equal histograms always give bitwise equal results. The
/// result is capped at log2 of the number of occupied classes.
inline double entropy(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    std::size_t occupied = 0;
    for (auto c : counts) {
        total += c;
        occupied += c > 0 ? 1 : 0;
    }
    if (occupied < 2) return 0.0;
    double h = 0.0;
    const double n = static_cast<double>(total);
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return std::min(h, std::log2(static_cast<double>(occupied)));
}

/// Entropy reduction from splitting `parent` into `near` and parent - near:
///
///     H(D) - |D1|/|D| H(D1) - |D2|/|D| H(D2)
///
/// clamped below at zero. Both spans are per-class counts of equal length.
inline double information_gain(std::span<const std::size_t> parent, std::span<const std::size_t> near) {
    std::vector<std::size_t> far(parent.size());
    std::size_t n = 0;
    std::size_t n1 = 0;
    for (std::size_t c = 0; c < parent.size(); ++c) {
        far[c] = parent[c] - near[c];
        n += parent[c];
        n1 += near[c];
    }
    if (n == 0) return 0.0;
    const double total = static_cast<double>(n);
    const double w1 = static_cast<double>(n1) / total;
    const double w2 = static_cast<double>(n - n1) / total;
    const double gain = entropy(parent) - w1 * entropy(near) - w2 * entropy(far);
    return std::max(gain, 0.0);
}

}  // namespace ust
