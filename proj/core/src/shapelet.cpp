#include "ust/shapelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "ust/entropy.hpp"
#include "ust/error.hpp"

namespace ust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Window scans. A window is abandoned once its partial squared sum strictly
// exceeds the best complete one; partial sums of non-negative terms never
// decrease under rounding, so abandoning never changes the minimum.

UncertainValue min_window_udissim(std::span<const UncertainValue> s, std::span<const UncertainValue> t) {
    const std::size_t len = s.size();
    double best_sq = kInf;
    double best_spread = kInf;
    for (std::size_t off = 0; off + len <= t.size(); ++off) {
        double sq = 0.0;
        double spread = 0.0;
        std::size_t i = 0;
        for (; i < len; ++i) {
            const double diff = s[i].best() - t[off + i].best();
            sq += diff * diff;
            if (sq > best_sq) break;
            spread += std::fabs(diff) * (s[i].uncertainty() + t[off + i].uncertainty());
        }
        if (i < len) continue;
        const double doubled = 2.0 * spread;
        if (sq < best_sq || (sq == best_sq && doubled < best_spread)) {
            best_sq = sq;
            best_spread = doubled;
        }
    }
    if (!std::isfinite(best_sq) || !std::isfinite(best_spread)) {
        throw NumericOverflowError("numeric overflow in subsequence distance");
    }
    return UncertainValue(best_sq, best_spread);
}

double min_window_sqeuclid(std::span<const double> s, std::span<const double> t) {
    const std::size_t len = s.size();
    double best = kInf;
    for (std::size_t off = 0; off + len <= t.size(); ++off) {
        double sq = 0.0;
        std::size_t i = 0;
        for (; i < len; ++i) {
            const double diff = s[i] - t[off + i];
            sq += diff * diff;
            if (sq > best) break;
        }
        if (i == len && sq < best) best = sq;
    }
    if (!std::isfinite(best)) throw NumericOverflowError("numeric overflow in subsequence distance");
    return best;
}

double best_of(double d) { return d; }
double best_of(const UncertainValue& d) { return d.best(); }
UncertainValue as_uncertain(double d) { return UncertainValue(d); }
UncertainValue as_uncertain(const UncertainValue& d) { return d; }

template <class Dist>
struct Labeled {
    Dist distance;
    std::size_t label;
};

template <class Dist>
struct Split {
    Dist threshold{};
    double gain = 0.0;
    std::size_t near = 0;
    std::size_t far = 0;
    double margin = 0.0;
};

// Sorts `items` in place. Every distinct observed distance is a candidate
// threshold; the first candidate wins unless a later one has a strictly
// higher gain, or an equal gain and a strictly larger margin.
template <class Dist>
Split<Dist> best_split_impl(std::vector<Labeled<Dist>>& items, std::size_t num_classes) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.distance < b.distance; });

    std::vector<std::size_t> totals(num_classes, 0);
    for (const auto& it : items) ++totals[it.label];
    std::vector<std::size_t> near(num_classes, 0);

    Split<Dist> best;
    bool have = false;
    const std::size_t n = items.size();
    for (std::size_t i = 0; i < n; ++i) {
        ++near[items[i].label];
        const bool last = i + 1 == n;
        if (!last && !(items[i].distance < items[i + 1].distance)) continue;

        const double gain = information_gain(totals, near);
        const double margin = last ? 0.0 : best_of(items[i + 1].distance) - best_of(items[i].distance);
        if (!have || gain > best.gain || (gain == best.gain && margin > best.margin)) {
            best = {items[i].distance, gain, i + 1, n - i - 1, margin};
            have = true;
        }
    }
    return best;
}

struct ScoredCandidate {
    std::size_t source = 0;
    std::size_t offset = 0;
    std::size_t length = 0;
    double quality = 0.0;
    double margin = 0.0;
    UncertainValue threshold;
};

bool precedes(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.quality != b.quality) return a.quality > b.quality;
    if (a.margin != b.margin) return a.margin > b.margin;
    if (a.length != b.length) return a.length < b.length;
    if (a.source != b.source) return a.source < b.source;
    return a.offset < b.offset;
}

bool overlaps(const ScoredCandidate& a, const ScoredCandidate& b) {
    return a.source == b.source && a.offset < b.offset + b.length && b.offset < a.offset + a.length;
}

// Scores all candidates drawn from one source series and returns its best
// (at most k) mutually non-overlapping ones, in selection order.
template <class Kernel>
std::vector<ScoredCandidate> score_source(const Kernel& kernel, std::size_t source,
                                          std::span<const std::size_t> labels, std::size_t num_classes,
                                          const ResolvedExtractionConfig& cfg, std::size_t m) {
    using Dist = typename Kernel::Distance;
    std::vector<ScoredCandidate> scored;
    std::vector<Labeled<Dist>> items(labels.size());
    for (std::size_t len = cfg.min_len; len <= cfg.max_len; ++len) {
        for (std::size_t off = 0; off + len <= m; off += cfg.stride) {
            for (std::size_t t = 0; t < labels.size(); ++t) {
                items[t] = {kernel.distance(source, off, len, t), labels[t]};
            }
            const auto split = best_split_impl(items, num_classes);
            scored.push_back({source, off, len, split.gain, split.margin, as_uncertain(split.threshold)});
        }
    }
    std::sort(scored.begin(), scored.end(), precedes);

    std::vector<ScoredCandidate> kept;
    for (const auto& c : scored) {
        if (kept.size() == cfg.k) break;
        const bool clash = std::any_of(kept.begin(), kept.end(), [&](const auto& k) { return overlaps(c, k); });
        if (!clash) kept.push_back(c);
    }
    return kept;
}

template <class Kernel>
std::vector<ScoredCandidate> select_shapelets(const Kernel& kernel, const UncertainDataset& train,
                                              const ExtractionConfig& config) {
    if (train.empty()) throw ConfigError("shapelet extraction needs a non-empty training set");
    if (train.classes().size() < 2) throw ConfigError("shapelet extraction needs at least two classes");
    const auto cfg = resolve(config, train.series_length(), train.classes().size());
    const auto labels = train.classes().encode(train.labels());

    std::vector<std::vector<ScoredCandidate>> per_source(train.size());
    detail::parallel_for(train.size(), cfg.threads, [&](std::size_t s) {
        per_source[s] = score_source(kernel, s, labels, train.classes().size(), cfg, train.series_length());
    });

    std::vector<ScoredCandidate> all;
    for (auto& v : per_source) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), precedes);
    if (all.size() > cfg.k) all.resize(cfg.k);
    return all;
}

struct UncertainKernel {
    using Distance = UncertainValue;
    const UncertainDataset& data;

    UncertainValue distance(std::size_t source, std::size_t offset, std::size_t len, std::size_t target) const {
        const auto s = std::span<const UncertainValue>(data[source].values).subspan(offset, len);
        return min_window_udissim(s, data[target].values);
    }
};

struct ClassicKernel {
    using Distance = double;
    std::vector<std::vector<double>> bests;

    explicit ClassicKernel(const UncertainDataset& d) {
        bests.reserve(d.size());
        for (const auto& s : d.instances()) {
            std::vector<double> row;
            row.reserve(s.size());
            for (const auto& v : s.values) row.push_back(v.best());
            bests.push_back(std::move(row));
        }
    }

    double distance(std::size_t source, std::size_t offset, std::size_t len, std::size_t target) const {
        const auto s = std::span<const double>(bests[source]).subspan(offset, len);
        return min_window_sqeuclid(s, bests[target]);
    }
};

std::vector<UncertainShapelet> materialise(const std::vector<ScoredCandidate>& selected, const UncertainDataset& d,
                                           bool drop_uncertainty) {
    std::vector<UncertainShapelet> out;
    out.reserve(selected.size());
    for (const auto& c : selected) {
        UncertainShapelet s;
        const auto& src = d[c.source].values;
        s.values.assign(src.begin() + static_cast<std::ptrdiff_t>(c.offset),
                        src.begin() + static_cast<std::ptrdiff_t>(c.offset + c.length));
        if (drop_uncertainty) {
            for (auto& v : s.values) v = UncertainValue(v.best());
        }
        s.source_instance = c.source;
        s.start_offset = c.offset;
        s.quality = c.quality;
        s.split_threshold = c.threshold;
        out.push_back(std::move(s));
    }
    return out;
}

void check_shapelets(const UncertainDataset& d, std::span<const UncertainShapelet> shapelets) {
    for (std::size_t j = 0; j < shapelets.size(); ++j) {
        const auto len = shapelets[j].length();
        if (len == 0) throw DimensionError("shapelet " + std::to_string(j) + " is empty");
        if (!d.empty() && len > d.series_length()) {
            throw DimensionError("shapelet " + std::to_string(j) + " has length " + std::to_string(len) +
                                 ", longer than the series length " + std::to_string(d.series_length()));
        }
    }
}

}  // namespace

UncertainValue subsequence_distance(std::span<const UncertainValue> subsequence,
                                    std::span<const UncertainValue> series) {
    if (subsequence.empty()) throw DimensionError("subsequence_distance: empty subsequence");
    if (subsequence.size() > series.size()) {
        throw DimensionError("subsequence_distance: subsequence length " + std::to_string(subsequence.size()) +
                             " exceeds series length " + std::to_string(series.size()));
    }
    return min_window_udissim(subsequence, series);
}

SplitEvaluation information_gain(std::span<const LabeledDistance> distances, const UncertainValue& threshold) {
    std::size_t num_classes = 0;
    for (const auto& d : distances) num_classes = std::max(num_classes, d.label + 1);
    std::vector<std::size_t> totals(num_classes, 0);
    std::vector<std::size_t> near(num_classes, 0);
    std::optional<UncertainValue> next;
    for (const auto& d : distances) {
        ++totals[d.label];
        if (d.distance <= threshold) {
            ++near[d.label];
        } else if (!next || d.distance < *next) {
            next = d.distance;
        }
    }
    SplitEvaluation out;
    out.threshold = threshold;
    out.gain = ust::information_gain(totals, near);
    for (auto c : near) out.near_count += c;
    out.far_count = distances.size() - out.near_count;
    out.margin = next ? next->best() - threshold.best() : 0.0;
    return out;
}

SplitEvaluation best_split(std::span<const LabeledDistance> distances) {
    if (distances.empty()) throw Error("best_split: no distances");
    std::size_t num_classes = 0;
    std::vector<Labeled<UncertainValue>> items;
    items.reserve(distances.size());
    for (const auto& d : distances) {
        items.push_back({d.distance, d.label});
        num_classes = std::max(num_classes, d.label + 1);
    }
    const auto s = best_split_impl(items, num_classes);
    return {s.threshold, s.gain, s.near, s.far, s.margin};
}

ResolvedExtractionConfig resolve(const ExtractionConfig& config, std::size_t series_length, std::size_t num_classes) {
    ResolvedExtractionConfig r;
    r.min_len = config.min_len;
    r.max_len = config.max_len.value_or(series_length);
    r.k = config.k.value_or(std::min<std::size_t>(10 * num_classes, 200));
    r.stride = config.stride;
    r.threads = config.threads;
    if (r.min_len < 1) throw ConfigError("min_len must be at least 1");
    if (r.min_len > series_length) {
        throw ConfigError("min_len " + std::to_string(r.min_len) + " exceeds the series length " +
                          std::to_string(series_length) + "; no candidate shapelet exists");
    }
    r.max_len = std::min(r.max_len, series_length);
    if (r.max_len < r.min_len) {
        throw ConfigError("max_len " + std::to_string(r.max_len) + " is below min_len " + std::to_string(r.min_len));
    }
    if (r.k < 1) throw ConfigError("k must be at least 1");
    if (r.stride < 1) throw ConfigError("stride must be at least 1");
    return r;
}

std::vector<UncertainShapelet> extract_shapelets(const UncertainDataset& train, const ExtractionConfig& config) {
    const UncertainKernel kernel{train};
    return materialise(select_shapelets(kernel, train, config), train, false);
}

std::vector<UncertainShapelet> extract_shapelets_classic(const UncertainDataset& train,
                                                         const ExtractionConfig& config) {
    const ClassicKernel kernel(train);
    return materialise(select_shapelets(kernel, train, config), train, true);
}

UncertainFeatureMatrix shapelet_transform(const UncertainDataset& d, std::span<const UncertainShapelet> shapelets,
                                          unsigned threads) {
    if (shapelets.empty()) throw ConfigError("shapelet transform needs at least one shapelet");
    check_shapelets(d, shapelets);
    UncertainFeatureMatrix out;
    out.k = shapelets.size();
    out.labels = d.labels();
    out.rows.resize(d.size());
    detail::parallel_for(d.size(), threads, [&](std::size_t i) {
        auto& row = out.rows[i];
        row.reserve(shapelets.size());
        for (const auto& s : shapelets) row.push_back(min_window_udissim(s.values, d[i].values));
    });
    return out;
}

UncertainFeatureMatrix shapelet_transform_classic(const UncertainDataset& d,
                                                  std::span<const UncertainShapelet> shapelets, unsigned threads) {
    if (shapelets.empty()) throw ConfigError("shapelet transform needs at least one shapelet");
    check_shapelets(d, shapelets);
    const ClassicKernel series(d);
    std::vector<std::vector<double>> shapes;
    for (const auto& s : shapelets) {
        std::vector<double> v;
        for (const auto& x : s.values) v.push_back(x.best());
        shapes.push_back(std::move(v));
    }
    UncertainFeatureMatrix out;
    out.k = shapelets.size();
    out.labels = d.labels();
    out.rows.resize(d.size());
    detail::parallel_for(d.size(), threads, [&](std::size_t i) {
        auto& row = out.rows[i];
        row.reserve(shapes.size());
        for (const auto& s : shapes) row.emplace_back(min_window_sqeuclid(s, series.bests[i]));
    });
    return out;
}

}  // namespace ust
