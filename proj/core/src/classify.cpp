#include "ust/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "text.hpp"
#include "ust/entropy.hpp"
#include "ust/error.hpp"

namespace ust {

using nlohmann::json;

std::string_view to_string(Encoding e) noexcept {
    switch (e) {
        case Encoding::best_only: return "best_only";
        case Encoding::flatten: return "flatten";
        case Encoding::gaussian: return "gaussian";
    }
    return "unknown";
}

Encoding encoding_from_string(std::string_view name) {
    if (name == "best_only") return Encoding::best_only;
    if (name == "flatten") return Encoding::flatten;
    if (name == "gaussian") return Encoding::gaussian;
    throw ConfigError("unknown encoding '" + std::string(name) + "'");
}

EncodedMatrix encode_best_only(const UncertainFeatureMatrix& f) {
    EncodedMatrix out{{}, f.labels, Encoding::best_only};
    out.rows.reserve(f.size());
    for (const auto& r : f.rows) {
        std::vector<double> row;
        row.reserve(r.size());
        for (const auto& v : r) row.push_back(v.best());
        out.rows.push_back(std::move(row));
    }
    return out;
}

EncodedMatrix encode_flatten(const UncertainFeatureMatrix& f) {
    EncodedMatrix out{{}, f.labels, Encoding::flatten};
    out.rows.reserve(f.size());
    for (const auto& r : f.rows) {
        std::vector<double> row(2 * r.size());
        for (std::size_t j = 0; j < r.size(); ++j) {
            row[j] = r[j].best();
            row[r.size() + j] = r[j].uncertainty();
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

UncertainFeatureMatrix decode_flatten(const EncodedMatrix& e) {
    UncertainFeatureMatrix out;
    out.labels = e.labels;
    out.k = e.width() / 2;
    for (const auto& r : e.rows) {
        if (r.size() % 2 != 0 || r.size() / 2 != out.k) {
            throw DimensionError("flattened row of width " + std::to_string(r.size()) + ", expected " +
                                 std::to_string(2 * out.k));
        }
        UncertainVector row;
        row.reserve(out.k);
        for (std::size_t j = 0; j < out.k; ++j) row.emplace_back(r[j], r[out.k + j]);
        out.rows.push_back(std::move(row));
    }
    return out;
}

GaussianEncodingStats fit_gaussian_stats(const UncertainFeatureMatrix& train) {
    if (train.empty()) throw Error("fit_gaussian_stats: empty training matrix");
    GaussianEncodingStats stats;
    stats.min.assign(train.k, std::numeric_limits<double>::infinity());
    stats.max.assign(train.k, -std::numeric_limits<double>::infinity());
    for (const auto& r : train.rows) {
        if (r.size() != train.k) throw DimensionError("feature row width differs from k");
        for (std::size_t j = 0; j < train.k; ++j) {
            stats.min[j] = std::min(stats.min[j], r[j].best());
            stats.max[j] = std::max(stats.max[j], r[j].best());
        }
    }
    return stats;
}

double gaussian_score(double x, double mean) {
    const double d = x - mean;
    return std::max(std::exp(-std::numbers::pi * d * d), std::numeric_limits<double>::denorm_min());
}

EncodedMatrix encode_gaussian(const UncertainFeatureMatrix& f, const GaussianEncodingStats& stats) {
    if (stats.size() != f.k) {
        throw DimensionError("gaussian stats cover " + std::to_string(stats.size()) + " columns, matrix has " +
                             std::to_string(f.k));
    }
    EncodedMatrix out{{}, f.labels, Encoding::gaussian};
    out.rows.reserve(f.size());
    for (const auto& r : f.rows) {
        std::vector<double> row(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) row[j] = gaussian_score(r[j].best(), stats.mean(j));
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Decision tree

class TreeBuilder {
public:
    TreeBuilder(const EncodedMatrix& data, const TreeParams& params, DecisionTree& tree)
        : data_(data), params_(params), tree_(tree), labels_(tree.classes_.encode(data.labels)) {}

    std::size_t build(std::vector<std::size_t> rows, std::size_t depth) {
        const std::size_t num_classes = tree_.classes_.size();
        std::vector<std::size_t> counts(num_classes, 0);
        for (auto r : rows) ++counts[labels_[r]];

        DecisionTree::Node node;
        node.distribution = counts;
        node.label = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());

        const std::size_t id = tree_.nodes_.size();
        tree_.nodes_.push_back(node);

        const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
        const bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_capped || rows.size() < 2 * params_.min_samples_leaf) return id;

        const auto split = find_split(rows, counts);
        if (!split) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto r : rows) {
            (data_.rows[r][split->feature] <= split->threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::size_t l = build(std::move(left), depth + 1);
        const std::size_t rr = build(std::move(right), depth + 1);
        auto& n = tree_.nodes_[id];
        n.feature = static_cast<int>(split->feature);
        n.threshold = split->threshold;
        n.left = l;
        n.right = rr;
        return id;
    }

private:
    struct Candidate {
        std::size_t feature;
        double threshold;
        double gain;
    };

    std::optional<Candidate> find_split(const std::vector<std::size_t>& rows,
                                        const std::vector<std::size_t>& counts) const {
        std::optional<Candidate> best;
        const std::size_t n = rows.size();
        const std::size_t min_leaf = std::max<std::size_t>(params_.min_samples_leaf, 1);
        std::vector<std::size_t> order(rows);
        std::vector<std::size_t> near(counts.size());
        for (std::size_t f = 0; f < tree_.num_features_; ++f) {
            std::stable_sort(order.begin(), order.end(),
                             [&](auto a, auto b) { return data_.rows[a][f] < data_.rows[b][f]; });
            std::fill(near.begin(), near.end(), 0);
            for (std::size_t p = 1; p < n; ++p) {
                ++near[labels_[order[p - 1]]];
                const double lo = data_.rows[order[p - 1]][f];
                const double hi = data_.rows[order[p]][f];
                if (!(lo < hi) || p < min_leaf || n - p < min_leaf) continue;
                const double gain = information_gain(counts, near);
                if (!best || gain > best->gain) {
                    double mid = std::midpoint(lo, hi);
                    if (!(mid < hi)) mid = lo;
                    best = Candidate{f, mid, gain};
                }
            }
        }
        return best;
    }

    const EncodedMatrix& data_;
    const TreeParams& params_;
    DecisionTree& tree_;
    std::vector<std::size_t> labels_;
};

DecisionTree DecisionTree::fit(const EncodedMatrix& train, const TreeParams& params) {
    if (train.rows.empty()) throw Error("cannot fit a decision tree on an empty matrix");
    if (train.labels.size() != train.rows.size()) throw DimensionError("label count differs from row count");
    const std::size_t width = train.width();
    for (const auto& r : train.rows) {
        if (r.size() != width) throw DimensionError("encoded rows differ in width");
        for (double v : r)
            if (!std::isfinite(v)) throw InvalidValueError("non-finite feature value");
    }

    DecisionTree tree;
    tree.classes_ = LabelIndex(train.labels);
    tree.num_features_ = width;
    tree.params_ = params;
    std::vector<std::size_t> rows(train.rows.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    TreeBuilder(train, params, tree).build(std::move(rows), 0);
    return tree;
}

const std::string& DecisionTree::predict_one(std::span<const double> row) const {
    if (row.size() != num_features_) {
        throw DimensionError("row has " + std::to_string(row.size()) + " features, model expects " +
                             std::to_string(num_features_));
    }
    std::size_t at = 0;
    while (nodes_[at].feature >= 0) {
        const auto& n = nodes_[at];
        at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return classes_.label(nodes_[at].label);
}

std::vector<std::string> DecisionTree::predict(const EncodedMatrix& e) const {
    std::vector<std::string> out;
    out.reserve(e.size());
    for (const auto& r : e.rows) out.push_back(predict_one(r));
    return out;
}

std::size_t DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes_[id].feature >= 0) {
            stack.push_back({nodes_[id].left, d + 1});
            stack.push_back({nodes_[id].right, d + 1});
        }
    }
    return deepest;
}

struct TreeJson {
    static json node(const DecisionTree& t, std::size_t id) {
        const auto& n = t.nodes_[id];
        if (n.feature < 0) {
            return json{{"leaf", t.classes_.label(n.label)}, {"distribution", n.distribution}};
        }
        return json{{"feature", n.feature},
                    {"threshold", n.threshold},
                    {"left", node(t, n.left)},
                    {"right", node(t, n.right)}};
    }

    static std::size_t read(DecisionTree& t, const json& j) {
        const std::size_t id = t.nodes_.size();
        t.nodes_.emplace_back();
        if (j.contains("leaf")) {
            DecisionTree::Node n;
            n.label = t.classes_.index(j.at("leaf").get<std::string>());
            if (j.contains("distribution")) n.distribution = j.at("distribution").get<std::vector<std::size_t>>();
            t.nodes_[id] = std::move(n);
            return id;
        }
        const int feature = j.at("feature").get<int>();
        if (feature < 0 || static_cast<std::size_t>(feature) >= t.num_features_) {
            throw Error("tree node feature index " + std::to_string(feature) + " out of range");
        }
        const double threshold = j.at("threshold").get<double>();
        const std::size_t left = read(t, j.at("left"));
        const std::size_t right = read(t, j.at("right"));
        auto& n = t.nodes_[id];
        n.feature = feature;
        n.threshold = threshold;
        n.left = left;
        n.right = right;
        return id;
    }

    static json to(const DecisionTree& t) {
        json max_depth = t.params_.max_depth ? json(*t.params_.max_depth) : json(nullptr);
        return json{{"num_features", t.num_features_},
                    {"classes", t.classes_.labels()},
                    {"max_depth", max_depth},
                    {"min_samples_leaf", t.params_.min_samples_leaf},
                    {"root", node(t, 0)}};
    }

    static DecisionTree from(const json& j) {
        DecisionTree t;
        t.num_features_ = j.at("num_features").get<std::size_t>();
        t.classes_ = LabelIndex(j.at("classes").get<std::vector<std::string>>());
        if (!j.at("max_depth").is_null()) t.params_.max_depth = j.at("max_depth").get<std::size_t>();
        t.params_.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
        read(t, j.at("root"));
        return t;
    }
};

std::string DecisionTree::to_json() const { return TreeJson::to(*this).dump(2) + "\n"; }

DecisionTree DecisionTree::from_json(const std::string& text) {
    try {
        return TreeJson::from(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError("<json>", 0, 0, std::string("invalid tree JSON: ") + e.what());
    }
}

double evaluate(std::span<const std::string> predictions, std::span<const std::string> truth) {
    if (predictions.size() != truth.size()) {
        throw DimensionError("evaluate: " + std::to_string(predictions.size()) + " predictions for " +
                             std::to_string(truth.size()) + " labels");
    }
    if (predictions.empty()) throw Error("evaluate: no predictions");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

// ---------------------------------------------------------------------------
// Model

Model Model::fit(const UncertainFeatureMatrix& train, Encoding encoding, const TreeParams& params) {
    Model m;
    m.encoding = encoding;
    if (encoding == Encoding::gaussian) m.gaussian_stats = fit_gaussian_stats(train);
    m.tree = DecisionTree::fit(m.encode(train), params);
    return m;
}

EncodedMatrix Model::encode(const UncertainFeatureMatrix& f) const {
    switch (encoding) {
        case Encoding::best_only: return encode_best_only(f);
        case Encoding::flatten: return encode_flatten(f);
        case Encoding::gaussian:
            if (!gaussian_stats) throw ConfigError("gaussian encoding requires fitted statistics");
            return encode_gaussian(f, *gaussian_stats);
    }
    throw ConfigError("unknown encoding");
}

std::vector<std::string> Model::predict(const UncertainFeatureMatrix& f) const { return tree.predict(encode(f)); }

std::string Model::to_json() const {
    json doc{{"encoding", std::string(ust::to_string(encoding))}, {"tree", json::parse(tree.to_json())}};
    if (gaussian_stats) doc["gaussian_stats"] = json{{"min", gaussian_stats->min}, {"max", gaussian_stats->max}};
    return doc.dump(2) + "\n";
}

Model Model::from_json(const std::string& text, const std::string& source) {
    try {
        const json doc = json::parse(text);
        Model m;
        m.encoding = encoding_from_string(doc.at("encoding").get<std::string>());
        if (doc.contains("gaussian_stats")) {
            GaussianEncodingStats s;
            s.min = doc["gaussian_stats"].at("min").get<std::vector<double>>();
            s.max = doc["gaussian_stats"].at("max").get<std::vector<double>>();
            if (s.min.size() != s.max.size()) throw ParseError(source, 0, 0, "gaussian stats size mismatch");
            m.gaussian_stats = std::move(s);
        }
        m.tree = TreeJson::from(doc.at("tree"));
        return m;
    } catch (const json::exception& e) {
        throw ParseError(source, 0, 0, std::string("invalid model JSON: ") + e.what());
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(source, 0, 0, e.what());
    }
}

void Model::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open file for writing");
    out << to_json();
    out.flush();
    if (!out) throw IoError(path.string(), "write failure");
}

Model Model::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str(), path.string());
}

// ---------------------------------------------------------------------------
// Feature CSV

void save_features_csv(const UncertainFeatureMatrix& f, const std::filesystem::path& path) {
    std::ostringstream text;
    text << "label";
    for (std::size_t j = 1; j <= 2 * f.k; ++j) text << ",f" << j;
    text << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& label = f.labels.at(i);
        if (label.find_first_of(",\"\n\r") != std::string::npos) {
            throw Error("label '" + label + "' cannot be written to CSV");
        }
        if (f.rows[i].size() != f.k) throw DimensionError("feature row width differs from k");
        text << label;
        for (const auto& v : f.rows[i]) text << ',' << detail::format_real(v.best());
        for (const auto& v : f.rows[i]) text << ',' << detail::format_real(v.uncertainty());
        text << '\n';
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open file for writing");
    out << text.str();
    out.flush();
    if (!out) throw IoError(path.string(), "write failure");
}

UncertainFeatureMatrix load_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open file");
    const std::string name = path.string();

    std::string line;
    if (!std::getline(in, line)) throw ParseError(name, 1, 0, "missing header row");
    const auto header = detail::split(detail::trim_eol(line), ',');
    if (header.empty() || detail::trim(header[0]) != "label") {
        throw ParseError(name, 1, 1, "header must start with 'label'");
    }
    const std::size_t width = header.size() - 1;
    if (width == 0 || width % 2 != 0) {
        throw ParseError(name, 1, 0, "expected an even, non-zero number of feature columns, got " +
                                         std::to_string(width));
    }
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (detail::trim(header[c]) != "f" + std::to_string(c)) {
            throw ParseError(name, 1, c + 1, "expected column name f" + std::to_string(c));
        }
    }

    UncertainFeatureMatrix f;
    f.k = width / 2;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim_eol(line);
        if (detail::trim(text).empty()) continue;
        const auto fields = detail::split(text, ',');
        if (fields.size() != header.size()) {
            throw ParseError(name, line_no, 0,
                             std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()));
        }
        const auto label = detail::trim(fields[0]);
        if (label.empty()) throw ParseError(name, line_no, 1, "missing class label");
        std::vector<double> values(width);
        for (std::size_t c = 0; c < width; ++c) {
            const auto token = detail::trim(fields[c + 1]);
            const auto v = detail::parse_real(token);
            if (!v || !std::isfinite(*v) || (c >= f.k && *v < 0.0)) {
                throw ParseError(name, line_no, c + 2, "invalid feature value '" + std::string(token) + "'");
            }
            values[c] = *v;
        }
        UncertainVector row;
        row.reserve(f.k);
        for (std::size_t j = 0; j < f.k; ++j) row.emplace_back(values[j], values[f.k + j]);
        f.rows.push_back(std::move(row));
        f.labels.emplace_back(label);
    }
    if (in.bad()) throw IoError(name, "read failure");
    return f;
}

}  // namespace ust
