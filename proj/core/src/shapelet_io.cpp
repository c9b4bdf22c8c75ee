#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ust/error.hpp"
#include "ust/shapelet.hpp"

namespace ust {

namespace {

using nlohmann::json;

json to_json(const UncertainValue& v) { return json{{"best", v.best()}, {"uncertainty", v.uncertainty()}}; }

UncertainValue value_from_json(const json& j) {
    return UncertainValue(j.at("best").get<double>(), j.at("uncertainty").get<double>());
}

}  // namespace

std::string shapelets_to_json(std::span<const UncertainShapelet> shapelets) {
    json doc = json::array();
    for (const auto& s : shapelets) {
        json values = json::array();
        for (const auto& v : s.values) values.push_back(to_json(v));
        doc.push_back(json{{"source_instance", s.source_instance},
                           {"start_offset", s.start_offset},
                           {"length", s.length()},
                           {"quality", s.quality},
                           {"threshold", to_json(s.split_threshold)},
                           {"values", std::move(values)}});
    }
    return doc.dump(2) + "\n";
}

std::vector<UncertainShapelet> shapelets_from_json(const std::string& text, const std::string& source) {
    std::vector<UncertainShapelet> out;
    try {
        const json doc = json::parse(text);
        if (!doc.is_array()) throw ParseError(source, 0, 0, "expected a JSON array of shapelets");
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const json& item = doc[i];
            UncertainShapelet s;
            s.source_instance = item.at("source_instance").get<std::size_t>();
            s.start_offset = item.at("start_offset").get<std::size_t>();
            s.quality = item.at("quality").get<double>();
            s.split_threshold = value_from_json(item.at("threshold"));
            for (const auto& v : item.at("values")) s.values.push_back(value_from_json(v));
            const auto length = item.at("length").get<std::size_t>();
            if (length != s.values.size() || length == 0) {
                throw ParseError(source, 0, 0,
                                 "shapelet " + std::to_string(i) + ": length " + std::to_string(length) +
                                     " does not match " + std::to_string(s.values.size()) + " values");
            }
            out.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw ParseError(source, 0, 0, std::string("invalid shapelet JSON: ") + e.what());
    } catch (const InvalidValueError& e) {
        throw ParseError(source, 0, 0, e.what());
    }
    return out;
}

void save_shapelets(std::span<const UncertainShapelet> shapelets, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open file for writing");
    out << shapelets_to_json(shapelets);
    out.flush();
    if (!out) throw IoError(path.string(), "write failure");
}

std::vector<UncertainShapelet> load_shapelets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return shapelets_from_json(buf.str(), path.string());
}

}  // namespace ust
