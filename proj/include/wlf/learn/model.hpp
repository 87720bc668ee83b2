#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlf/config.hpp"
#include "wlf/errors.hpp"
#include "wlf/kernels/colour_table.hpp"
#include "wlf/kernels/refine.hpp"

namespace wlf::learn {

// Shortest decimal string that round-trips the exact double value.
inline std::string decimal_string(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

inline double decimal_value(const std::string &text) {
    return std::strtod(text.c_str(), nullptr);
}

struct TrainingMetrics {
    double eval = 0.0;       // optimiser objective at the returned iterate
    std::size_t size = 0;    // kept feature count
};

// A trained heuristic: h(s) = sum_i w_i c_i(s) + bias over the kept
// feature index, bundled with everything needed to evaluate new states.
struct LinearModel {
    ModelConfig config;
    kernels::ColourTable table;
    kernels::FeatureIndex features;
    std::vector<double> weights;
    double bias = 0.0;
    TrainingMetrics metrics;
};

inline double predict(const LinearModel &model, const kernels::Embedding &embedding) {
    if (embedding.size() != model.weights.size())
        throw ValidationError("embedding dimension " + std::to_string(embedding.size()) +
                              " does not match model dimension " +
                              std::to_string(model.weights.size()));
    double value = model.bias;
    for (std::size_t i = 0; i < model.weights.size(); ++i)
        value += model.weights[i] * embedding.at(i);
    return value;
}

inline nlohmann::json model_to_json(const LinearModel &model) {
    nlohmann::json weights = nlohmann::json::array();
    for (double w : model.weights)
        weights.push_back(decimal_string(w));
    return nlohmann::json{{"version", 1},
                          {"config", model.config.to_json()},
                          {"table", model.table.to_json()},
                          {"features", model.features.to_json()},
                          {"weights", weights},
                          {"bias", decimal_string(model.bias)},
                          {"metrics",
                           {{"eval", decimal_string(model.metrics.eval)},
                            {"size", model.metrics.size}}}};
}

inline LinearModel model_from_json(const nlohmann::json &j) {
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        throw ValidationError("unsupported model file version");
    LinearModel model{ModelConfig::from_json(j.at("config")),
                      kernels::ColourTable::from_json(j.at("table")),
                      kernels::FeatureIndex::from_json(j.at("features")),
                      {},
                      0.0,
                      {}};
    for (const auto &w : j.at("weights"))
        model.weights.push_back(decimal_value(w.get<std::string>()));
    model.bias = decimal_value(j.at("bias").get<std::string>());
    model.metrics.eval = decimal_value(j.at("metrics").at("eval").get<std::string>());
    model.metrics.size = j.at("metrics").at("size").get<std::size_t>();
    if (model.weights.size() != model.features.size())
        throw ValidationError("corrupt model file: weight/feature size mismatch");
    return model;
}

inline void save_model(const std::string &path, const LinearModel &model) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << model_to_json(model).dump() << "\n";
}

inline LinearModel load_model(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("corrupt model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace wlf::learn
