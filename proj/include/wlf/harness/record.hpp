#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wlf/config.hpp"

namespace wlf::harness {

// One (configuration, problem) planning outcome plus the training
// snapshot of the configuration's model.
struct RunRecord {
    std::string config_id;
    ModelConfig config;
    std::string domain;
    std::string problem;
    bool solved = false;
    std::string unsolved_reason; // empty when solved
    double wall_seconds = 0.0;
    int plan_length = -1;
    std::uint64_t expansions = 0;

    bool model_trained = true;
    double train_eval = 0.0;
    double train_seconds = 0.0;
    std::uint64_t model_size = 0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"config_id", config_id},
                              {"config", config.to_json()},
                              {"domain", domain},
                              {"problem", problem},
                              {"solved", solved},
                              {"unsolved_reason", unsolved_reason},
                              {"wall_seconds", wall_seconds},
                              {"plan_length", plan_length},
                              {"expansions", expansions},
                              {"model_trained", model_trained},
                              {"train_eval", train_eval},
                              {"train_seconds", train_seconds},
                              {"model_size", model_size}};
    }

    static RunRecord from_json(const nlohmann::json &j) {
        RunRecord r;
        r.config_id = j.at("config_id").get<std::string>();
        r.config = ModelConfig::from_json(j.at("config"));
        r.domain = j.at("domain").get<std::string>();
        r.problem = j.at("problem").get<std::string>();
        r.solved = j.at("solved").get<bool>();
        r.unsolved_reason = j.at("unsolved_reason").get<std::string>();
        r.wall_seconds = j.at("wall_seconds").get<double>();
        r.plan_length = j.at("plan_length").get<int>();
        r.expansions = j.at("expansions").get<std::uint64_t>();
        r.model_trained = j.at("model_trained").get<bool>();
        r.train_eval = j.at("train_eval").get<double>();
        r.train_seconds = j.at("train_seconds").get<double>();
        r.model_size = j.at("model_size").get<std::uint64_t>();
        return r;
    }
};

} // namespace wlf::harness
