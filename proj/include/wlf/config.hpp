#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wlf/errors.hpp"
#include "wlf/ilg/build.hpp"
#include "wlf/kernels/config.hpp"

namespace wlf {

enum class PruningMode { none, imf };

inline const char *to_string(PruningMode p) {
    return p == PruningMode::none ? "none" : "i-mf";
}

inline PruningMode pruning_from_string(const std::string &s) {
    if (s == "none") return PruningMode::none;
    if (s == "i-mf") return PruningMode::imf;
    throw ValidationError("unknown pruning mode '" + s + "'");
}

inline ilg::StateRepr repr_from_string(const std::string &s) {
    if (s == "part") return ilg::StateRepr::partial;
    if (s == "cmpl") return ilg::StateRepr::complete;
    throw ValidationError("unknown state representation '" + s + "'");
}

// Full hyperparameter record of one model: the six studied options plus
// the optimiser constants baked into the model file.
struct ModelConfig {
    kernels::Algorithm algorithm = kernels::Algorithm::wl;
    int iterations = 1;
    PruningMode pruning = PruningMode::none;
    kernels::HashMode hash = kernels::HashMode::multiset;
    ilg::StateRepr repr = ilg::StateRepr::partial;
    std::string optimiser = "rkSVM";

    double lasso_alpha = 1e-3;
    double gpr_noise = 1.0;
    double svr_c = 1.0;
    double svr_epsilon = 0.1;
    double rank_c = 1.0;
    double rank_lambda = 1e-3;
    double prune_frequency = 0.01;
    int epochs = 2000;
    std::uint64_t max_pair_states = 4'000'000;

    bool is_ranking() const {return optimiser.rfind("rk", 0) == 0;}

    kernels::KernelConfig kernel() const {
        kernels::KernelConfig k;
        k.algorithm = algorithm;
        k.iterations = iterations;
        k.hash = hash;
        k.max_pair_states = max_pair_states;
        return k;
    }

    std::string id() const {
        return std::string(kernels::to_string(algorithm)) + "_" + std::to_string(iterations) +
               "_" + to_string(pruning) + "_" + kernels::to_string(hash) + "_" +
               ilg::to_string(repr) + "_" + optimiser;
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"algorithm", kernels::to_string(algorithm)},
                              {"iterations", iterations},
                              {"pruning", to_string(pruning)},
                              {"hash", kernels::to_string(hash)},
                              {"repr", ilg::to_string(repr)},
                              {"optimiser", optimiser},
                              {"lasso_alpha", lasso_alpha},
                              {"gpr_noise", gpr_noise},
                              {"svr_c", svr_c},
                              {"svr_epsilon", svr_epsilon},
                              {"rank_c", rank_c},
                              {"rank_lambda", rank_lambda},
                              {"prune_frequency", prune_frequency},
                              {"epochs", epochs},
                              {"max_pair_states", max_pair_states}};
    }

    static ModelConfig from_json(const nlohmann::json &j) {
        ModelConfig c;
        c.algorithm = kernels::algorithm_from_string(j.at("algorithm").get<std::string>());
        c.iterations = j.at("iterations").get<int>();
        c.pruning = pruning_from_string(j.at("pruning").get<std::string>());
        c.hash = kernels::hash_from_string(j.at("hash").get<std::string>());
        c.repr = repr_from_string(j.at("repr").get<std::string>());
        c.optimiser = j.at("optimiser").get<std::string>();
        c.lasso_alpha = j.at("lasso_alpha").get<double>();
        c.gpr_noise = j.at("gpr_noise").get<double>();
        c.svr_c = j.at("svr_c").get<double>();
        c.svr_epsilon = j.at("svr_epsilon").get<double>();
        c.rank_c = j.at("rank_c").get<double>();
        c.rank_lambda = j.at("rank_lambda").get<double>();
        c.prune_frequency = j.at("prune_frequency").get<double>();
        c.epochs = j.at("epochs").get<int>();
        c.max_pair_states = j.at("max_pair_states").get<std::uint64_t>();
        return c;
    }

    // "WL,1,i-mf,set,part,rkSVM"
    static ModelConfig parse(const std::string &text) {
        std::vector<std::string> parts;
        std::string current;
        for (char ch : text) {
            if (ch == ',') {
                parts.push_back(current);
                current.clear();
            } else {
                current += ch;
            }
        }
        parts.push_back(current);
        if (parts.size() != 6)
            throw ValidationError(
                "expected 6 comma-separated fields: algorithm,L,pruning,hash,repr,optimiser");
        ModelConfig c;
        c.algorithm = kernels::algorithm_from_string(parts[0]);
        c.iterations = std::stoi(parts[1]);
        c.pruning = pruning_from_string(parts[2]);
        c.hash = kernels::hash_from_string(parts[3]);
        c.repr = repr_from_string(parts[4]);
        c.optimiser = parts[5];
        return c;
    }
};

inline const std::vector<std::string> &known_optimisers() {
    static const std::vector<std::string> names{"Lasso", "GPR", "SVR", "rkLP", "rkSVM"};
    return names;
}

} // namespace wlf
