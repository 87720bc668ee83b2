#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlf/config.hpp"

namespace wlf::harness {

// The studied option ranges. The default grid spans the full published
// cross product; sweeps enumerate the accepted subset.
struct HyperparameterGrid {
    std::vector<kernels::Algorithm> algorithms{
        kernels::Algorithm::wl, kernels::Algorithm::iwl, kernels::Algorithm::niwl,
        kernels::Algorithm::two_lwl, kernels::Algorithm::two_wl};
    std::vector<int> iterations{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<PruningMode> prunings{PruningMode::none, PruningMode::imf};
    std::vector<kernels::HashMode> hashes{kernels::HashMode::multiset,
                                          kernels::HashMode::set};
    std::vector<ilg::StateRepr> reprs{ilg::StateRepr::partial, ilg::StateRepr::complete};
    std::vector<std::string> optimisers{"Lasso", "GPR", "SVR", "rkLP", "rkSVM"};
};

// Configuration-level validation shared by direct training and sweeps.
inline std::optional<std::string> config_rejection(const ModelConfig &c) {
    if ((c.algorithm == kernels::Algorithm::iwl || c.algorithm == kernels::Algorithm::niwl) &&
        c.pruning == PruningMode::imf)
        return "feature pruning is not supported for the iWL and niWL algorithms";
    bool known = false;
    for (const auto &name : known_optimisers())
        known = known || name == c.optimiser;
    if (!known)
        return "unknown optimiser '" + c.optimiser + "'";
    if (c.iterations < 0)
        return "iterations must be non-negative";
    return std::nullopt;
}

// Sweep-level validation additionally gates 2-WL behind its memory
// profile: pair-state tables blow the training memory budget.
inline std::optional<std::string> sweep_rejection(const ModelConfig &c) {
    if (auto reason = config_rejection(c))
        return reason;
    if (c.algorithm == kernels::Algorithm::two_wl)
        return "2-WL is too memory intensive to train and is excluded from sweeps";
    return std::nullopt;
}

struct GridEnumeration {
    std::vector<ModelConfig> accepted;
    std::vector<std::pair<ModelConfig, std::string>> rejected;
};

inline GridEnumeration enumerate_grid(const HyperparameterGrid &grid) {
    GridEnumeration result;
    for (auto algorithm : grid.algorithms)
        for (int l : grid.iterations)
            for (auto pruning : grid.prunings)
                for (auto hash : grid.hashes)
                    for (auto repr : grid.reprs)
                        for (const auto &optimiser : grid.optimisers) {
                            ModelConfig c;
                            c.algorithm = algorithm;
                            c.iterations = l;
                            c.pruning = pruning;
                            c.hash = hash;
                            c.repr = repr;
                            c.optimiser = optimiser;
                            if (auto reason = sweep_rejection(c))
                                result.rejected.emplace_back(std::move(c), *reason);
                            else
                                result.accepted.push_back(std::move(c));
                        }
    return result;
}

} // namespace wlf::harness
