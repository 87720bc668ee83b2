#pragma once

#include <chrono>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wlf/config.hpp"
#include "wlf/errors.hpp"
#include "wlf/harness/grid.hpp"
#include "wlf/ilg/build.hpp"
#include "wlf/kernels/refine.hpp"
#include "wlf/learn/model.hpp"
#include "wlf/learn/optimisers.hpp"
#include "wlf/pddl/ground.hpp"
#include "wlf/pruning.hpp"
#include "wlf/search/oracle.hpp"

namespace wlf::harness {

struct TrainedModel {
    learn::LinearModel model;
    double train_seconds = 0.0;
    pruning::PruneReport prune_report; // all zero when pruning is off
};

// Full training pipeline: oracle-label the training tasks, build their
// graphs, collect colours, prune, fit the configured optimiser.
inline TrainedModel train_model(const std::vector<pddl::LiftedTask> &tasks,
                                const ModelConfig &config,
                                const search::SearchBudget &oracle_budget,
                                double train_seconds_cap = 300.0) {
    if (auto reason = config_rejection(config))
        throw ValidationError(*reason);
    if (tasks.empty())
        throw ValidationError("training requires at least one task");

    auto start = std::chrono::steady_clock::now();
    auto check_budget = [&](const char *phase) {
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > train_seconds_cap)
            throw ResourceError("training budget exceeded during " + std::string(phase));
    };

    const pddl::DomainDef &domain = tasks[0].domain;
    std::set<std::string> statics = pddl::detect_static_predicates(domain);
    search::TrainingMode mode = config.is_ranking() ? search::TrainingMode::ranking
                                                    : search::TrainingMode::regression;

    std::vector<ilg::LabelledGraph> graphs;
    std::vector<int> labels;               // h* per trace row
    std::vector<bool> is_trace_row;
    std::vector<std::pair<int, int>> pairs; // global row indices
    for (const auto &task : tasks) {
        std::vector<pddl::GroundAction> ground = pddl::ground_actions(task);
        search::TrainingData data = search::make_training_data(task, ground, mode, oracle_budget);
        int offset = static_cast<int>(graphs.size());
        for (const auto &state : data.states) {
            graphs.push_back(ilg::build_ilg(task, state.state, config.repr, statics));
            labels.push_back(state.hstar);
            is_trace_row.push_back(state.role == search::StateRole::trace);
        }
        for (auto [better, worse] : data.pairs)
            pairs.emplace_back(better + offset, worse + offset);
        check_budget("oracle labelling");
    }

    auto [table, index] = kernels::collect_colours(graphs, config.kernel());
    check_budget("colour collection");

    kernels::FeatureIndex kept = index;
    pruning::PruneReport prune_report;
    pruning::EvaluationMatrix matrix = pruning::evaluation_matrix(graphs, table, index);
    if (config.pruning == PruningMode::imf) {
        pruning::DependencyGraph deps = pruning::DependencyGraph::build(table, index);
        pruning::PruneResult pruned =
            pruning::prune_imf(matrix, deps, table, index, config.prune_frequency);
        kept = pruning::restrict_index(index, pruned.kept_positions);
        prune_report = pruned.report;
        check_budget("feature pruning");
    }

    // Rows restricted to the kept features, as doubles.
    auto row_of = [&](std::size_t g) {
        std::vector<double> row;
        row.reserve(kept.size());
        double denom = config.algorithm == kernels::Algorithm::niwl
                           ? static_cast<double>(graphs[g].node_count())
                           : 1.0;
        for (kernels::ColourId c : kept.colours)
            row.push_back(static_cast<double>(matrix.at(g, index.find(c))) / denom);
        return row;
    };

    learn::FitResult fit;
    if (config.is_ranking()) {
        learn::RankingSet data;
        data.rows.reserve(graphs.size());
        for (std::size_t g = 0; g < graphs.size(); ++g)
            data.rows.push_back(row_of(g));
        data.pairs = pairs;
        if (config.optimiser == "rkSVM")
            fit = learn::fit_rank_svm(data, config.rank_c, config.epochs);
        else
            fit = learn::fit_rank_lp(data, config.rank_lambda, config.epochs);
    } else {
        learn::RegressionSet data;
        for (std::size_t g = 0; g < graphs.size(); ++g) {
            if (!is_trace_row[g])
                continue;
            data.x.push_back(row_of(g));
            data.y.push_back(static_cast<double>(labels[g]));
        }
        if (config.optimiser == "Lasso")
            fit = learn::fit_lasso(data, config.lasso_alpha);
        else if (config.optimiser == "GPR")
            fit = learn::fit_gpr(data, config.gpr_noise);
        else
            fit = learn::fit_svr(data, config.svr_c, config.svr_epsilon, config.epochs);
    }
    check_budget("optimisation");

    TrainedModel result{
        learn::LinearModel{config, std::move(table), std::move(kept), std::move(fit.weights),
                           fit.bias,
                           learn::TrainingMetrics{fit.metrics.objective, 0}},
        0.0, prune_report};
    result.model.metrics.size = result.model.features.size();
    result.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// Heuristic adaptor: graph the state, embed it against the model's
// vocabulary, score it. The model and task must outlive the callable.
inline search::Heuristic make_heuristic(learn::LinearModel &model,
                                        const pddl::LiftedTask &task) {
    std::set<std::string> statics = pddl::detect_static_predicates(task.domain);
    return [&model, &task, statics = std::move(statics)](const pddl::State &state) {
        ilg::LabelledGraph g = ilg::build_ilg(task, state, model.config.repr, statics);
        return learn::predict(model, kernels::embed(g, model.table, model.features));
    };
}

} // namespace wlf::harness
