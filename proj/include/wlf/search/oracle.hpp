#pragma once

#include <chrono>
#include <deque>
#include <unordered_map>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/pddl/model.hpp"
#include "wlf/search/gbfs.hpp"

namespace wlf::search {

// One optimal plan plus backward-consistent labels along its trace:
// h*(trace[i]) = labels[i] = n - i for a plan of length n.
struct OracleResult {
    Plan plan;
    std::vector<pddl::State> trace; // trace[0] = init, trace[n] goal
    std::vector<int> labels;
};

// Uniform-cost search under unit action costs (breadth-first order).
// Budget exhaustion here is an error: without an optimal trace there is
// nothing to train on.
inline OracleResult uniform_cost_oracle(const pddl::LiftedTask &task,
                                        const std::vector<pddl::GroundAction> &ground,
                                        const SearchBudget &budget) {
    budget.validate();
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&start]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    struct Node {
        const pddl::State *state;
        int parent;
        int action;
    };
    std::unordered_map<pddl::State, int, pddl::StateHash> known;
    std::deque<Node> nodes;
    std::deque<int> queue;
    std::uint64_t stored_atom_ints = 0;

    auto push_state = [&](pddl::State state, int parent, int action) {
        auto [it, inserted] = known.emplace(std::move(state), static_cast<int>(nodes.size()));
        if (!inserted)
            return;
        for (const pddl::Atom &a : it->first.atoms)
            stored_atom_ints += 2 + a.args.size();
        nodes.push_back(Node{&it->first, parent, action});
        queue.push_back(static_cast<int>(nodes.size()) - 1);
    };
    push_state(task.init, -1, -1);

    std::uint64_t expansions = 0;
    int goal_node = -1;
    while (!queue.empty()) {
        if (elapsed() > budget.wall_seconds)
            throw ResourceError("oracle timeout after " + std::to_string(budget.wall_seconds) +
                                "s");
        if (detail::memory_estimate(stored_atom_ints, nodes.size()) > budget.max_memory_bytes)
            throw ResourceError("oracle memory cap exceeded");
        int current = queue.front();
        queue.pop_front();
        if (pddl::is_goal(*nodes[current].state, task.goal)) {
            goal_node = current;
            break;
        }
        if (expansions >= budget.max_expansions)
            throw ResourceError("oracle expansion cap exceeded");
        ++expansions;
        for (auto &succ : pddl::successors(*nodes[current].state, ground))
            push_state(std::move(succ.state), current,
                       static_cast<int>(succ.action - ground.data()));
    }
    if (goal_node < 0)
        throw ResourceError("oracle exhausted the state space without reaching the goal");

    OracleResult result;
    std::vector<int> path;
    for (int node = goal_node; node >= 0; node = nodes[node].parent)
        path.push_back(node);
    std::reverse(path.begin(), path.end());
    int n = static_cast<int>(path.size()) - 1;
    for (int i = 0; i <= n; ++i) {
        result.trace.push_back(*nodes[path[i]].state);
        result.labels.push_back(n - i);
        if (i > 0)
            result.plan.steps.push_back(ground[nodes[path[i]].action]);
    }
    return result;
}

enum class StateRole { trace, sibling };

struct LabelledState {
    pddl::State state;
    int hstar = -1; // exact cost-to-go for trace states, unused for siblings
    StateRole role = StateRole::trace;
    int trace_index = 0; // for siblings: the index i of the better trace state
};

enum class TrainingMode { regression, ranking };

// Regression mode: trace states with their h* labels. Ranking mode adds
// the siblings: for trace state s_i (i >= 1), every other successor s'
// of s_(i-1) yields one (better = s_i, worse = s') pair.
struct TrainingData {
    std::vector<LabelledState> states;
    std::vector<std::pair<int, int>> pairs; // indices into states
};

inline TrainingData make_training_data(const pddl::LiftedTask &task,
                                       const std::vector<pddl::GroundAction> &ground,
                                       TrainingMode mode, const SearchBudget &budget) {
    OracleResult oracle = uniform_cost_oracle(task, ground, budget);
    TrainingData data;
    for (std::size_t i = 0; i < oracle.trace.size(); ++i)
        data.states.push_back(LabelledState{oracle.trace[i], oracle.labels[i],
                                            StateRole::trace, static_cast<int>(i)});
    if (mode == TrainingMode::regression)
        return data;

    for (std::size_t i = 1; i < oracle.trace.size(); ++i) {
        for (auto &succ : pddl::successors(oracle.trace[i - 1], ground)) {
            if (succ.state == oracle.trace[i])
                continue;
            data.states.push_back(LabelledState{std::move(succ.state), -1, StateRole::sibling,
                                                static_cast<int>(i)});
            data.pairs.emplace_back(static_cast<int>(i),
                                    static_cast<int>(data.states.size()) - 1);
        }
    }
    return data;
}

} // namespace wlf::search
