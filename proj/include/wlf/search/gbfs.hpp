#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/pddl/model.hpp"

namespace wlf::search {

struct SearchBudget {
    double wall_seconds = 60.0;
    std::uint64_t max_expansions = UINT64_MAX;
    std::uint64_t max_memory_bytes = 4ull << 30;

    void validate() const {
        if (wall_seconds <= 0.0 || max_expansions == 0 || max_memory_bytes == 0)
            throw ValidationError("search budget values must be positive");
    }
};

struct SearchStats {
    std::uint64_t expansions = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t generated = 0;
    double wall_seconds = 0.0;
};

struct Plan {
    std::vector<pddl::GroundAction> steps;
};

enum class UnsolvedReason { timeout, memory, expansions, exhausted_open_list };

inline const char *to_string(UnsolvedReason r) {
    switch (r) {
    case UnsolvedReason::timeout: return "timeout";
    case UnsolvedReason::memory: return "memory";
    case UnsolvedReason::expansions: return "expansions";
    case UnsolvedReason::exhausted_open_list: return "exhausted-open-list";
    }
    return "?";
}

// Budget exhaustion is an outcome, not an exception.
struct SearchResult {
    bool solved = false;
    Plan plan;
    UnsolvedReason reason = UnsolvedReason::exhausted_open_list;
    SearchStats stats;
};

using Heuristic = std::function<double(const pddl::State &)>;

namespace detail {

// Rough live-memory estimate from stored atoms and node bookkeeping.
inline std::uint64_t memory_estimate(std::uint64_t stored_atom_ints, std::uint64_t states) {
    return stored_atom_ints * 8 + states * 96;
}

} // namespace detail

// Greedy best-first search ordered by h with FIFO tie-breaking and
// duplicate detection by canonical state. Heuristic values are computed
// once per generated state.
inline SearchResult gbfs(const pddl::LiftedTask &task,
                         const std::vector<pddl::GroundAction> &ground, const Heuristic &h,
                         const SearchBudget &budget) {
    budget.validate();
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&start]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    SearchResult result;

    struct Node {
        const pddl::State *state;
        int parent;
        int action; // index into ground
    };
    struct OpenEntry {
        double h;
        std::uint64_t seq;
        int node;
        bool operator>(const OpenEntry &other) const {
            if (h != other.h)
                return h > other.h;
            return seq > other.seq;
        }
    };

    std::unordered_map<pddl::State, int, pddl::StateHash> known;
    std::deque<Node> nodes;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
    std::uint64_t seq = 0;
    std::uint64_t stored_atom_ints = 0;

    auto push_state = [&](pddl::State state, int parent, int action) {
        auto [it, inserted] = known.emplace(std::move(state), static_cast<int>(nodes.size()));
        if (!inserted)
            return;
        for (const pddl::Atom &a : it->first.atoms)
            stored_atom_ints += 2 + a.args.size();
        nodes.push_back(Node{&it->first, parent, action});
        ++result.stats.generated;
        ++result.stats.evaluations;
        open.push(OpenEntry{h(it->first), seq++, static_cast<int>(nodes.size()) - 1});
    };

    push_state(task.init, -1, -1);

    auto extract_plan = [&](int node) {
        std::vector<pddl::GroundAction> steps;
        while (nodes[node].parent >= 0) {
            steps.push_back(ground[nodes[node].action]);
            node = nodes[node].parent;
        }
        std::reverse(steps.begin(), steps.end());
        return Plan{std::move(steps)};
    };

    while (!open.empty()) {
        if (elapsed() > budget.wall_seconds) {
            result.reason = UnsolvedReason::timeout;
            break;
        }
        if (detail::memory_estimate(stored_atom_ints, nodes.size()) > budget.max_memory_bytes) {
            result.reason = UnsolvedReason::memory;
            break;
        }
        OpenEntry top = open.top();
        open.pop();
        const Node &node = nodes[top.node];
        if (pddl::is_goal(*node.state, task.goal)) {
            result.solved = true;
            result.plan = extract_plan(top.node);
            break;
        }
        if (result.stats.expansions >= budget.max_expansions) {
            result.reason = UnsolvedReason::expansions;
            break;
        }
        ++result.stats.expansions;
        for (auto &succ : pddl::successors(*node.state, ground)) {
            int action_index = static_cast<int>(succ.action - ground.data());
            push_state(std::move(succ.state), top.node, action_index);
        }
    }
    result.stats.wall_seconds = elapsed();
    return result;
}

struct PlanCheck {
    bool valid = true;
    std::size_t failure_index = 0; // first bad step, or plan length when
                                   // the final state misses the goal
};

inline PlanCheck validate_plan(const pddl::LiftedTask &task, const Plan &plan) {
    pddl::State current = task.init;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        auto next = pddl::apply(plan.steps[i], current);
        if (!next)
            return PlanCheck{false, i};
        current = std::move(*next);
    }
    if (!pddl::is_goal(current, task.goal))
        return PlanCheck{false, plan.steps.size()};
    return PlanCheck{};
}

// One action per line: "(name arg1 arg2 ...)".
inline std::string format_plan(const Plan &plan, const pddl::LiftedTask &task) {
    std::string out;
    for (const auto &step : plan.steps)
        out += pddl::format_action(step, task) + "\n";
    return out;
}

} // namespace wlf::search
