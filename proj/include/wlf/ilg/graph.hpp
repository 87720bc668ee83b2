#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wlf/errors.hpp"

namespace wlf::ilg {

// Goal-status constants of proposition node features.
enum class GoalStatus : int { achieved_goal = 0, unachieved_goal = 1, achieved_nongoal = 2 };

inline const char *to_string(GoalStatus s) {
    switch (s) {
    case GoalStatus::achieved_goal: return "ag";
    case GoalStatus::unachieved_goal: return "ug";
    case GoalStatus::achieved_nongoal: return "ap";
    }
    return "?";
}

// Categorical node features are packed densely: 0 is the object
// feature, proposition features follow as 1 + 3*predicate + status.
// The alphabet over a domain with |P| predicates has size 1 + 3|P|.
struct NodeFeature {
    static constexpr int object_id = 0;

    static int proposition(int predicate, GoalStatus status) {
        return 1 + 3 * predicate + static_cast<int>(status);
    }

    static bool is_object(int feature) {return feature == object_id;}

    static int predicate_of(int feature) {return (feature - 1) / 3;}

    static GoalStatus status_of(int feature) {
        return static_cast<GoalStatus>((feature - 1) % 3);
    }
};

// Node/edge-labelled graph. Edges are recorded as built (proposition ->
// object for ILGs) and mirrored in the adjacency index, which is what
// refinement traverses: each edge is reachable from both endpoints.
struct LabelledGraph {
    std::vector<int> features;
    struct Edge {
        int src;
        int dst;
        int label;
        auto operator<=>(const Edge &) const = default;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, int>>> adjacency; // (neighbour, label)
    int alphabet_size = 1;
    int max_label = 0;

    int add_node(int feature) {
        features.push_back(feature);
        adjacency.emplace_back();
        return static_cast<int>(features.size()) - 1;
    }

    void add_edge(int src, int dst, int label) {
        edges.push_back(Edge{src, dst, label});
        adjacency[src].emplace_back(dst, label);
        adjacency[dst].emplace_back(src, label);
    }

    std::size_t node_count() const {return features.size();}
};

// Line-based debug format consumed by golden tests: one `n <id>
// <feature>` line per node then one `e <src> <dst> <label>` per edge.
inline std::string export_text(const LabelledGraph &g,
                               const std::function<std::string(int)> &feature_name = nullptr) {
    std::string out;
    for (std::size_t v = 0; v < g.features.size(); ++v) {
        out += "n " + std::to_string(v) + " ";
        out += feature_name ? feature_name(g.features[v]) : std::to_string(g.features[v]);
        out += "\n";
    }
    for (const auto &e : g.edges)
        out += "e " + std::to_string(e.src) + " " + std::to_string(e.dst) + " " +
               std::to_string(e.label) + "\n";
    return out;
}

} // namespace wlf::ilg
