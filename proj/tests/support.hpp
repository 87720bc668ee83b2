#pragma once

#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/ilg/graph.hpp"

namespace wlf::test {

// Deterministic 64-bit mixed congruential generator. Test inputs must
// be reproducible across runs and platforms, so no std random devices.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed * 2654435761u + 1) {}

    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
        std::uint64_t x = state_;
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdull;
        x ^= x >> 33;
        return x;
    }

    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {return bound ? next() % bound : 0;}

    double unit() {return static_cast<double>(next() >> 11) / 9007199254740992.0;}

    bool chance(double p) {return unit() < p;}

private:
    std::uint64_t state_;
};

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw wlf::IoError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string data_file(const std::string &relative) {
    return std::string(WLF_DATA_DIR) + "/" + relative;
}

inline ilg::LabelledGraph make_graph(const std::vector<int> &features,
                                     const std::vector<std::tuple<int, int, int>> &edges,
                                     int alphabet_size, int max_label) {
    ilg::LabelledGraph g;
    g.alphabet_size = alphabet_size;
    g.max_label = max_label;
    for (int f : features)
        g.add_node(f);
    for (auto [src, dst, label] : edges)
        g.add_edge(src, dst, label);
    return g;
}

// Star K(1,k): centre node 0 plus k leaves, uniform feature, label 1.
inline ilg::LabelledGraph make_star(int k, int feature = 1) {
    ilg::LabelledGraph g;
    g.alphabet_size = feature + 1;
    g.max_label = 1;
    g.add_node(feature);
    for (int i = 1; i <= k; ++i) {
        g.add_node(feature);
        g.add_edge(0, i, 1);
    }
    return g;
}

inline ilg::LabelledGraph make_cycle(int n, int feature = 1) {
    ilg::LabelledGraph g;
    g.alphabet_size = feature + 1;
    g.max_label = 1;
    for (int i = 0; i < n; ++i)
        g.add_node(feature);
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n, 1);
    return g;
}

inline ilg::LabelledGraph make_two_triangles(int feature = 1) {
    return make_graph({feature, feature, feature, feature, feature, feature},
                      {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}},
                      feature + 1, 1);
}

// Counts unordered node triples that are pairwise adjacent.
inline int triangle_count(const ilg::LabelledGraph &g) {
    int n = static_cast<int>(g.node_count());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto &e : g.edges) {
        adj[e.src][e.dst] = true;
        adj[e.dst][e.src] = true;
    }
    int count = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (adj[i][j] && adj[j][k] && adj[i][k])
                    ++count;
    return count;
}

// Random graph in ILG shape: object nodes plus proposition nodes whose
// edge labels enumerate argument positions 1..arity.
inline ilg::LabelledGraph random_ilg(Lcg &rng, int max_objects = 8, int max_props = 12,
                                     int max_predicates = 4, int max_arity = 3) {
    int n_objects = 1 + static_cast<int>(rng.below(max_objects));
    int n_predicates = 1 + static_cast<int>(rng.below(max_predicates));
    std::vector<int> arity(n_predicates);
    for (int p = 0; p < n_predicates; ++p)
        arity[p] = static_cast<int>(rng.below(max_arity + 1));

    ilg::LabelledGraph g;
    g.alphabet_size = 1 + 3 * n_predicates;
    g.max_label = max_arity;
    for (int o = 0; o < n_objects; ++o)
        g.add_node(ilg::NodeFeature::object_id);
    int n_props = static_cast<int>(rng.below(max_props + 1));
    for (int i = 0; i < n_props; ++i) {
        int p = static_cast<int>(rng.below(n_predicates));
        auto status = static_cast<ilg::GoalStatus>(rng.below(3));
        int node = g.add_node(ilg::NodeFeature::proposition(p, status));
        for (int pos = 1; pos <= arity[p]; ++pos)
            g.add_edge(node, static_cast<int>(rng.below(n_objects)), pos);
    }
    return g;
}

inline std::vector<int> random_permutation(Lcg &rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(i + 1)]);
    return perm;
}

// Relabels nodes through perm; edge insertion order is also permuted so
// adjacency-list order differs from the original graph.
inline ilg::LabelledGraph permute_graph(const ilg::LabelledGraph &g,
                                        const std::vector<int> &perm) {
    ilg::LabelledGraph out;
    out.alphabet_size = g.alphabet_size;
    out.max_label = g.max_label;
    out.features.resize(g.node_count());
    out.adjacency.resize(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        out.features[perm[v]] = g.features[v];
    std::vector<ilg::LabelledGraph::Edge> edges = g.edges;
    std::reverse(edges.begin(), edges.end());
    for (const auto &e : edges)
        out.add_edge(perm[e.src], perm[e.dst], e.label);
    return out;
}

} // namespace wlf::test
