#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/ilg/graph.hpp"
#include "wlf/kernels/colour_table.hpp"
#include "wlf/kernels/config.hpp"

namespace wlf::kernels {

// Refinement output: the multiset of all colours seen over all
// iterations, with unseen colours already dropped.
struct ColourMultiset {
    std::vector<ColourId> colours;

    std::map<ColourId, std::int64_t> counts() const {
        std::map<ColourId, std::int64_t> m;
        for (ColourId c : colours)
            ++m[c];
        return m;
    }
};

// Per-iteration node (or pair-state) colours, for tests and debugging.
struct RefineTrace {
    std::vector<std::vector<ColourId>> iterations;
};

namespace detail {

inline void check_mode(const ColourTable &table, Algorithm algorithm, int iterations,
                       HashMode hash) {
    const KernelConfig &cfg = table.config();
    bool algorithm_ok = cfg.algorithm == algorithm;
    // iWL and niWL share the same refinement; they differ only in
    // output normalisation.
    if ((cfg.algorithm == Algorithm::iwl && algorithm == Algorithm::niwl) ||
        (cfg.algorithm == Algorithm::niwl && algorithm == Algorithm::iwl))
        algorithm_ok = true;
    if (!algorithm_ok || cfg.iterations != iterations || cfg.hash != hash)
        throw ValidationError("colour table mode mismatch: table is (" +
                              std::string(to_string(cfg.algorithm)) + ", L=" +
                              std::to_string(cfg.iterations) + ", " + to_string(cfg.hash) +
                              "), requested (" + to_string(algorithm) + ", L=" +
                              std::to_string(iterations) + ", " + to_string(hash) + ")");
}

inline void append_seen(std::vector<ColourId> &out, const std::vector<ColourId> &colours) {
    for (ColourId c : colours)
        if (c != kUnseen)
            out.push_back(c);
}

inline void canonicalise(std::vector<std::pair<ColourId, int>> &pairs, HashMode hash) {
    std::sort(pairs.begin(), pairs.end());
    if (hash == HashMode::set)
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

// Shared refinement loop: refine `colour` in place for `iterations` rounds,
// appending every intermediate colouring to `out`.
inline void run_wl_rounds(const ilg::LabelledGraph &g, ColourTable &table, int iterations,
                          HashMode hash, bool learning, std::vector<ColourId> &colour,
                          std::vector<ColourId> &out, RefineTrace *trace) {
    std::size_t n = g.node_count();
    append_seen(out, colour);
    if (trace)
        trace->iterations.push_back(colour);
    std::vector<ColourId> next(n);
    for (int l = 1; l <= iterations; ++l) {
        for (std::size_t v = 0; v < n; ++v) {
            Summary s;
            s.own = colour[v];
            s.pairs.reserve(g.adjacency[v].size());
            for (auto [u, label] : g.adjacency[v])
                s.pairs.emplace_back(colour[u], label);
            canonicalise(s.pairs, hash);
            next[v] = table.get(s, learning);
        }
        colour.swap(next);
        append_seen(out, colour);
        if (trace)
            trace->iterations.push_back(colour);
    }
}

// Sorted distinct labels between two nodes under the symmetric closure.
inline std::vector<std::vector<std::pair<int, int>>> neighbour_labels(
    const ilg::LabelledGraph &g) {
    std::vector<std::vector<std::pair<int, int>>> sorted(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        sorted[v] = g.adjacency[v];
        std::sort(sorted[v].begin(), sorted[v].end());
        sorted[v].erase(std::unique(sorted[v].begin(), sorted[v].end()), sorted[v].end());
    }
    return sorted;
}

} // namespace detail

// Colour refinement with edge labels (1-WL). In learning mode new
// summaries allocate fresh colours; in inference unseen summaries map
// to the sentinel, which keeps propagating as a neighbour colour but is
// excluded from the output.
inline ColourMultiset wl_refine(const ilg::LabelledGraph &g, ColourTable &table, int iterations,
                                HashMode hash, bool learning, RefineTrace *trace = nullptr) {
    detail::check_mode(table, Algorithm::wl, iterations, hash);
    ColourMultiset result;
    std::vector<ColourId> colour(g.features.begin(), g.features.end());
    detail::run_wl_rounds(g, table, iterations, hash, learning, colour, result.colours, trace);
    return result;
}

// Individualised WL: one full WL run per node w, with w's initial
// colour augmented by a reserved symbol outside the feature alphabet.
inline ColourMultiset iwl_refine(const ilg::LabelledGraph &g, ColourTable &table, int iterations,
                                 HashMode hash, bool learning) {
    detail::check_mode(table, Algorithm::iwl, iterations, hash);
    ColourMultiset result;
    std::size_t n = g.node_count();
    for (std::size_t w = 0; w < n; ++w) {
        std::vector<ColourId> colour(g.features.begin(), g.features.end());
        Summary individualised;
        individualised.own = g.features[w];
        individualised.pairs.emplace_back(0, table.tag_individualised());
        colour[w] = table.get(individualised, learning);
        detail::run_wl_rounds(g, table, iterations, hash, learning, colour, result.colours,
                              nullptr);
    }
    return result;
}

// Folklore 2-WL over ordered node pairs. Pair neighbourhoods
// are encoded through auxiliary ordered-pair colours so that every hash
// input stays in the (own, [(colour, label)]) normal form.
inline ColourMultiset two_wl_refine(const ilg::LabelledGraph &g, ColourTable &table,
                                    int iterations, HashMode hash, bool learning,
                                    RefineTrace *trace = nullptr) {
    detail::check_mode(table, Algorithm::two_wl, iterations, hash);
    std::size_t n = g.node_count();
    if (n * n > table.config().max_pair_states)
        throw ResourceError("2-WL pair-state count " + std::to_string(n * n) +
                            " exceeds the configured cap of " +
                            std::to_string(table.config().max_pair_states));

    auto labels = detail::neighbour_labels(g);
    auto labels_between = [&](std::size_t v, std::size_t u) {
        std::vector<int> out;
        for (auto [nbr, label] : labels[v])
            if (nbr == static_cast<int>(u))
                out.push_back(label);
        return out;
    };

    ColourMultiset result;
    std::vector<ColourId> colour(n * n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = 0; u < n; ++u) {
            Summary init;
            init.own = g.features[v];
            init.pairs.emplace_back(g.features[u], table.tag_init_second());
            for (int label : labels_between(v, u))
                init.pairs.emplace_back(label, table.tag_init_edge());
            detail::canonicalise(init.pairs, HashMode::multiset);
            colour[v * n + u] = table.get(init, learning);
        }
    detail::append_seen(result.colours, colour);
    if (trace)
        trace->iterations.push_back(colour);

    std::vector<ColourId> next(n * n);
    for (int j = 1; j <= iterations; ++j) {
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t u = 0; u < n; ++u) {
                Summary s;
                s.own = colour[v * n + u];
                s.pairs.reserve(n);
                for (std::size_t w = 0; w < n; ++w) {
                    Summary ordered;
                    ordered.own = colour[w * n + u];
                    ordered.pairs.emplace_back(colour[v * n + w], table.tag_ordered_second());
                    s.pairs.emplace_back(table.get(ordered, learning), table.tag_pair_ref());
                }
                detail::canonicalise(s.pairs, hash);
                next[v * n + u] = table.get(s, learning);
            }
        colour.swap(next);
        detail::append_seen(result.colours, colour);
        if (trace)
            trace->iterations.push_back(colour);
    }
    return result;
}

// Local 2-WL over unordered node 2-sets; w ranges over the
// neighbour union of the 2-set, excluding its own members so every
// referenced state is a genuine 2-set.
inline ColourMultiset two_lwl_refine(const ilg::LabelledGraph &g, ColourTable &table,
                                     int iterations, HashMode hash, bool learning,
                                     RefineTrace *trace = nullptr) {
    detail::check_mode(table, Algorithm::two_lwl, iterations, hash);
    std::size_t n = g.node_count();
    if (n < 2)
        return ColourMultiset{}; // no 2-sets
    std::uint64_t pair_states = n * (n - 1) / 2;
    if (pair_states > table.config().max_pair_states)
        throw ResourceError("2-LWL pair-state count " + std::to_string(pair_states) +
                            " exceeds the configured cap of " +
                            std::to_string(table.config().max_pair_states));

    // pair_index(v, u) for v < u, row-major over the upper triangle.
    auto pair_index = [n](std::size_t v, std::size_t u) {
        if (v > u)
            std::swap(v, u);
        return v * n - v * (v + 1) / 2 + (u - v - 1);
    };

    auto labels = detail::neighbour_labels(g);
    std::vector<std::vector<int>> neighbours(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (auto [u, label] : labels[v])
            neighbours[v].push_back(u);
        neighbours[v].erase(std::unique(neighbours[v].begin(), neighbours[v].end()),
                            neighbours[v].end());
    }

    ColourMultiset result;
    std::vector<ColourId> colour(pair_states);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = v + 1; u < n; ++u) {
            Summary init;
            init.own = std::min(g.features[v], g.features[u]);
            init.pairs.emplace_back(std::max(g.features[v], g.features[u]),
                                    table.tag_init_second());
            for (auto [nbr, label] : labels[v])
                if (nbr == static_cast<int>(u))
                    init.pairs.emplace_back(label, table.tag_init_edge());
            detail::canonicalise(init.pairs, HashMode::multiset);
            colour[pair_index(v, u)] = table.get(init, learning);
        }
    detail::append_seen(result.colours, colour);
    if (trace)
        trace->iterations.push_back(colour);

    std::vector<ColourId> next(pair_states);
    for (int j = 1; j <= iterations; ++j) {
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t u = v + 1; u < n; ++u) {
                Summary s;
                s.own = colour[pair_index(v, u)];
                std::vector<int> w_union;
                std::set_union(neighbours[v].begin(), neighbours[v].end(),
                               neighbours[u].begin(), neighbours[u].end(),
                               std::back_inserter(w_union));
                for (int w : w_union) {
                    if (w == static_cast<int>(v) || w == static_cast<int>(u))
                        continue;
                    ColourId a = colour[pair_index(w, u)];
                    ColourId b = colour[pair_index(v, w)];
                    Summary unordered;
                    unordered.own = std::min(a, b);
                    unordered.pairs.emplace_back(std::max(a, b), table.tag_unordered_second());
                    s.pairs.emplace_back(table.get(unordered, learning), table.tag_pair_ref());
                }
                detail::canonicalise(s.pairs, hash);
                next[pair_index(v, u)] = table.get(s, learning);
            }
        colour.swap(next);
        detail::append_seen(result.colours, colour);
        if (trace)
            trace->iterations.push_back(colour);
    }
    return result;
}

// Runs the algorithm recorded in the table.
inline ColourMultiset refine(const ilg::LabelledGraph &g, ColourTable &table, bool learning) {
    const KernelConfig &cfg = table.config();
    switch (cfg.algorithm) {
    case Algorithm::wl:
        return wl_refine(g, table, cfg.iterations, cfg.hash, learning);
    case Algorithm::iwl:
    case Algorithm::niwl:
        return iwl_refine(g, table, cfg.iterations, cfg.hash, learning);
    case Algorithm::two_lwl:
        return two_lwl_refine(g, table, cfg.iterations, cfg.hash, learning);
    case Algorithm::two_wl:
        return two_wl_refine(g, table, cfg.iterations, cfg.hash, learning);
    }
    throw ValidationError("unknown algorithm");
}

// Runs the configured algorithm on every training graph with a shared
// learning table, then freezes it. The feature index is the set union
// of all outputs, ordered by colour id.
inline std::pair<ColourTable, FeatureIndex> collect_colours(
    const std::vector<ilg::LabelledGraph> &graphs, const KernelConfig &cfg) {
    int alphabet = 1;
    int max_label = 0;
    for (const auto &g : graphs) {
        alphabet = std::max(alphabet, g.alphabet_size);
        max_label = std::max(max_label, g.max_label);
    }
    ColourTable table(cfg, alphabet, max_label);
    std::set<ColourId> seen;
    for (const auto &g : graphs) {
        ColourMultiset out = refine(g, table, true);
        seen.insert(out.colours.begin(), out.colours.end());
    }
    table.freeze();
    return {std::move(table), FeatureIndex::of({seen.begin(), seen.end()})};
}

// Feature vector of a graph: per-index colour counts. Exact rationals:
// all entries share the denominator (|V| under niWL, 1 otherwise).
struct Embedding {
    std::vector<std::int64_t> counts;
    std::int64_t denom = 1;

    double at(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(denom);
    }

    std::size_t size() const {return counts.size();}

    bool operator==(const Embedding &) const = default;
};

inline Embedding embed(const ilg::LabelledGraph &g, ColourTable &table,
                       const FeatureIndex &index) {
    if (!table.frozen())
        throw ValidationError("embed requires a frozen colour table");
    if (g.alphabet_size > table.alphabet_size() || g.max_label > table.max_label())
        throw ValidationError("graph alphabet does not fit the colour table");
    ColourMultiset out = refine(g, table, false);
    Embedding e;
    e.counts.assign(index.size(), 0);
    for (ColourId c : out.colours) {
        int pos = index.find(c);
        if (pos >= 0)
            ++e.counts[pos];
    }
    if (table.config().algorithm == Algorithm::niwl && g.node_count() > 0)
        e.denom = static_cast<std::int64_t>(g.node_count());
    return e;
}

} // namespace wlf::kernels
