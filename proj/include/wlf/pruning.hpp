#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlf/errors.hpp"
#include "wlf/ilg/graph.hpp"
#include "wlf/kernels/refine.hpp"

namespace wlf::pruning {

// Feature evaluations over the training set: one row per training
// state, one column per feature-index colour, raw counts.
struct EvaluationMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> values; // row-major

    std::int64_t at(std::size_t r, std::size_t c) const {return values[r * cols + c];}

    std::vector<std::int64_t> column(std::size_t c) const {
        std::vector<std::int64_t> out(rows);
        for (std::size_t r = 0; r < rows; ++r)
            out[r] = at(r, c);
        return out;
    }

    std::size_t column_nonzeros(std::size_t c) const {
        std::size_t nnz = 0;
        for (std::size_t r = 0; r < rows; ++r)
            nnz += at(r, c) != 0;
        return nnz;
    }
};

inline EvaluationMatrix evaluation_matrix(const std::vector<ilg::LabelledGraph> &graphs,
                                          kernels::ColourTable &table,
                                          const kernels::FeatureIndex &index) {
    EvaluationMatrix m;
    m.rows = graphs.size();
    m.cols = index.size();
    m.values.reserve(m.rows * m.cols);
    for (const auto &g : graphs) {
        kernels::Embedding e = kernels::embed(g, table, index);
        m.values.insert(m.values.end(), e.counts.begin(), e.counts.end());
    }
    return m;
}

// Feature-to-feature dependencies: feature i depends on feature j when
// j's colour appears in i's hash input (as own colour or neighbour),
// possibly through auxiliary pair colours that are not features
// themselves. Edges always point to strictly shallower colours.
struct DependencyGraph {
    std::vector<std::vector<int>> dependencies; // i -> features i needs
    std::vector<std::vector<int>> dependants;   // j -> features needing j

    static DependencyGraph build(const kernels::ColourTable &table,
                                 const kernels::FeatureIndex &index) {
        DependencyGraph d;
        d.dependencies.resize(index.size());
        d.dependants.resize(index.size());
        for (std::size_t i = 0; i < index.size(); ++i) {
            kernels::ColourId c = index.colours[i];
            if (table.is_feature_colour(c))
                continue;
            std::set<int> deps;
            std::vector<kernels::ColourId> stack{c};
            std::set<kernels::ColourId> visited;
            bool root = true;
            while (!stack.empty()) {
                kernels::ColourId current = stack.back();
                stack.pop_back();
                if (!root) {
                    int pos = index.find(current);
                    if (pos >= 0) {
                        deps.insert(pos);
                        continue; // feature boundary: do not expand further
                    }
                }
                root = false;
                if (table.is_feature_colour(current) || current < 0)
                    continue;
                if (!visited.insert(current).second)
                    continue;
                const kernels::Summary &s = table.entry(current);
                stack.push_back(s.own);
                for (auto [nbr, label] : s.pairs)
                    if (label <= table.max_label() || label == table.tag_ordered_second() ||
                        label == table.tag_unordered_second() || label == table.tag_pair_ref() ||
                        label == table.tag_init_second())
                        stack.push_back(nbr);
            }
            for (int j : deps) {
                d.dependencies[i].push_back(j);
                d.dependants[j].push_back(static_cast<int>(i));
            }
        }
        return d;
    }
};

struct PruneReport {
    std::size_t input_features = 0;
    std::size_t pruned_duplicate = 0;
    std::size_t blocked_by_dependency = 0;
    std::size_t pruned_frequency = 0;
    std::size_t kept = 0;
    int effective_iterations = 0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"input_features", input_features},
                              {"pruned_duplicate", pruned_duplicate},
                              {"blocked_by_dependency", blocked_by_dependency},
                              {"pruned_frequency", pruned_frequency},
                              {"kept", kept},
                              {"effective_iterations", effective_iterations}};
    }
};

struct PruneResult {
    std::vector<int> kept_positions; // ascending
    PruneReport report;
};

namespace detail {

// Positions kept by equivalence pruning under the dependency-closure
// constraint: a feature may be pruned only when a feature with an
// identical evaluation column is kept and no kept feature depends on
// it. Equivalently the kept set is a union of dependency closures, one
// representative per duplicate group; we pick the representatives.
inline std::vector<bool> duplicate_stage(const EvaluationMatrix &m, const DependencyGraph &d) {
    std::size_t n = m.cols;

    // Transitive dependency closure per feature, including itself.
    std::vector<std::set<int>> closure(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> stack{static_cast<int>(i)};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (!closure[i].insert(x).second)
                continue;
            for (int dep : d.dependencies[x])
                stack.push_back(dep);
        }
    }

    std::map<std::vector<std::int64_t>, std::vector<int>> by_column;
    for (std::size_t c = 0; c < n; ++c)
        by_column[m.column(c)].push_back(static_cast<int>(c));

    std::vector<bool> kept(n, false);
    auto keep_with_closure = [&](int member) {
        for (int x : closure[member])
            kept[x] = true;
    };

    // Unique columns can never be pruned; their dependencies follow.
    std::vector<std::vector<int>> groups;
    for (const auto &[column, members] : by_column) {
        if (members.size() == 1)
            keep_with_closure(members[0]);
        else
            groups.push_back(members);
    }

    auto group_hit = [&](const std::vector<int> &group) {
        return std::any_of(group.begin(), group.end(), [&](int m_) {return kept[m_];});
    };

    std::vector<int> open_groups;
    std::uint64_t combinations = 1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (group_hit(groups[g]))
            continue;
        open_groups.push_back(static_cast<int>(g));
        if (combinations < (1u << 20))
            combinations *= groups[g].size();
    }

    auto count_kept = [&](const std::vector<bool> &k) {
        return static_cast<std::size_t>(std::count(k.begin(), k.end(), true));
    };

    if (combinations <= 4096) {
        // Exact: branch over one representative per still-unhit group,
        // minimising the closed kept set. Group count is tiny here.
        std::vector<bool> best;
        std::size_t best_size = n + 1;
        auto rec = [&](auto &&self, std::size_t gi, std::vector<bool> current) -> void {
            while (gi < open_groups.size()) {
                const auto &group = groups[open_groups[gi]];
                bool hit = std::any_of(group.begin(), group.end(),
                                       [&](int m_) {return current[m_];});
                if (!hit)
                    break;
                ++gi;
            }
            if (count_kept(current) >= best_size)
                return; // kept sets only grow along a branch
            if (gi == open_groups.size()) {
                best = current;
                best_size = count_kept(current);
                return;
            }
            for (int member : groups[open_groups[gi]]) {
                std::vector<bool> next = current;
                for (int x : closure[member])
                    next[x] = true;
                self(self, gi + 1, std::move(next));
            }
        };
        rec(rec, 0, kept);
        if (!best.empty())
            kept = best;
    } else {
        // Greedy fixed point for large instances: per group pick the
        // representative with the cheapest marginal closure, lowest
        // colour id on ties; closures may hit later groups.
        for (int gi : open_groups) {
            const auto &group = groups[gi];
            if (group_hit(group))
                continue;
            int best_member = group[0];
            std::size_t best_cost = n + 1;
            for (int member : group) {
                std::size_t cost = 0;
                for (int x : closure[member])
                    cost += !kept[x];
                if (cost < best_cost) {
                    best_cost = cost;
                    best_member = member;
                }
            }
            keep_with_closure(best_member);
        }
    }
    return kept;
}

} // namespace detail

// i-mf pruning: equivalence-based pruning under the dependency
// constraint, then unconditional low-frequency removal. Output order
// follows the input index.
inline PruneResult prune_imf(const EvaluationMatrix &m, const DependencyGraph &d,
                             const kernels::ColourTable &table,
                             const kernels::FeatureIndex &index, double freq = 0.01) {
    if (freq < 0.0 || freq > 1.0)
        throw ValidationError("frequency threshold must lie in [0, 1]");
    if (m.cols != index.size())
        throw ValidationError("evaluation matrix does not match the feature index");

    PruneResult result;
    result.report.input_features = m.cols;

    std::vector<bool> kept = detail::duplicate_stage(m, d);
    std::size_t kept_after_dup = static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
    result.report.pruned_duplicate = m.cols - kept_after_dup;

    // Candidates blocked by the dependency constraint: duplicate-group
    // members beyond one representative that stayed kept.
    std::map<std::vector<std::int64_t>, std::vector<int>> by_column;
    for (std::size_t c = 0; c < m.cols; ++c)
        by_column[m.column(c)].push_back(static_cast<int>(c));
    std::size_t eligible = 0;
    for (const auto &[column, members] : by_column)
        eligible += members.size() - 1;
    result.report.blocked_by_dependency = eligible - result.report.pruned_duplicate;

    // Frequency rule: nonzero in fewer than freq of the training rows.
    double threshold = freq * static_cast<double>(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c) {
        if (!kept[c])
            continue;
        if (static_cast<double>(m.column_nonzeros(c)) < threshold) {
            kept[c] = false;
            ++result.report.pruned_frequency;
        }
    }

    for (std::size_t c = 0; c < m.cols; ++c)
        if (kept[c])
            result.kept_positions.push_back(static_cast<int>(c));
    result.report.kept = result.kept_positions.size();
    for (int pos : result.kept_positions)
        result.report.effective_iterations =
            std::max(result.report.effective_iterations, table.depth(index.colours[pos]));
    return result;
}

inline kernels::FeatureIndex restrict_index(const kernels::FeatureIndex &index,
                                            const std::vector<int> &kept_positions) {
    std::vector<kernels::ColourId> colours;
    colours.reserve(kept_positions.size());
    for (int pos : kept_positions)
        colours.push_back(index.colours[pos]);
    return kernels::FeatureIndex::of(std::move(colours));
}

} // namespace wlf::pruning
