#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/ilg/graph.hpp"
#include "wlf/pddl/ground.hpp"
#include "wlf/pddl/model.hpp"

namespace wlf::ilg {

enum class StateRepr { partial, complete };

inline const char *to_string(StateRepr r) {
    return r == StateRepr::partial ? "part" : "cmpl";
}

inline int feature_alphabet_size(const pddl::DomainDef &domain) {
    return 1 + 3 * static_cast<int>(domain.predicates.size());
}

// Instance Learning Graph of a state: one node per object, one node per
// proposition of state u goal, labelled by goal status. Edges run from a
// proposition to each argument object, labelled by argument position.
// Under the partial representation, static propositions outside the
// goal are omitted; goal atoms are always kept.
inline LabelledGraph build_ilg(const pddl::LiftedTask &task, const pddl::State &state,
                               StateRepr repr,
                               const std::set<std::string> &static_predicates = {}) {
    const pddl::DomainDef &domain = task.domain;
    std::vector<bool> drop(domain.predicates.size(), false);
    if (repr == StateRepr::partial)
        for (std::size_t p = 0; p < domain.predicates.size(); ++p)
            drop[p] = static_predicates.count(domain.predicates[p].name) > 0;

    // Map each proposition to its goal status; canonical atom order
    // fixes the node ordering regardless of input order.
    std::map<pddl::Atom, GoalStatus> propositions;
    for (const pddl::Atom &a : task.goal.atoms)
        propositions[a] = state.contains(a) ? GoalStatus::achieved_goal
                                            : GoalStatus::unachieved_goal;
    for (const pddl::Atom &a : state.atoms) {
        if (propositions.count(a))
            continue; // already a goal node (status ag)
        if (drop[a.predicate])
            continue;
        propositions[a] = GoalStatus::achieved_nongoal;
    }

    LabelledGraph g;
    g.alphabet_size = feature_alphabet_size(domain);
    g.max_label = domain.max_arity();
    for (std::size_t o = 0; o < task.objects.size(); ++o)
        g.add_node(NodeFeature::object_id);
    for (const auto &[atom, status] : propositions) {
        int node = g.add_node(NodeFeature::proposition(atom.predicate, status));
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            int obj = atom.args[i];
            if (obj < 0 || obj >= static_cast<int>(task.objects.size()))
                throw ValidationError("atom references unknown object index " +
                                      std::to_string(obj));
            g.add_edge(node, obj, static_cast<int>(i) + 1);
        }
    }
    return g;
}

inline std::string feature_name(const pddl::DomainDef &domain, int feature) {
    if (NodeFeature::is_object(feature))
        return "object";
    int predicate = NodeFeature::predicate_of(feature);
    return domain.predicates[predicate].name + ":" +
           to_string(NodeFeature::status_of(feature));
}

} // namespace wlf::ilg
