#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/pddl/model.hpp"

namespace wlf::pddl {

inline constexpr std::uint64_t kDefaultGroundingCap = 1'000'000;

// Predicates that appear in no schema's add- or delete-effects.
inline std::vector<bool> static_predicate_mask(const DomainDef &domain) {
    std::vector<bool> is_static(domain.predicates.size(), true);
    for (const ActionSchema &schema : domain.schemata) {
        for (const AtomTemplate &eff : schema.add_effects)
            is_static[eff.predicate] = false;
        for (const AtomTemplate &eff : schema.delete_effects)
            is_static[eff.predicate] = false;
    }
    return is_static;
}

inline std::set<std::string> detect_static_predicates(const DomainDef &domain) {
    std::set<std::string> names;
    std::vector<bool> mask = static_predicate_mask(domain);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
            names.insert(domain.predicates[i].name);
    return names;
}

namespace detail {

inline Atom bind_template(const AtomTemplate &tmpl, const std::vector<int> &binding,
                          const LiftedTask &task) {
    Atom atom;
    atom.predicate = tmpl.predicate;
    atom.args.reserve(tmpl.args.size());
    for (const Term &term : tmpl.args) {
        if (term.param >= 0) {
            atom.args.push_back(binding[term.param]);
        } else {
            int obj = task.object_index(term.constant);
            if (obj < 0)
                throw ValidationError("undeclared constant " + term.constant);
            atom.args.push_back(obj);
        }
    }
    return atom;
}

} // namespace detail

// Typed Cartesian enumeration of all schema bindings. Actions whose
// static preconditions do not hold in init are dropped; enumeration is
// in (schema name, lexicographic binding) order.
inline std::vector<GroundAction> ground_actions(const LiftedTask &task,
                                                std::uint64_t cap = kDefaultGroundingCap) {
    const DomainDef &domain = task.domain;
    std::vector<bool> is_static = static_predicate_mask(domain);
    std::vector<GroundAction> result;

    for (const ActionSchema &schema : domain.schemata) {
        std::vector<std::vector<int>> candidates(schema.parameters.size());
        for (std::size_t p = 0; p < schema.parameters.size(); ++p)
            for (std::size_t o = 0; o < task.objects.size(); ++o)
                if (domain.types.is_subtype(task.object_types[o], schema.parameters[p].type))
                    candidates[p].push_back(static_cast<int>(o));

        bool exhausted = false;
        for (const auto &c : candidates)
            if (c.empty())
                exhausted = true;
        if (exhausted)
            continue;

        std::vector<std::size_t> odometer(schema.parameters.size(), 0);
        for (;;) {
            std::vector<int> binding(schema.parameters.size());
            for (std::size_t p = 0; p < binding.size(); ++p)
                binding[p] = candidates[p][odometer[p]];

            GroundAction action;
            action.schema = schema.name;
            action.binding = binding;
            bool statically_applicable = true;
            std::vector<Atom> pre, add, del;
            for (const AtomTemplate &tmpl : schema.precondition) {
                Atom atom = detail::bind_template(tmpl, binding, task);
                if (is_static[atom.predicate] && !task.init.contains(atom)) {
                    statically_applicable = false;
                    break;
                }
                pre.push_back(std::move(atom));
            }
            if (statically_applicable) {
                for (const AtomTemplate &tmpl : schema.add_effects)
                    add.push_back(detail::bind_template(tmpl, binding, task));
                for (const AtomTemplate &tmpl : schema.delete_effects)
                    del.push_back(detail::bind_template(tmpl, binding, task));
                std::sort(pre.begin(), pre.end());
                pre.erase(std::unique(pre.begin(), pre.end()), pre.end());
                std::sort(add.begin(), add.end());
                add.erase(std::unique(add.begin(), add.end()), add.end());
                std::sort(del.begin(), del.end());
                del.erase(std::unique(del.begin(), del.end()), del.end());
                // PDDL add-wins semantics: an atom both added and deleted
                // stays added, keeping add and del disjoint.
                std::vector<Atom> del_only;
                std::set_difference(del.begin(), del.end(), add.begin(), add.end(),
                                    std::back_inserter(del_only));
                action.precondition = std::move(pre);
                action.add = std::move(add);
                action.del = std::move(del_only);
                result.push_back(std::move(action));
                if (result.size() > cap)
                    throw ResourceError("grounding cap exceeded (cap=" + std::to_string(cap) +
                                        ") while grounding schema " + schema.name);
            }

            std::size_t p = odometer.size();
            while (p > 0) {
                --p;
                if (++odometer[p] < candidates[p].size())
                    break;
                odometer[p] = 0;
                if (p == 0) {
                    exhausted = true;
                    break;
                }
            }
            if (exhausted || odometer.empty())
                break;
        }
    }
    return result;
}

} // namespace wlf::pddl
