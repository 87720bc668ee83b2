#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlf/errors.hpp"

namespace wlf::pddl {

struct PredicateSchema {
    std::string name;
    int arity = 0;

    auto operator<=>(const PredicateSchema &) const = default;
};

// Single-inheritance type tree rooted at "object" (id 0).
struct TypeTable {
    std::vector<std::string> names{"object"};
    std::vector<int> parents{-1};

    int find(const std::string &name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name)
                return static_cast<int>(i);
        return -1;
    }

    int find_or_add(const std::string &name, int parent = 0) {
        int id = find(name);
        if (id >= 0)
            return id;
        names.push_back(name);
        parents.push_back(parent);
        return static_cast<int>(names.size()) - 1;
    }

    bool is_subtype(int sub, int super) const {
        while (sub >= 0) {
            if (sub == super)
                return true;
            sub = parents[sub];
        }
        return false;
    }
};

// Ground proposition P(o1,...,ok). Predicate and object ids are assigned
// in lexicographic name order, so the derived ordering below is the
// canonical (predicate name, argument names) order.
struct Atom {
    int predicate = -1;
    std::vector<int> args;

    auto operator<=>(const Atom &) const = default;
};

// Argument slot of a schema atom: schema parameter (param >= 0) or a
// domain constant referenced by name.
struct Term {
    int param = -1;
    std::string constant;
};

struct AtomTemplate {
    int predicate = -1;
    std::vector<Term> args;
};

struct Parameter {
    std::string name;
    int type = 0;
};

struct ActionSchema {
    std::string name;
    std::vector<Parameter> parameters;
    std::vector<AtomTemplate> precondition;
    std::vector<AtomTemplate> add_effects;
    std::vector<AtomTemplate> delete_effects;
};

struct DomainDef {
    std::string name;
    std::vector<std::string> requirements;
    TypeTable types;
    std::vector<std::string> constants;
    std::vector<int> constant_types;
    std::vector<PredicateSchema> predicates; // sorted by name
    std::vector<ActionSchema> schemata;      // sorted by name

    int predicate_index(const std::string &pname) const {
        for (std::size_t i = 0; i < predicates.size(); ++i)
            if (predicates[i].name == pname)
                return static_cast<int>(i);
        return -1;
    }

    int max_arity() const {
        int m = 0;
        for (const auto &p : predicates)
            m = std::max(m, p.arity);
        return m;
    }
};

// Set of propositions in canonical sorted order.
struct State {
    std::vector<Atom> atoms;

    static State of(std::vector<Atom> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return State{std::move(v)};
    }

    bool contains(const Atom &a) const {
        return std::binary_search(atoms.begin(), atoms.end(), a);
    }

    std::size_t size() const {return atoms.size();}

    auto operator<=>(const State &) const = default;
};

struct StateHash {
    std::size_t operator()(const State &s) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        for (const Atom &a : s.atoms) {
            mix(static_cast<std::uint64_t>(a.predicate) + 0x9e3779b9ull);
            for (int arg : a.args)
                mix(static_cast<std::uint64_t>(arg) + 1);
        }
        return static_cast<std::size_t>(h);
    }
};

struct GroundAction {
    std::string schema;
    std::vector<int> binding;
    std::vector<Atom> precondition; // sorted
    std::vector<Atom> add;          // sorted
    std::vector<Atom> del;          // sorted; disjoint from add
};

struct LiftedTask {
    std::string name;
    DomainDef domain;
    std::vector<std::string> objects; // sorted; domain constants included
    std::vector<int> object_types;
    State init;
    State goal;

    int object_index(const std::string &oname) const {
        auto it = std::lower_bound(objects.begin(), objects.end(), oname);
        if (it == objects.end() || *it != oname)
            return -1;
        return static_cast<int>(it - objects.begin());
    }
};

inline bool is_goal(const State &s, const State &goal) {
    return std::includes(s.atoms.begin(), s.atoms.end(),
                         goal.atoms.begin(), goal.atoms.end());
}

inline bool applicable(const GroundAction &a, const State &s) {
    return std::includes(s.atoms.begin(), s.atoms.end(),
                         a.precondition.begin(), a.precondition.end());
}

// Successor state (s \ del) u add, or nullopt when the precondition
// does not hold. Inapplicability is a value, not an error.
inline std::optional<State> apply(const GroundAction &a, const State &s) {
    if (!applicable(a, s))
        return std::nullopt;
    std::vector<Atom> without;
    without.reserve(s.atoms.size());
    std::set_difference(s.atoms.begin(), s.atoms.end(),
                        a.del.begin(), a.del.end(), std::back_inserter(without));
    std::vector<Atom> result;
    result.reserve(without.size() + a.add.size());
    std::set_union(without.begin(), without.end(),
                   a.add.begin(), a.add.end(), std::back_inserter(result));
    return State{std::move(result)};
}

struct Successor {
    const GroundAction *action = nullptr;
    State state;
};

// All applicable actions in the canonical grounding order.
inline std::vector<Successor> successors(const State &s, const std::vector<GroundAction> &ground) {
    std::vector<Successor> result;
    for (const GroundAction &a : ground)
        if (auto next = apply(a, s))
            result.push_back(Successor{&a, std::move(*next)});
    return result;
}

inline std::string format_atom(const Atom &a, const LiftedTask &task) {
    std::string out = "(" + task.domain.predicates[a.predicate].name;
    for (int arg : a.args)
        out += " " + task.objects[arg];
    out += ")";
    return out;
}

inline std::string format_action(const GroundAction &a, const LiftedTask &task) {
    std::string out = "(" + a.schema;
    for (int obj : a.binding)
        out += " " + task.objects[obj];
    out += ")";
    return out;
}

} // namespace wlf::pddl
