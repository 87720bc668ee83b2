#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wlf/pddl/ground.hpp"
#include "wlf/pddl/model.hpp"
#include "wlf/pddl/parser.hpp"

using namespace wlf;
using namespace wlf::pddl;

namespace {

DomainDef blocksworld() {
    return parse_domain(test::read_file(test::data_file("blocksworld/domain.pddl")));
}

LiftedTask three_blocks() {
    DomainDef domain = blocksworld();
    return parse_problem(test::read_file(test::data_file("blocksworld/three-blocks.pddl")), domain);
}

Atom atom(const LiftedTask &task, const std::string &pred, std::vector<std::string> args) {
    Atom a;
    a.predicate = task.domain.predicate_index(pred);
    for (const auto &arg : args)
        a.args.push_back(task.object_index(arg));
    return a;
}

// Reference grounder: enumerates every type-consistent binding of every
// schema with plain recursion and naive satisfiability of static
// preconditions, independent of the odometer implementation.
std::set<std::pair<std::string, std::vector<int>>> oracle_bindings(const LiftedTask &task) {
    std::set<std::pair<std::string, std::vector<int>>> out;
    std::vector<bool> is_static = static_predicate_mask(task.domain);
    for (const ActionSchema &schema : task.domain.schemata) {
        std::vector<int> binding(schema.parameters.size(), -1);
        auto rec = [&](auto &&self, std::size_t p) -> void {
            if (p == schema.parameters.size()) {
                for (const AtomTemplate &tmpl : schema.precondition) {
                    Atom a;
                    a.predicate = tmpl.predicate;
                    for (const Term &t : tmpl.args)
                        a.args.push_back(t.param >= 0 ? binding[t.param]
                                                      : task.object_index(t.constant));
                    if (is_static[a.predicate] && !task.init.contains(a))
                        return;
                }
                out.emplace(schema.name, binding);
                return;
            }
            for (std::size_t o = 0; o < task.objects.size(); ++o) {
                if (!task.domain.types.is_subtype(task.object_types[o],
                                                  schema.parameters[p].type))
                    continue;
                binding[p] = static_cast<int>(o);
                self(self, p + 1);
            }
        };
        rec(rec, 0);
    }
    return out;
}

// Naive std::set-based successor computation for cross-checking apply.
std::set<Atom> naive_apply(const GroundAction &a, const std::set<Atom> &s) {
    std::set<Atom> result = s;
    for (const Atom &d : a.del)
        result.erase(d);
    for (const Atom &add : a.add)
        result.insert(add);
    return result;
}

} // namespace

TEST(ParseDomain, BlocksworldCounts) {
    DomainDef domain = blocksworld();
    EXPECT_EQ(domain.name, "blocksworld");
    EXPECT_EQ(domain.predicates.size(), 5u);
    EXPECT_EQ(domain.schemata.size(), 4u);
    EXPECT_EQ(domain.max_arity(), 2);
    EXPECT_GE(domain.predicate_index("on"), 0);
    EXPECT_GE(domain.predicate_index("handempty"), 0);
    EXPECT_EQ(domain.predicates[domain.predicate_index("handempty")].arity, 0);
}

TEST(ParseDomain, EmptyPredicateList) {
    DomainDef domain = parse_domain("(define (domain bare) (:requirements :strips) (:predicates))");
    EXPECT_EQ(domain.predicates.size(), 0u);
    EXPECT_EQ(domain.schemata.size(), 0u);
}

TEST(ParseDomain, UnsupportedRequirementNamesFlag) {
    try {
        parse_domain("(define (domain f) (:requirements :strips :numeric-fluents))");
        FAIL() << "expected UnsupportedRequirementError";
    } catch (const UnsupportedRequirementError &e) {
        EXPECT_EQ(e.flag(), ":numeric-fluents");
        EXPECT_NE(std::string(e.what()).find(":numeric-fluents"), std::string::npos);
    }
}

TEST(ParseDomain, SyntaxErrorCarriesPosition) {
    try {
        parse_domain("(define (domain broken)\n  (:predicates (p ?x");
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.column(), 0);
    }
}

TEST(ParseDomain, RejectsNegativePrecondition) {
    const char *text =
        "(define (domain neg) (:requirements :strips) (:predicates (p ?x))"
        " (:action a :parameters (?x) :precondition (not (p ?x)) :effect (p ?x)))";
    EXPECT_THROW(parse_domain(text), ParseError);
}

TEST(ParseDomain, RejectsConditionalEffect) {
    const char *text =
        "(define (domain cond) (:requirements :strips) (:predicates (p ?x) (q ?x))"
        " (:action a :parameters (?x) :precondition (p ?x)"
        " :effect (when (p ?x) (q ?x))))";
    EXPECT_THROW(parse_domain(text), ParseError);
}

TEST(ParseDomain, CaseInsensitiveIdentifiers) {
    DomainDef domain = parse_domain(
        "(define (domain MiXeD) (:requirements :STRIPS) (:predicates (On ?X ?Y)))");
    EXPECT_EQ(domain.name, "mixed");
    EXPECT_GE(domain.predicate_index("on"), 0);
}

TEST(ParseProblem, ThreeBlocksInstance) {
    LiftedTask task = three_blocks();
    EXPECT_EQ(task.objects.size(), 3u);
    EXPECT_EQ(task.init.size(), 6u);
    EXPECT_EQ(task.goal.size(), 3u);
    std::vector<Atom> unioned;
    std::set_union(task.init.atoms.begin(), task.init.atoms.end(),
                   task.goal.atoms.begin(), task.goal.atoms.end(),
                   std::back_inserter(unioned));
    EXPECT_EQ(unioned.size(), 8u); // (ontable a) is both achieved and required
    EXPECT_TRUE(task.init.contains(atom(task, "on", {"c", "b"})));
    EXPECT_TRUE(task.goal.contains(atom(task, "on", {"b", "a"})));
}

TEST(ParseProblem, EmptyGoalAcceptsEveryState) {
    DomainDef domain = blocksworld();
    LiftedTask task = parse_problem(
        "(define (problem trivial) (:domain blocksworld)"
        " (:objects a - block) (:init (ontable a)) (:goal (and)))", domain);
    EXPECT_EQ(task.goal.size(), 0u);
    EXPECT_TRUE(is_goal(task.init, task.goal));
    EXPECT_TRUE(is_goal(State{}, task.goal));
}

TEST(ParseProblem, ArityMismatch) {
    DomainDef domain = blocksworld();
    EXPECT_THROW(parse_problem("(define (problem bad) (:domain blocksworld)"
                               " (:objects a - block) (:init (on a)) (:goal (and)))", domain),
                 ParseError);
}

TEST(ParseProblem, UndeclaredObjectAndPredicate) {
    DomainDef domain = blocksworld();
    EXPECT_THROW(parse_problem("(define (problem bad) (:domain blocksworld)"
                               " (:objects a - block) (:init (ontable z)) (:goal (and)))", domain),
                 ParseError);
    EXPECT_THROW(parse_problem("(define (problem bad) (:domain blocksworld)"
                               " (:objects a - block) (:init (flying a)) (:goal (and)))", domain),
                 ParseError);
}

TEST(Ground, MatchesOracleEnumeration) {
    LiftedTask task = three_blocks();
    std::vector<GroundAction> ground = ground_actions(task);
    auto expected = oracle_bindings(task);
    EXPECT_EQ(ground.size(), expected.size());
    EXPECT_EQ(ground.size(), 24u); // 3 + 3 + 9 + 9 for three blocks
    for (const GroundAction &a : ground)
        EXPECT_TRUE(expected.count({a.schema, a.binding})) << a.schema;
}

TEST(Ground, ZeroParameterSchema) {
    DomainDef domain = parse_domain(
        "(define (domain zero) (:requirements :strips) (:predicates (done))"
        " (:action finish :parameters () :precondition (and) :effect (done)))");
    LiftedTask task = parse_problem(
        "(define (problem p) (:domain zero) (:init) (:goal (done)))", domain);
    std::vector<GroundAction> ground = ground_actions(task);
    ASSERT_EQ(ground.size(), 1u);
    EXPECT_TRUE(ground[0].binding.empty());
}

TEST(Ground, CapRaisesResourceError) {
    LiftedTask task = three_blocks();
    EXPECT_THROW(ground_actions(task, 10), ResourceError);
}

TEST(Ground, StaticPreconditionFiltering) {
    DomainDef domain = parse_domain(test::read_file(test::data_file("spanner/domain.pddl")));
    LiftedTask task = parse_problem(test::read_file(test::data_file("spanner/walk3.pddl")), domain);
    std::vector<GroundAction> ground = ground_actions(task);
    // Only the two linked location pairs survive the static filter.
    EXPECT_EQ(ground.size(), 2u);
    auto expected = oracle_bindings(task);
    EXPECT_EQ(ground.size(), expected.size());
}

TEST(Ground, InvariantUnderObjectRenaming) {
    DomainDef domain = blocksworld();
    const char *original =
        "(define (problem p) (:domain blocksworld) (:objects a b c - block)"
        " (:init (ontable a) (ontable b) (on c b) (clear a) (clear c) (handempty))"
        " (:goal (on b a)))";
    // a->x, b->a, c->m
    const char *renamed =
        "(define (problem p) (:domain blocksworld) (:objects x a m - block)"
        " (:init (ontable x) (ontable a) (on m a) (clear x) (clear m) (handempty))"
        " (:goal (on a x)))";
    LiftedTask t1 = parse_problem(original, domain);
    LiftedTask t2 = parse_problem(renamed, domain);
    std::map<std::string, std::string> rename{{"a", "x"}, {"b", "a"}, {"c", "m"}};

    auto signature = [](const LiftedTask &task, const std::vector<GroundAction> &ground,
                        const std::map<std::string, std::string> *map) {
        std::set<std::string> sig;
        for (const GroundAction &g : ground) {
            std::string s = g.schema;
            for (int obj : g.binding) {
                std::string name = task.objects[obj];
                s += " " + (map ? map->at(name) : name);
            }
            sig.insert(s);
        }
        return sig;
    };
    EXPECT_EQ(signature(t1, ground_actions(t1), &rename), signature(t2, ground_actions(t2), nullptr));
}

TEST(Apply, UnstackMatchesSetAlgebra) {
    LiftedTask task = three_blocks();
    std::vector<GroundAction> ground = ground_actions(task);
    const GroundAction *unstack_cb = nullptr;
    for (const GroundAction &a : ground)
        if (a.schema == "unstack" && a.binding ==
                std::vector<int>{task.object_index("c"), task.object_index("b")})
            unstack_cb = &a;
    ASSERT_NE(unstack_cb, nullptr);
    auto next = apply(*unstack_cb, task.init);
    ASSERT_TRUE(next.has_value());
    std::set<Atom> expected = naive_apply(
        *unstack_cb, std::set<Atom>(task.init.atoms.begin(), task.init.atoms.end()));
    EXPECT_EQ(std::set<Atom>(next->atoms.begin(), next->atoms.end()), expected);
    EXPECT_TRUE(next->contains(atom(task, "holding", {"c"})));
    EXPECT_FALSE(next->contains(atom(task, "on", {"c", "b"})));
}

TEST(Apply, EmptyEffectsIsIdentity) {
    LiftedTask task = three_blocks();
    GroundAction noop;
    noop.schema = "noop";
    EXPECT_EQ(apply(noop, task.init).value(), task.init);
}

TEST(Apply, InapplicableIsValueNotError) {
    LiftedTask task = three_blocks();
    std::vector<GroundAction> ground = ground_actions(task);
    for (const GroundAction &a : ground)
        if (a.schema == "pick-up" && a.binding == std::vector<int>{task.object_index("b")})
            EXPECT_FALSE(apply(a, task.init).has_value()); // b is not clear
}

TEST(Apply, PureFunctionAndRandomisedSetAlgebra) {
    LiftedTask task = three_blocks();
    std::vector<GroundAction> ground = ground_actions(task);

    // Herbrand base of the three-block task.
    std::vector<Atom> universe;
    for (std::size_t p = 0; p < task.domain.predicates.size(); ++p) {
        int arity = task.domain.predicates[p].arity;
        std::vector<int> args(arity, 0);
        for (;;) {
            Atom a;
            a.predicate = static_cast<int>(p);
            a.args = args;
            universe.push_back(a);
            int k = arity - 1;
            while (k >= 0 && ++args[k] == static_cast<int>(task.objects.size())) {
                args[k] = 0;
                --k;
            }
            if (k < 0)
                break;
        }
    }

    test::Lcg rng(42);
    int applicable_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Atom> atoms;
        for (const Atom &a : universe)
            if (rng.chance(0.4))
                atoms.push_back(a);
        State s = State::of(atoms);
        const GroundAction &a = ground[rng.below(ground.size())];

        auto first = apply(a, s);
        auto second = apply(a, s);
        EXPECT_EQ(first, second); // purity
        std::set<Atom> sset(s.atoms.begin(), s.atoms.end());
        bool naive_applicable = std::all_of(a.precondition.begin(), a.precondition.end(),
                                            [&](const Atom &pre) {return sset.count(pre) > 0;});
        ASSERT_EQ(first.has_value(), naive_applicable);
        if (first) {
            ++applicable_seen;
            std::set<Atom> expected = naive_apply(a, sset);
            EXPECT_EQ(std::set<Atom>(first->atoms.begin(), first->atoms.end()), expected);
        }
    }
    EXPECT_GT(applicable_seen, 50); // the oracle exercised both branches
}

TEST(Successors, NoApplicableActionsYieldsEmptyList) {
    DomainDef domain = blocksworld();
    LiftedTask task = parse_problem(
        "(define (problem stuck) (:domain blocksworld) (:objects a - block)"
        " (:init (holding a) (ontable a)) (:goal (clear a)))", domain);
    // Contrived state: holding a while a is on the table, with pick-up
    // impossible (no handempty) and put-down deleted below.
    std::vector<GroundAction> ground = ground_actions(task);
    State s = State::of({atom(task, "on", {"a", "a"})});
    EXPECT_TRUE(successors(s, ground).empty());
}

TEST(Successors, DeterministicCanonicalOrder) {
    LiftedTask task = three_blocks();
    std::vector<GroundAction> ground = ground_actions(task);
    auto succ = successors(task.init, ground);
    ASSERT_FALSE(succ.empty());
    // unstack(c, b) and pick-up(a) are the only applicable actions.
    EXPECT_EQ(succ.size(), 2u);
    EXPECT_EQ(succ[0].action->schema, "pick-up");
    EXPECT_EQ(succ[1].action->schema, "unstack");
    EXPECT_EQ(successors(task.init, ground)[0].action, succ[0].action);
}

TEST(IsGoal, ThreeBlocksAndDegenerateCases) {
    LiftedTask task = three_blocks();
    EXPECT_FALSE(is_goal(task.init, task.goal));
    EXPECT_TRUE(is_goal(task.goal, task.goal)); // s = g
    EXPECT_TRUE(is_goal(task.init, State{}));   // g is empty
}

TEST(IsGoal, MonotoneUnderGoalShrinkage) {
    LiftedTask task = three_blocks();
    test::Lcg rng(7);
    std::vector<Atom> all = task.init.atoms;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Atom> goal_atoms, state_atoms;
        for (const Atom &a : all) {
            if (rng.chance(0.5))
                state_atoms.push_back(a);
            if (rng.chance(0.3))
                goal_atoms.push_back(a);
        }
        State s = State::of(state_atoms);
        State g = State::of(goal_atoms);
        std::vector<Atom> sub;
        for (const Atom &a : g.atoms)
            if (rng.chance(0.5))
                sub.push_back(a);
        State g_sub = State::of(sub);
        if (is_goal(s, g))
            EXPECT_TRUE(is_goal(s, g_sub));
    }
}

TEST(Statics, BlocksworldHasNone) {
    EXPECT_TRUE(detect_static_predicates(blocksworld()).empty());
}

TEST(Statics, SpannerLinkIsStatic) {
    DomainDef domain = parse_domain(test::read_file(test::data_file("spanner/domain.pddl")));
    EXPECT_EQ(detect_static_predicates(domain), std::set<std::string>{"link"});
}

TEST(Statics, NoSchemataMakesAllStatic) {
    DomainDef domain = parse_domain(
        "(define (domain inert) (:requirements :strips) (:predicates (p ?x) (q)))");
    EXPECT_EQ(detect_static_predicates(domain), (std::set<std::string>{"p", "q"}));
}
