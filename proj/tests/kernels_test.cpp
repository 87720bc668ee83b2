#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wlf/kernels/colour_table.hpp"
#include "wlf/kernels/config.hpp"
#include "wlf/kernels/refine.hpp"

using namespace wlf;
using namespace wlf::kernels;
using wlf::ilg::LabelledGraph;

namespace {

KernelConfig cfg(Algorithm a, int l, HashMode h = HashMode::multiset) {
    KernelConfig c;
    c.algorithm = a;
    c.iterations = l;
    c.hash = h;
    return c;
}

Embedding embed_with_collection(const LabelledGraph &target,
                                const std::vector<LabelledGraph> &training,
                                const KernelConfig &config) {
    auto [table, index] = collect_colours(training, config);
    return embed(target, table, index);
}

} // namespace

TEST(Wl, ZeroIterationsReturnsInitialFeatures) {
    LabelledGraph g = test::make_graph({2, 5, 5}, {{1, 0, 1}}, 7, 1);
    ColourTable table(cfg(Algorithm::wl, 0), 7, 1);
    ColourMultiset out = wl_refine(g, table, 0, HashMode::multiset, true);
    auto counts = out.counts();
    EXPECT_EQ(counts.size(), 2u);
    EXPECT_EQ(counts[2], 1);
    EXPECT_EQ(counts[5], 2);
    EXPECT_EQ(table.entry_count(), 0u);
}

TEST(Wl, HandExecutedSingleEdge) {
    // Two nodes with feature 5 joined by a label-1 edge, L=1, multiset:
    // two copies of colour 5, two copies of hash(5, {(5,1)}).
    LabelledGraph g = test::make_graph({5, 5}, {{0, 1, 1}}, 7, 1);
    ColourTable table(cfg(Algorithm::wl, 1), 7, 1);
    ColourMultiset out = wl_refine(g, table, 1, HashMode::multiset, true);
    ASSERT_EQ(table.entry_count(), 1u);
    ColourId refined = 7; // first id above the alphabet
    EXPECT_EQ(table.entry(refined).own, 5);
    EXPECT_EQ(table.entry(refined).pairs,
              (std::vector<std::pair<ColourId, int>>{{5, 1}}));
    auto counts = out.counts();
    EXPECT_EQ(counts[5], 2);
    EXPECT_EQ(counts[refined], 2);
    EXPECT_EQ(out.colours.size(), 4u);
}

TEST(Wl, StarCentresSplitOnlyUnderMultisetHash) {
    LabelledGraph star5 = test::make_star(5);
    LabelledGraph star6 = test::make_star(6);

    ColourTable mset_table(cfg(Algorithm::wl, 1), 2, 1);
    RefineTrace t5, t6;
    wl_refine(star5, mset_table, 1, HashMode::multiset, true, &t5);
    wl_refine(star6, mset_table, 1, HashMode::multiset, true, &t6);
    EXPECT_NE(t5.iterations[1][0], t6.iterations[1][0]); // centres differ
    EXPECT_EQ(t5.iterations[1][1], t6.iterations[1][1]); // leaves agree

    ColourTable set_table(cfg(Algorithm::wl, 1, HashMode::set), 2, 1);
    RefineTrace s5, s6;
    wl_refine(star5, set_table, 1, HashMode::set, true, &s5);
    wl_refine(star6, set_table, 1, HashMode::set, true, &s6);
    EXPECT_EQ(s5.iterations[1][0], s6.iterations[1][0]); // identical set summaries
}

TEST(Wl, CountConservationInLearningMode) {
    test::Lcg rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        LabelledGraph g = test::random_ilg(rng);
        int L = 1 + static_cast<int>(rng.below(4));
        ColourTable table(cfg(Algorithm::wl, L), g.alphabet_size, g.max_label);
        ColourMultiset out = wl_refine(g, table, L, HashMode::multiset, true);
        EXPECT_EQ(out.colours.size(), (L + 1) * g.node_count());
    }
}

TEST(Wl, RefinementMonotonicity) {
    test::Lcg rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        LabelledGraph g = test::random_ilg(rng);
        ColourTable table(cfg(Algorithm::wl, 3), g.alphabet_size, g.max_label);
        RefineTrace trace;
        wl_refine(g, table, 3, HashMode::multiset, true, &trace);
        for (std::size_t l = 1; l < trace.iterations.size(); ++l)
            for (std::size_t u = 0; u < g.node_count(); ++u)
                for (std::size_t v = u + 1; v < g.node_count(); ++v)
                    if (trace.iterations[l][u] == trace.iterations[l][v])
                        EXPECT_EQ(trace.iterations[l - 1][u], trace.iterations[l - 1][v]);
    }
}

TEST(Wl, SetModeIsACoarseningOfMultisetMode) {
    test::Lcg rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        LabelledGraph g = test::random_ilg(rng);
        ColourTable mset_table(cfg(Algorithm::wl, 3), g.alphabet_size, g.max_label);
        ColourTable set_table(cfg(Algorithm::wl, 3, HashMode::set), g.alphabet_size, g.max_label);
        RefineTrace mset_trace, set_trace;
        wl_refine(g, mset_table, 3, HashMode::multiset, true, &mset_trace);
        wl_refine(g, set_table, 3, HashMode::set, true, &set_trace);
        for (std::size_t l = 0; l < mset_trace.iterations.size(); ++l)
            for (std::size_t u = 0; u < g.node_count(); ++u)
                for (std::size_t v = u + 1; v < g.node_count(); ++v)
                    if (mset_trace.iterations[l][u] == mset_trace.iterations[l][v])
                        EXPECT_EQ(set_trace.iterations[l][u], set_trace.iterations[l][v]);
    }
}

TEST(TwoWl, TwoNodesNoEdgeAtLevelZero) {
    LabelledGraph g = test::make_graph({1, 1}, {}, 2, 1);
    ColourTable table(cfg(Algorithm::two_wl, 0), 2, 1);
    ColourMultiset out = two_wl_refine(g, table, 0, HashMode::multiset, true);
    // Four ordered pairs including both diagonals, all (f, f, bottom).
    EXPECT_EQ(out.colours.size(), 4u);
    EXPECT_EQ(out.counts().size(), 1u);
    EXPECT_EQ(table.entry_count(), 1u);
}

TEST(TwoWl, EdgeLabelEntersInitialPairColour) {
    LabelledGraph g = test::make_graph({1, 1}, {{0, 1, 1}}, 2, 1);
    ColourTable table(cfg(Algorithm::two_wl, 0), 2, 1);
    ColourMultiset out = two_wl_refine(g, table, 0, HashMode::multiset, true);
    // Diagonals (f,f,bottom) twice; (0,1) and (1,0) share (f,f,1).
    auto counts = out.counts();
    EXPECT_EQ(counts.size(), 2u);
    for (const auto &[colour, count] : counts)
        EXPECT_EQ(count, 2);
}

TEST(TwoWl, IdenticalGraphsGiveIdenticalMultisets) {
    LabelledGraph g = test::make_cycle(5);
    ColourTable table(cfg(Algorithm::two_wl, 0), 2, 1);
    auto a = two_wl_refine(g, table, 0, HashMode::multiset, true);
    auto b = two_wl_refine(g, table, 0, HashMode::multiset, true);
    EXPECT_EQ(a.counts(), b.counts());
}

TEST(TwoWl, DistinguishesTwoTrianglesFromHexagon) {
    LabelledGraph c3x2 = test::make_two_triangles();
    LabelledGraph c6 = test::make_cycle(6);
    ASSERT_EQ(test::triangle_count(c3x2), 2); // structural oracle
    ASSERT_EQ(test::triangle_count(c6), 0);

    bool distinguished = false;
    for (int L = 1; L <= 2 && !distinguished; ++L) {
        KernelConfig c = cfg(Algorithm::two_wl, L);
        Embedding a = embed_with_collection(c3x2, {c3x2, c6}, c);
        Embedding b = embed_with_collection(c6, {c3x2, c6}, c);
        distinguished = !(a == b);
    }
    EXPECT_TRUE(distinguished);
}

TEST(TwoWl, MemoryGuardRefusesLargeGraphs) {
    std::vector<int> features(11, 1);
    LabelledGraph g = test::make_graph(features, {}, 2, 1);
    KernelConfig c = cfg(Algorithm::two_wl, 1);
    c.max_pair_states = 100; // 11*11 = 121 exceeds this
    ColourTable table(c, 2, 1);
    EXPECT_THROW(two_wl_refine(g, table, 1, HashMode::multiset, true), ResourceError);
}

TEST(TwoLwl, SingleNodeHasNoPairStates) {
    LabelledGraph g = test::make_graph({1}, {}, 2, 1);
    ColourTable table(cfg(Algorithm::two_lwl, 1), 2, 1);
    ColourMultiset out = two_lwl_refine(g, table, 1, HashMode::multiset, true);
    EXPECT_TRUE(out.colours.empty());
}

TEST(TwoLwl, UniformTriangleAtLevelZero) {
    LabelledGraph g = test::make_cycle(3);
    ColourTable table(cfg(Algorithm::two_lwl, 0), 2, 1);
    ColourMultiset out = two_lwl_refine(g, table, 0, HashMode::multiset, true);
    EXPECT_EQ(out.colours.size(), 3u);
    EXPECT_EQ(out.counts().size(), 1u); // all three 2-sets identical
}

TEST(TwoLwl, HandExecutedPathPartition) {
    // P3: nodes 0-1-2. 2-sets {0,1} and {1,2} carry an edge, {0,2} does
    // not; after one round the edge pairs still agree and differ from
    // the non-edge pair.
    LabelledGraph g = test::make_graph({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}}, 2, 1);
    ColourTable table(cfg(Algorithm::two_lwl, 1), 2, 1);
    RefineTrace trace;
    two_lwl_refine(g, table, 1, HashMode::multiset, true, &trace);
    ASSERT_EQ(trace.iterations.size(), 2u);
    const auto &l0 = trace.iterations[0]; // order: {0,1}, {0,2}, {1,2}
    const auto &l1 = trace.iterations[1];
    EXPECT_EQ(l0[0], l0[2]);
    EXPECT_NE(l0[0], l0[1]);
    EXPECT_EQ(l1[0], l1[2]);
    EXPECT_NE(l1[0], l1[1]);
}

TEST(TwoLwl, RecordedAnswerOnTrianglePair) {
    // Recorded observation: 2-LWL separates two triangles from the
    // hexagon from L=1 on. A triangle edge 2-set sees a w adjacent to
    // both endpoints (an {edge, edge} neighbour pair) which no C6 edge
    // 2-set can produce.
    LabelledGraph c3x2 = test::make_two_triangles();
    LabelledGraph c6 = test::make_cycle(6);
    for (int L = 0; L <= 4; ++L) {
        KernelConfig c = cfg(Algorithm::two_lwl, L);
        Embedding a = embed_with_collection(c3x2, {c3x2, c6}, c);
        Embedding b = embed_with_collection(c6, {c3x2, c6}, c);
        if (L == 0)
            EXPECT_EQ(a, b) << "level-0 pair colours should not separate the pair";
        else
            EXPECT_NE(a, b) << "2-LWL stopped separating the pair at L=" << L
                            << "; update the recorded answer";
    }
}

TEST(Iwl, SingleNodeIndividualisedColour) {
    LabelledGraph g = test::make_graph({1}, {}, 2, 1);
    ColourTable table(cfg(Algorithm::iwl, 0), 2, 1);
    ColourMultiset out = iwl_refine(g, table, 0, HashMode::multiset, true);
    ASSERT_EQ(out.colours.size(), 1u);
    EXPECT_EQ(out.colours[0], 2); // the (f, individualised) entry, not f itself
    EXPECT_EQ(table.entry_count(), 1u);
}

TEST(Iwl, SeparatesWhatWlCannot) {
    LabelledGraph c3x2 = test::make_two_triangles();
    LabelledGraph c6 = test::make_cycle(6);

    for (int L = 0; L <= 8; ++L) {
        KernelConfig c = cfg(Algorithm::wl, L);
        Embedding a = embed_with_collection(c3x2, {c3x2, c6}, c);
        Embedding b = embed_with_collection(c6, {c3x2, c6}, c);
        EXPECT_EQ(a, b) << "WL unexpectedly separated 2xC3 from C6 at L=" << L;
    }

    KernelConfig c = cfg(Algorithm::iwl, 2);
    Embedding a = embed_with_collection(c3x2, {c3x2, c6}, c);
    Embedding b = embed_with_collection(c6, {c3x2, c6}, c);
    EXPECT_NE(a, b);
}

TEST(Iwl, NormalisationDividesByNodeCount) {
    LabelledGraph c6 = test::make_cycle(6);
    KernelConfig raw = cfg(Algorithm::iwl, 2);
    KernelConfig normalised = cfg(Algorithm::niwl, 2);
    Embedding e_raw = embed_with_collection(c6, {c6}, raw);
    Embedding e_norm = embed_with_collection(c6, {c6}, normalised);
    ASSERT_EQ(e_raw.counts.size(), e_norm.counts.size());
    EXPECT_EQ(e_raw.denom, 1);
    EXPECT_EQ(e_norm.denom, 6);
    EXPECT_EQ(e_raw.counts, e_norm.counts); // same raw counts, scaled denominator
    for (std::size_t i = 0; i < e_norm.counts.size(); ++i)
        EXPECT_DOUBLE_EQ(e_norm.at(i), static_cast<double>(e_raw.counts[i]) / 6.0);
}

TEST(Iwl, SubsumesWlOnRandomCorpus) {
    test::Lcg rng(23);
    int wl_separations = 0;
    for (int trial = 0; trial < 30; ++trial) {
        LabelledGraph g1 = test::random_ilg(rng, 5, 6, 3, 2);
        LabelledGraph g2 = test::random_ilg(rng, 5, 6, 3, 2);
        KernelConfig wl_cfg = cfg(Algorithm::wl, 2);
        Embedding w1 = embed_with_collection(g1, {g1, g2}, wl_cfg);
        Embedding w2 = embed_with_collection(g2, {g1, g2}, wl_cfg);
        if (w1 == w2)
            continue;
        ++wl_separations;
        KernelConfig iwl_cfg = cfg(Algorithm::iwl, 2);
        Embedding i1 = embed_with_collection(g1, {g1, g2}, iwl_cfg);
        Embedding i2 = embed_with_collection(g2, {g1, g2}, iwl_cfg);
        EXPECT_NE(i1, i2);
    }
    EXPECT_GT(wl_separations, 5);
}

TEST(Collect, SingleGraphIndexHasItsDistinctColours) {
    LabelledGraph g = test::make_star(3);
    auto [table, index] = collect_colours({g}, cfg(Algorithm::wl, 1));
    ColourMultiset out = refine(g, table, false);
    std::set<ColourId> distinct(out.colours.begin(), out.colours.end());
    EXPECT_EQ(index.colours, std::vector<ColourId>(distinct.begin(), distinct.end()));
    EXPECT_TRUE(table.frozen());
}

TEST(Collect, DuplicateGraphIsIdempotent) {
    LabelledGraph g = test::make_star(3);
    auto [t1, once] = collect_colours({g}, cfg(Algorithm::wl, 2));
    auto [t2, twice] = collect_colours({g, g}, cfg(Algorithm::wl, 2));
    EXPECT_EQ(once.colours, twice.colours);
}

TEST(Collect, DisjointFeatureGraphsAddUp) {
    LabelledGraph g1 = test::make_graph({1, 1}, {{0, 1, 1}}, 7, 1);
    LabelledGraph g2 = test::make_graph({4, 4, 4}, {{0, 1, 1}, {1, 2, 1}}, 7, 1);
    auto [ta, ia] = collect_colours({g1}, cfg(Algorithm::wl, 1));
    auto [tb, ib] = collect_colours({g2}, cfg(Algorithm::wl, 1));
    auto [tc, ic] = collect_colours({g1, g2}, cfg(Algorithm::wl, 1));
    EXPECT_EQ(ic.size(), ia.size() + ib.size());
}

TEST(Embed, TrainingGraphCountsSumToOutputSize) {
    test::Lcg rng(31);
    LabelledGraph g = test::random_ilg(rng);
    auto [table, index] = collect_colours({g}, cfg(Algorithm::wl, 2));
    Embedding e = embed(g, table, index);
    std::int64_t sum = 0;
    for (auto c : e.counts)
        sum += c;
    EXPECT_EQ(sum, static_cast<std::int64_t>(3 * g.node_count()));
}

TEST(Embed, NovelFeaturesGiveZeroVector) {
    LabelledGraph trained = test::make_graph({1, 1}, {{0, 1, 1}}, 7, 1);
    LabelledGraph novel = test::make_graph({4, 4}, {{0, 1, 1}}, 7, 1);
    auto [table, index] = collect_colours({trained}, cfg(Algorithm::wl, 1));
    Embedding e = embed(novel, table, index);
    for (auto c : e.counts)
        EXPECT_EQ(c, 0);
}

TEST(Embed, UnseenStarCentreContributesNothingUnderMultisetHash) {
    std::vector<LabelledGraph> training;
    for (int k = 1; k <= 5; ++k)
        training.push_back(test::make_star(k));
    LabelledGraph star6 = test::make_star(6);

    auto [mset_table, mset_index] = collect_colours(training, cfg(Algorithm::wl, 1));
    Embedding mset = embed(star6, mset_table, mset_index);
    std::int64_t mset_sum = 0;
    for (auto c : mset.counts)
        mset_sum += c;
    EXPECT_EQ(mset_sum, 13); // 14 colour occurrences minus the unseen centre

    auto [set_table, set_index] =
        collect_colours(training, cfg(Algorithm::wl, 1, HashMode::set));
    Embedding set = embed(star6, set_table, set_index);
    std::int64_t set_sum = 0;
    for (auto c : set.counts)
        set_sum += c;
    EXPECT_EQ(set_sum, 14);

    // The depth-1 leaf colour is seen 6 times under multiset hashing; the
    // shared set-hash colour covers all 7 nodes.
    std::int64_t mset_depth1 = 0, set_depth1 = 0;
    for (std::size_t i = 0; i < mset_index.size(); ++i)
        if (mset_table.depth(mset_index.colours[i]) == 1)
            mset_depth1 += mset.counts[i];
    for (std::size_t i = 0; i < set_index.size(); ++i)
        if (set_table.depth(set_index.colours[i]) == 1)
            set_depth1 += set.counts[i];
    EXPECT_EQ(mset_depth1, 6);
    EXPECT_EQ(set_depth1, 7);
}

TEST(Embed, RequiresFrozenTableAndMatchingAlphabet) {
    LabelledGraph g = test::make_star(2);
    ColourTable learning(cfg(Algorithm::wl, 1), 2, 1);
    FeatureIndex index;
    EXPECT_THROW(embed(g, learning, index), ValidationError);

    auto [table, idx] = collect_colours({g}, cfg(Algorithm::wl, 1));
    LabelledGraph bigger = test::make_graph({9}, {}, 10, 1);
    EXPECT_THROW(embed(bigger, table, idx), ValidationError);
}

TEST(Table, ModeMismatchIsRejected) {
    LabelledGraph g = test::make_star(2);
    ColourTable table(cfg(Algorithm::two_wl, 1), 2, 1);
    EXPECT_THROW(wl_refine(g, table, 1, HashMode::multiset, true), ValidationError);
    ColourTable wl_table(cfg(Algorithm::wl, 2), 2, 1);
    EXPECT_THROW(wl_refine(g, wl_table, 1, HashMode::multiset, true), ValidationError);
    EXPECT_THROW(wl_refine(g, wl_table, 2, HashMode::set, true), ValidationError);
}

TEST(Table, PermutationInvarianceAcrossAlgorithms) {
    test::Lcg rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        LabelledGraph g = test::random_ilg(rng, 5, 8, 3, 2);
        auto perm = test::random_permutation(rng, static_cast<int>(g.node_count()));
        LabelledGraph pg = test::permute_graph(g, perm);
        for (Algorithm a : {Algorithm::wl, Algorithm::iwl, Algorithm::niwl,
                            Algorithm::two_lwl, Algorithm::two_wl}) {
            KernelConfig c = cfg(a, 2);
            auto [table, index] = collect_colours({g}, c);
            EXPECT_EQ(embed(g, table, index), embed(pg, table, index))
                << "algorithm " << to_string(a) << " trial " << trial;
        }
    }
}

TEST(Table, DeterministicSerialisationAcrossRuns) {
    test::Lcg rng(43);
    std::vector<LabelledGraph> graphs;
    for (int i = 0; i < 5; ++i)
        graphs.push_back(test::random_ilg(rng));
    auto [t1, i1] = collect_colours(graphs, cfg(Algorithm::wl, 3));
    auto [t2, i2] = collect_colours(graphs, cfg(Algorithm::wl, 3));
    EXPECT_EQ(t1.to_json().dump(), t2.to_json().dump());
    EXPECT_EQ(i1.to_json().dump(), i2.to_json().dump());
}

TEST(Table, ByteExactRoundTrip) {
    test::Lcg rng(47);
    std::vector<LabelledGraph> graphs;
    for (int i = 0; i < 4; ++i)
        graphs.push_back(test::random_ilg(rng));
    for (Algorithm a : {Algorithm::wl, Algorithm::iwl, Algorithm::two_lwl, Algorithm::two_wl}) {
        auto [table, index] = collect_colours(graphs, cfg(a, 2));
        std::string bytes = table.to_json().dump();
        ColourTable reloaded = ColourTable::from_json(nlohmann::json::parse(bytes));
        EXPECT_EQ(reloaded.to_json().dump(), bytes);
        std::string index_bytes = index.to_json().dump();
        EXPECT_EQ(FeatureIndex::from_json(nlohmann::json::parse(index_bytes)).to_json().dump(),
                  index_bytes);
        // A reloaded table embeds identically.
        EXPECT_EQ(embed(graphs[0], table, index), embed(graphs[0], reloaded, index));
    }
}

TEST(Table, DepthsAreIterationIndices) {
    LabelledGraph g = test::make_star(3);
    auto [table, index] = collect_colours({g}, cfg(Algorithm::wl, 2));
    for (ColourId c : index.colours) {
        EXPECT_GE(table.depth(c), 0);
        EXPECT_LE(table.depth(c), 2);
    }
    EXPECT_EQ(table.depth(1), 0); // alphabet colour
}
