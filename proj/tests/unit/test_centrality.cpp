#include "coconsume/centrality.hpp"
#include "coconsume/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace coconsume;

namespace {

using Edges = std::vector<std::tuple<std::string, std::string, double>>;

WeightedCountryGraph graph(std::vector<std::string> nodes, const Edges &edges) {
    return WeightedCountryGraph::fromNamedEdges(std::move(nodes), edges);
}

WeightedCountryGraph path(double ab = 1, double bc = 1) {
    return graph({"AAA", "BBB", "CCC"}, {{"AAA", "BBB", ab}, {"BBB", "CCC", bc}});
}

WeightedCountryGraph triangle() {
    return graph({"AAA", "BBB", "CCC"}, {{"AAA", "BBB", 1}, {"BBB", "CCC", 1}, {"AAA", "CCC", 1}});
}

WeightedCountryGraph cycle4() {
    return graph({"AAA", "BBB", "CCC", "DDD"},
                 {{"AAA", "BBB", 1}, {"BBB", "CCC", 1}, {"CCC", "DDD", 1}, {"DDD", "AAA", 1}});
}

} // namespace

TEST(AlphaTest, Validation) {
    EXPECT_EQ(Alpha().value(), 0.5);
    EXPECT_THROW(Alpha(-0.1), AnalysisError);
    EXPECT_THROW(Alpha(std::nan("")), AnalysisError);
    EXPECT_NO_THROW(Alpha(0.0));
}

TEST(AlphaDistances, SingleEdge) {
    const auto g = graph({"AAA", "BBB"}, {{"AAA", "BBB", 4}});
    EXPECT_DOUBLE_EQ(alphaDistances(g, 0, Alpha(0.5)).distance[1], 0.5);
}

TEST(AlphaDistances, TiedRoutesAreBothCounted) {
    const auto g = graph({"AAA", "BBB", "CCC"}, {{"AAA", "CCC", 1}, {"AAA", "BBB", 4}, {"BBB", "CCC", 4}});
    const auto sp = alphaDistances(g, 0, Alpha(0.5));
    EXPECT_DOUBLE_EQ(sp.distance[2], 1.0);
    EXPECT_EQ(sp.pathCount[2], 2.0);
    EXPECT_EQ(sp.predecessors[2].size(), 2u);
}

TEST(AlphaDistances, AlphaZeroIsHopCount) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::randomConnectedGraph(rng, 2 + rng.below(9), 0.3);
        const auto bfs = oracle::allPairsBfs(g);
        for (std::size_t s = 0; s < g.nodeCount(); ++s) {
            const auto sp = alphaDistances(g, s, Alpha(0.0));
            for (std::size_t t = 0; t < g.nodeCount(); ++t) {
                EXPECT_EQ(sp.distance[t], static_cast<double>(bfs.hops[s][t]));
                EXPECT_EQ(sp.pathCount[t], static_cast<double>(bfs.paths[s][t]));
            }
        }
    }
}

TEST(AlphaDistances, RejectsNonPositiveWeights) {
    const auto g = graph({"AAA", "BBB"}, {{"AAA", "BBB", -1}});
    EXPECT_THROW(alphaDistances(g, 0, Alpha()), AnalysisError);
}

TEST(Closeness, PathUnitWeights) {
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
        const auto c = closeness(path(), Alpha(a)).score;
        EXPECT_DOUBLE_EQ(c[0], 1.0 / 3.0);
        EXPECT_DOUBLE_EQ(c[1], 0.5);
        EXPECT_DOUBLE_EQ(c[2], 1.0 / 3.0);
    }
}

TEST(Closeness, Triangle) {
    for (double v : closeness(triangle(), Alpha()).score)
        EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Closeness, WeightedPath) {
    const auto c = closeness(path(4, 1), Alpha(0.5)).score;
    EXPECT_NEAR(c[0], 0.5, 1e-15);
    EXPECT_NEAR(c[1], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(c[2], 0.4, 1e-15);
}

TEST(Closeness, Disconnected) {
    const auto g = graph({"AAA", "BBB", "CCC", "DDD", "EEE"}, {{"AAA", "BBB", 1}, {"CCC", "DDD", 2}});
    EXPECT_THROW(closeness(g, Alpha()), NotConnectedError);
    const auto r = closeness(g, Alpha(1.0), {.componentRestrict = true});
    EXPECT_DOUBLE_EQ(r.score[0], 1.0);
    EXPECT_DOUBLE_EQ(r.score[2], 2.0);
    EXPECT_EQ(r.score[4], 0.0);
    EXPECT_EQ(r.componentSize, (std::vector<std::size_t>{2, 2, 2, 2, 1}));
}

TEST(Betweenness, Path) {
    const auto b = betweenness(path(), Alpha());
    EXPECT_EQ(b, (std::vector<double>{0, 1, 0}));
}

TEST(Betweenness, FourCycle) {
    for (double v : betweenness(cycle4(), Alpha()))
        EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Betweenness, Triangle) {
    for (double v : betweenness(triangle(), Alpha()))
        EXPECT_EQ(v, 0.0);
}

TEST(Centrality, MatchesPathEnumeration) {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = oracle::randomConnectedGraph(rng, 2 + rng.below(6), 0.4);
        for (double a : {0.0, 0.5, 1.0}) {
            const auto e = oracle::enumeratePaths(oracle::costMatrix(g, a));
            const auto c = closeness(g, Alpha(a)).score;
            const auto b = betweenness(g, Alpha(a));
            const auto ec = e.closeness();
            const auto eb = e.betweenness();
            for (std::size_t i = 0; i < g.nodeCount(); ++i) {
                EXPECT_NEAR(c[i], ec[i], 1e-9);
                EXPECT_NEAR(b[i], eb[i], 1e-9);
            }
        }
    }
}

TEST(Centrality, ScalingWeights) {
    Rng rng(4);
    const auto g = oracle::randomConnectedGraph(rng, 7, 0.4);
    const double factor = 3.0;
    const Alpha alpha(0.7);
    const auto base = computeCentrality(g, alpha);
    const auto scaled = computeCentrality(g.scaled(factor), alpha);
    for (std::size_t i = 0; i < g.nodeCount(); ++i) {
        EXPECT_NEAR(scaled.closeness[i], base.closeness[i] * std::pow(factor, 0.7), 1e-12);
        EXPECT_NEAR(scaled.betweenness[i], base.betweenness[i], 1e-12);
    }
}

TEST(Eigenvector, Star) {
    const auto g = graph({"HUB", "AAA", "BBB", "CCC", "DDD"},
                         {{"HUB", "AAA", 1}, {"HUB", "BBB", 1}, {"HUB", "CCC", 1}, {"HUB", "DDD", 1}});
    const auto v = eigenvectorCentrality(g);
    const auto hub = g.requireNode("HUB");
    EXPECT_DOUBLE_EQ(v[hub], 1.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (i != hub) {
            EXPECT_NEAR(v[i], 0.5, 1e-10);
            EXPECT_LT(v[i], 1.0);
        }
}

TEST(Eigenvector, RegularGraphIsFlat) {
    for (double x : eigenvectorCentrality(cycle4()))
        EXPECT_NEAR(x, 1.0, 1e-10);
}

TEST(Eigenvector, SingleEdge) {
    const auto v = eigenvectorCentrality(graph({"AAA", "BBB"}, {{"AAA", "BBB", 7}}));
    EXPECT_DOUBLE_EQ(v[0], 1.0);
    EXPECT_DOUBLE_EQ(v[1], 1.0);
}

TEST(Eigenvector, Errors) {
    const auto g = graph({"AAA", "BBB", "CCC"}, {{"AAA", "BBB", 1}});
    EXPECT_THROW(eigenvectorCentrality(g), NotConnectedError);
    const auto p = graph({"AAA", "BBB", "CCC", "DDD"}, {{"AAA", "BBB", 1}, {"BBB", "CCC", 3}, {"CCC", "DDD", 1}});
    try {
        eigenvectorCentrality(p, {.tolerance = 1e-15, .maxIterations = 2});
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError &e) {
        EXPECT_GT(e.residual, 0.0);
    }
}

TEST(AlphaSweepTable, RowsGroupedByAlpha) {
    const std::vector<double> grid{0.0, 1.0};
    const auto runs = alphaSweep(path(4, 1), grid);
    const auto t = centralityTable(runs);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"country", "closeness", "betweenness", "alpha"}));
    ASSERT_EQ(t.rows.size(), 6u);
    EXPECT_EQ(std::get<double>(t.rows[0][3]), 0.0);
    EXPECT_EQ(std::get<double>(t.rows[5][3]), 1.0);
}
