#include "coconsume/backbone.hpp"
#include "coconsume/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace coconsume;

namespace {

WeightedCountryGraph star(const std::vector<double> &weights) {
    std::vector<std::string> nodes{"HUB"};
    std::vector<std::tuple<std::string, std::string, double>> edges;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        nodes.push_back(syntheticCountryCode(i));
        edges.emplace_back("HUB", nodes.back(), weights[i]);
    }
    return WeightedCountryGraph::fromNamedEdges(nodes, edges);
}

WeightedCountryGraph uniformK4() {
    return WeightedCountryGraph::fromNamedEdges({"AAA", "BBB", "CCC", "DDD"},
                                                {{"AAA", "BBB", 1}, {"AAA", "CCC", 1}, {"AAA", "DDD", 1},
                                                 {"BBB", "CCC", 1}, {"BBB", "DDD", 1}, {"CCC", "DDD", 1}});
}

} // namespace

TEST(DisparityPValue, ClosedForm) {
    EXPECT_NEAR(disparityPValue(0.9, 2), 0.1, 1e-15);
    EXPECT_NEAR(disparityPValue(0.9, 3), 0.01, 1e-15);
    EXPECT_EQ(disparityPValue(0.3, 1), 1.0);
    EXPECT_EQ(disparityPValue(1.0, 1), 1.0);
    EXPECT_NEAR(disparityPValue(1.0 / 3.0, 3), 4.0 / 9.0, 1e-15);
}

TEST(MonteCarloPValue, AgreesWithClosedForm) {
    for (std::size_t k : {2u, 3u, 5u})
        for (double share : {0.1, 0.4, 0.9})
            EXPECT_NEAR(monteCarloPValue(share, k, 100000, 3, k * 17), disparityPValue(share, k), 0.01)
                << "k=" << k << " share=" << share;
    EXPECT_EQ(monteCarloPValue(0.5, 1, 1000, 0, 0), 1.0);
}

TEST(MonteCarloPValue, StreamsAreReproducible) {
    EXPECT_EQ(monteCarloPValue(0.3, 4, 5000, 9, 2), monteCarloPValue(0.3, 4, 5000, 9, 2));
    EXPECT_NE(monteCarloPValue(0.3, 4, 5000, 9, 2), monteCarloPValue(0.3, 4, 5000, 9, 3));
    EXPECT_THROW(monteCarloPValue(0.3, 4, 999, 9, 2), AnalysisError);
}

TEST(EdgeSignificance, Validation) {
    const auto g = star({1, 2, 3});
    EXPECT_THROW(edgeSignificance(g, 0, g.requireNode("AAC")), AnalysisError);
    const auto zero = WeightedCountryGraph::fromNamedEdges({"AAA", "BBB"}, {{"AAA", "BBB", 0.0}});
    EXPECT_THROW(edgeSignificance(zero, 0, 0), AnalysisError);
}

TEST(ExtractBackbone, UniformK4DropsEverything) {
    const auto bb = extractBackbone(uniformK4());
    EXPECT_EQ(bb.retainedCount(), 0u);
    for (const auto &s : bb.significance) {
        EXPECT_NEAR(s.pU, 4.0 / 9.0, 1e-12);
        EXPECT_NEAR(s.pV, 4.0 / 9.0, 1e-12);
    }
    EXPECT_EQ(bb.retainedGraph().nodeCount(), 4u);
}

TEST(ExtractBackbone, StarWithDominantEdge) {
    const auto g = star({1000, 0.001, 0.001, 0.001, 0.001});
    const auto bb = extractBackbone(g);
    const auto dominant = *g.edgeBetween(g.requireNode("HUB"), g.requireNode("AAA"));
    for (std::size_t e = 0; e < g.edgeCount(); ++e) {
        EXPECT_EQ(bb.significance[e].retained, e == dominant);
        if (e != dominant)
            EXPECT_GT(std::max(bb.significance[e].pU, bb.significance[e].pV), 0.99);
    }
}

TEST(ExtractBackbone, ThresholdNearOneKeepsDegreeTwoEdges) {
    const auto g = WeightedCountryGraph::fromNamedEdges(
        {"AAA", "BBB", "CCC", "DDD"}, {{"AAA", "BBB", 1}, {"BBB", "CCC", 2}, {"CCC", "DDD", 3}, {"DDD", "AAA", 4}});
    const auto bb = extractBackbone(g, {.significance = 1.0 - 1e-9, .test = {}});
    EXPECT_EQ(bb.retainedCount(), g.edgeCount());
}

TEST(ExtractBackbone, ThresholdRange) {
    EXPECT_THROW(extractBackbone(uniformK4(), {.significance = 0.0, .test = {}}), AnalysisError);
    EXPECT_THROW(extractBackbone(uniformK4(), {.significance = 1.0, .test = {}}), AnalysisError);
}

TEST(ExtractBackbone, RetentionMonotoneInThreshold) {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::randomConnectedGraph(rng, 3 + rng.below(6), 0.5, 0.01, 5.0);
        std::vector<bool> prev(g.edgeCount(), false);
        for (double t : {0.001, 0.01, 0.05, 0.1, 0.3, 0.6, 0.9}) {
            const auto bb = extractBackbone(g, {.significance = t, .test = {}});
            for (std::size_t e = 0; e < g.edgeCount(); ++e) {
                if (prev[e])
                    EXPECT_TRUE(bb.significance[e].retained);
                prev[e] = bb.significance[e].retained;
            }
        }
    }
}

TEST(ExtractBackbone, ScaleInvariant) {
    Rng rng(8);
    const auto g = oracle::randomConnectedGraph(rng, 7, 0.6);
    const auto a = extractBackbone(g);
    const auto b = extractBackbone(g.scaled(13.5));
    for (std::size_t e = 0; e < g.edgeCount(); ++e) {
        EXPECT_NEAR(a.significance[e].pU, b.significance[e].pU, 1e-12);
        EXPECT_EQ(a.significance[e].retained, b.significance[e].retained);
    }
}

TEST(ExtractBackbone, MonteCarloIsSeedDeterministic) {
    const auto g = star({5, 1, 1, 1});
    BackboneOptions opts;
    opts.test = {BackboneMethod::MonteCarlo, 2000, 42};
    const auto a = extractBackbone(g, opts);
    const auto b = extractBackbone(g, opts);
    for (std::size_t e = 0; e < g.edgeCount(); ++e)
        EXPECT_EQ(a.significance[e].pU, b.significance[e].pU);
}

TEST(BackboneTable, Columns) {
    const auto t = backboneTable(extractBackbone(uniformK4()));
    EXPECT_EQ(t.columns, (std::vector<std::string>{"i", "j", "weight", "p_i", "p_j", "retained"}));
    EXPECT_EQ(t.rows.size(), 6u);
    EXPECT_EQ(parseBackboneMethod("montecarlo"), BackboneMethod::MonteCarlo);
    EXPECT_THROW(parseBackboneMethod("mst"), IoError);
}
