#pragma once

#include "coconsume/graph.hpp"
#include "coconsume/table.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace coconsume {

enum class BackboneMethod { Analytic, MonteCarlo };

/// Parses "analytic" or "montecarlo"; throws IoError otherwise.
BackboneMethod parseBackboneMethod(std::string_view name);
std::string_view toString(BackboneMethod method);

struct SignificanceOptions {
    BackboneMethod method = BackboneMethod::Analytic;
    /// Null draws per (edge, endpoint) in Monte-Carlo mode; at least 1000.
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
};

/// Closed-form disparity p-value (1 - share)^(degree - 1); degree 1 gives 1.
double disparityPValue(double share, std::size_t degree);

/**
 * Monte-Carlo estimate of the same tail probability: `degree - 1` uniform break
 * points cut the unit interval into `degree` shares and the draw counts when the
 * share assigned to the edge is at least `share`. The stream depends only on
 * (seed, stream), never on evaluation order.
 */
double monteCarloPValue(double share, std::size_t degree, std::size_t samples, std::uint64_t seed,
                        std::uint64_t stream);

/**
 * Significance of `edge` as seen from `endpoint` (a node index that must be one
 * of the edge's ends). Throws AnalysisError for a non-positive endpoint strength,
 * a non-positive edge weight, or fewer than 1000 Monte-Carlo samples.
 */
double edgeSignificance(const WeightedCountryGraph &graph, std::size_t edge, std::size_t endpoint,
                        const SignificanceOptions &options = {});

struct EdgeSignificance {
    double pU = 1.0; ///< p-value at the smaller-index endpoint
    double pV = 1.0;
    bool retained = false;
};

/// Projection edges annotated with their significance. Nodes are never removed.
struct BackboneGraph {
    WeightedCountryGraph full;
    std::vector<EdgeSignificance> significance; ///< parallel to full.edges()
    double threshold = 0.05;

    /// Same node set, retained edges only.
    WeightedCountryGraph retainedGraph() const;
    std::size_t retainedCount() const;
};

struct BackboneOptions {
    double significance = 0.05;
    SignificanceOptions test;
};

/// Keeps an edge when its p-value is below the threshold at one endpoint or both.
/// Throws AnalysisError unless 0 < significance < 1.
BackboneGraph extractBackbone(const WeightedCountryGraph &graph, const BackboneOptions &options = {});

/// Columns i, j, weight, p_i, p_j, retained.
Table backboneTable(const BackboneGraph &backbone);

} // namespace coconsume
