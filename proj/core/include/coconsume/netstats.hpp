#pragma once

#include "coconsume/graph.hpp"
#include "coconsume/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coconsume {

/// Community label per node; labels are 0..k-1 ordered by smallest member.
using Partition = std::vector<std::size_t>;

/// Weighted Newman modularity. An edgeless graph has modularity 0.
double modularity(const WeightedCountryGraph &graph, const Partition &partition);

/**
 * Greedy agglomerative modularity maximization: start from singletons and
 * repeatedly merge the connected pair of communities with the largest positive
 * gain. Equal gains are broken by a seed-dependent ranking of nodes, so the
 * result is a deterministic function of (graph, seed).
 */
Partition detectCommunities(const WeightedCountryGraph &graph, std::uint64_t seed = 0);

enum class AplScope {
    AllComponents,  ///< mean over every reachable unordered pair
    GiantComponent, ///< pairs inside the largest component only
};

AplScope parseAplScope(std::string_view name);

/// Mean hop distance; nullopt when there is no reachable pair.
std::optional<double> averagePathLength(const WeightedCountryGraph &graph, AplScope scope = AplScope::AllComponents);

struct NetworkSummary {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t nonIsolatedNodes = 0;
    double meanDegree = 0.0;
    double meanWeightedDegree = 0.0;
    double modularity = 0.0;
    std::size_t connectedComponents = 0;
    std::optional<double> averagePathLength;
    std::size_t communities = 0;
};

struct SummaryOptions {
    AplScope aplScope = AplScope::AllComponents;
    std::uint64_t seed = 0;
};

/// Throws EmptyGraphError for a graph without nodes.
NetworkSummary summarize(const WeightedCountryGraph &graph, const SummaryOptions &options = {});

struct CategorySummary {
    std::string category;
    NetworkSummary summary;
};

/// Columns category, nodes, edges, degree, weighted_degree, modularity, cc, apl,
/// non_isolated_nodes.
Table netstatsTable(const std::vector<CategorySummary> &rows);

} // namespace coconsume
