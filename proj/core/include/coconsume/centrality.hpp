#pragma once

#include "coconsume/graph.hpp"
#include "coconsume/table.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace coconsume {

/// Tuning exponent trading tie strength against hop count.
class Alpha {
public:
    static constexpr double kDefault = 0.5;

    Alpha() = default;
    /// Throws AnalysisError for negative or non-finite values.
    explicit Alpha(double value);

    double value() const { return value_; }

private:
    double value_ = kDefault;
};

/// Relative tolerance under which two path costs count as the same length.
inline constexpr double kPathTieTolerance = 1e-12;

bool sameCost(double a, double b);

/// Single-source result of the generalized Dijkstra search.
struct ShortestPaths {
    std::size_t source = 0;
    std::vector<double> distance;                    ///< +inf when unreachable
    std::vector<double> pathCount;                   ///< number of minimum-cost paths
    std::vector<std::vector<std::size_t>> predecessors;
    std::vector<std::size_t> settleOrder;            ///< reachable nodes, nondecreasing distance
};

/// Cost of traversing an edge of weight w: 1 / w^alpha.
double edgeCost(double weight, Alpha alpha);

/// Distances where each edge costs 1 / w^alpha. Throws AnalysisError for a
/// non-positive or non-finite edge weight anywhere in the graph.
ShortestPaths alphaDistances(const WeightedCountryGraph &graph, std::size_t source, Alpha alpha);

struct ClosenessOptions {
    /// Compute within each connected component instead of failing on a
    /// disconnected graph.
    bool componentRestrict = false;
};

struct ClosenessResult {
    std::vector<double> score;
    std::vector<std::size_t> componentSize;
};

/// Inverse sum of alpha-distances. Singleton components score 0.
ClosenessResult closeness(const WeightedCountryGraph &graph, Alpha alpha, const ClosenessOptions &options = {});

/// Sum over unordered pairs {j, k} not containing i of the fraction of
/// minimum-cost j-k paths through i, with no normalization. Unreachable pairs
/// contribute nothing.
std::vector<double> betweenness(const WeightedCountryGraph &graph, Alpha alpha);

struct EigenvectorOptions {
    double tolerance = 1e-12;
    std::size_t maxIterations = 10000;
};

/**
 * Dominant eigenvector of the weighted adjacency matrix by power iteration,
 * scaled to a unit maximum entry. The iteration runs on A + I, which has the
 * same leading eigenvector but keeps bipartite graphs from oscillating.
 * Throws NotConnectedError for a disconnected or empty graph and
 * ConvergenceError (with the last sup-norm residual) when maxIterations runs out.
 */
std::vector<double> eigenvectorCentrality(const WeightedCountryGraph &graph, const EigenvectorOptions &options = {});

struct CentralityScores {
    std::vector<std::string> nodes;
    std::vector<double> closeness;
    std::vector<double> betweenness;
    std::vector<std::size_t> componentSize;
    double alpha = Alpha::kDefault;
    std::string fingerprint;
};

CentralityScores computeCentrality(const WeightedCountryGraph &graph, Alpha alpha,
                                   const ClosenessOptions &options = {});

/// Re-runs the centralities for every alpha in `grid`.
std::vector<CentralityScores> alphaSweep(const WeightedCountryGraph &graph, std::span<const double> grid,
                                         const ClosenessOptions &options = {});

/// Columns country, closeness, betweenness, alpha; rows grouped by alpha in the
/// given order, countries sorted within a group.
Table centralityTable(std::span<const CentralityScores> runs);

} // namespace coconsume
