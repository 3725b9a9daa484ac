#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace coconsume {

/// Exact edge weights. Denominators are products of (n_k - 1) terms with n_k no
/// larger than the number of countries, so arbitrary precision is cheap here.
using Rational = boost::multiprecision::cpp_rational;

struct WeightedEdge {
    std::size_t u = 0; ///< smaller node index
    std::size_t v = 0; ///< larger node index
    double weight = 0.0;
    /// Present when the weight came out of the projection.
    std::optional<Rational> exact;
};

struct Neighbor {
    std::size_t node;
    std::size_t edge;
};

/**
 * Undirected weighted graph over country codes.
 *
 * Nodes are kept in lexical order. Every edge is stored once with u < v and the
 * edge list is sorted by (u, v). Self-loops and parallel edges are rejected at
 * construction. Weight positivity is not enforced here: consumers that need it
 * (shortest paths, significance) check it and report the offending edge.
 */
class WeightedCountryGraph {
public:
    WeightedCountryGraph() = default;

    /// `nodes` need not be sorted; edges refer to positions in `nodes` and are
    /// re-indexed to the sorted order.
    WeightedCountryGraph(std::vector<std::string> nodes, std::vector<WeightedEdge> edges);

    /// Convenience for tests and tools: edges given by node names.
    static WeightedCountryGraph fromNamedEdges(std::vector<std::string> nodes,
                                               const std::vector<std::tuple<std::string, std::string, double>> &edges);

    const std::vector<std::string> &nodes() const { return nodes_; }
    const std::vector<WeightedEdge> &edges() const { return edges_; }
    std::size_t nodeCount() const { return nodes_.size(); }
    std::size_t edgeCount() const { return edges_.size(); }

    const std::vector<Neighbor> &neighbors(std::size_t node) const { return adjacency_[node]; }
    std::size_t degree(std::size_t node) const { return adjacency_[node].size(); }
    /// Sum of incident edge weights.
    double strength(std::size_t node) const;

    std::optional<std::size_t> nodeIndex(std::string_view code) const;
    std::size_t requireNode(std::string_view code) const;
    std::optional<std::size_t> edgeBetween(std::size_t a, std::size_t b) const;

    /// Same node set, only the edges whose index satisfies keep[i].
    WeightedCountryGraph subgraph(const std::vector<bool> &keep) const;

    /// Same nodes and edges with every weight multiplied by `factor`.
    WeightedCountryGraph scaled(double factor) const;

    /// Component label per node (labels ordered by smallest member) and the count.
    std::pair<std::vector<std::size_t>, std::size_t> components() const;
    bool isConnected() const;

    /// FNV-1a hash of the canonical "i<TAB>j<TAB>weight" edge list, as hex.
    std::string fingerprint() const;

private:
    std::vector<std::string> nodes_;
    std::vector<WeightedEdge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

/// Union-find over node indices, with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n);
    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);
    std::size_t setCount() const { return sets_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t sets_;
};

} // namespace coconsume
