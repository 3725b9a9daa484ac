#include "coconsume/graph.hpp"

#include "coconsume/error.hpp"
#include "coconsume/random.hpp"
#include "coconsume/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace coconsume {

WeightedCountryGraph::WeightedCountryGraph(std::vector<std::string> nodes, std::vector<WeightedEdge> edges) {
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&nodes](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
    std::vector<std::size_t> rank(nodes.size());
    nodes_.reserve(nodes.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank[order[r]] = r;
        nodes_.push_back(std::move(nodes[order[r]]));
    }
    for (std::size_t r = 1; r < nodes_.size(); ++r)
        if (nodes_[r] == nodes_[r - 1])
            throw AnalysisError("duplicate node '" + nodes_[r] + "'");

    for (auto &e : edges) {
        if (e.u >= nodes_.size() || e.v >= nodes_.size())
            throw AnalysisError("edge refers to a node outside the graph");
        if (e.u == e.v)
            throw AnalysisError("self-loop on '" + nodes_[rank[e.u]] + "'");
        if (!std::isfinite(e.weight))
            throw AnalysisError("non-finite edge weight");
        e.u = rank[e.u];
        e.v = rank[e.v];
        if (e.u > e.v)
            std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const WeightedEdge &a, const WeightedEdge &b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw AnalysisError("parallel edge " + nodes_[edges[i].u] + "-" + nodes_[edges[i].v]);
    edges_ = std::move(edges);

    adjacency_.resize(nodes_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        adjacency_[edges_[i].u].push_back({edges_[i].v, i});
        adjacency_[edges_[i].v].push_back({edges_[i].u, i});
    }
    for (auto &list : adjacency_)
        std::sort(list.begin(), list.end(), [](const Neighbor &a, const Neighbor &b) { return a.node < b.node; });
}

WeightedCountryGraph WeightedCountryGraph::fromNamedEdges(
    std::vector<std::string> nodes, const std::vector<std::tuple<std::string, std::string, double>> &edges) {
    auto indexOf = [&nodes](const std::string &name) {
        const auto it = std::find(nodes.begin(), nodes.end(), name);
        if (it == nodes.end())
            throw AnalysisError("edge names unknown node '" + name + "'");
        return static_cast<std::size_t>(it - nodes.begin());
    };
    std::vector<WeightedEdge> list;
    list.reserve(edges.size());
    for (const auto &[a, b, w] : edges)
        list.push_back({indexOf(a), indexOf(b), w, std::nullopt});
    return WeightedCountryGraph(std::move(nodes), std::move(list));
}

double WeightedCountryGraph::strength(std::size_t node) const {
    double total = 0.0;
    for (const auto &nb : adjacency_[node])
        total += edges_[nb.edge].weight;
    return total;
}

std::optional<std::size_t> WeightedCountryGraph::nodeIndex(std::string_view code) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), code);
    if (it == nodes_.end() || *it != code)
        return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t WeightedCountryGraph::requireNode(std::string_view code) const {
    if (auto idx = nodeIndex(code))
        return *idx;
    throw AnalysisError("unknown country '" + std::string(code) + "'");
}

std::optional<std::size_t> WeightedCountryGraph::edgeBetween(std::size_t a, std::size_t b) const {
    const auto &list = adjacency_[a];
    const auto it = std::lower_bound(list.begin(), list.end(), b,
                                     [](const Neighbor &n, std::size_t target) { return n.node < target; });
    if (it == list.end() || it->node != b)
        return std::nullopt;
    return it->edge;
}

WeightedCountryGraph WeightedCountryGraph::subgraph(const std::vector<bool> &keep) const {
    std::vector<WeightedEdge> kept;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (keep[i])
            kept.push_back(edges_[i]);
    return WeightedCountryGraph(nodes_, std::move(kept));
}

WeightedCountryGraph WeightedCountryGraph::scaled(double factor) const {
    auto edges = edges_;
    for (auto &e : edges) {
        e.weight *= factor;
        e.exact.reset();
    }
    return WeightedCountryGraph(nodes_, std::move(edges));
}

std::pair<std::vector<std::size_t>, std::size_t> WeightedCountryGraph::components() const {
    DisjointSets sets(nodes_.size());
    for (const auto &e : edges_)
        sets.unite(e.u, e.v);
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> rootLabel(nodes_.size(), unset);
    std::vector<std::size_t> label(nodes_.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto root = sets.find(i);
        if (rootLabel[root] == unset)
            rootLabel[root] = next++;
        label[i] = rootLabel[root];
    }
    return {std::move(label), next};
}

bool WeightedCountryGraph::isConnected() const { return components().second <= 1; }

std::string WeightedCountryGraph::fingerprint() const {
    std::uint64_t h = fnv1a64("");
    for (const auto &e : edges_) {
        h = fnv1a64(nodes_[e.u], h);
        h = fnv1a64("\t", h);
        h = fnv1a64(nodes_[e.v], h);
        h = fnv1a64("\t", h);
        h = fnv1a64(formatDouble(e.weight), h);
        h = fnv1a64("\n", h);
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b)
        return false;
    if (size_[a] < size_[b])
        std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
    return true;
}

} // namespace coconsume
