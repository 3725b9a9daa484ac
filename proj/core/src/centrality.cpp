#include "coconsume/centrality.hpp"

#include "coconsume/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace coconsume {

Alpha::Alpha(double value) : value_(value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw AnalysisError("alpha must be a finite non-negative number");
}

bool sameCost(double a, double b) {
    if (a == b)
        return true;
    return std::abs(a - b) <= kPathTieTolerance * std::max(std::abs(a), std::abs(b));
}

double edgeCost(double weight, Alpha alpha) {
    if (alpha.value() == 0.0)
        return 1.0;
    if (alpha.value() == 1.0)
        return 1.0 / weight;
    return 1.0 / std::pow(weight, alpha.value());
}

namespace {

std::vector<double> edgeCosts(const WeightedCountryGraph &graph, Alpha alpha) {
    std::vector<double> costs;
    costs.reserve(graph.edgeCount());
    for (const auto &e : graph.edges()) {
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw AnalysisError("shortest paths need positive finite weights; edge " + graph.nodes()[e.u] + "-" +
                                graph.nodes()[e.v] + " has " + std::to_string(e.weight));
        costs.push_back(edgeCost(e.weight, alpha));
    }
    return costs;
}

ShortestPaths dijkstra(const WeightedCountryGraph &graph, std::size_t source, const std::vector<double> &costs) {
    const std::size_t n = graph.nodeCount();
    ShortestPaths sp;
    sp.source = source;
    sp.distance.assign(n, std::numeric_limits<double>::infinity());
    sp.pathCount.assign(n, 0.0);
    sp.predecessors.assign(n, {});
    sp.settleOrder.reserve(n);

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    std::vector<bool> settled(n, false);
    sp.distance[source] = 0.0;
    sp.pathCount[source] = 1.0;
    frontier.push({0.0, source});

    while (!frontier.empty()) {
        const auto [d, u] = frontier.top();
        frontier.pop();
        if (settled[u] || d > sp.distance[u])
            continue;
        settled[u] = true;
        sp.settleOrder.push_back(u);
        for (const auto &nb : graph.neighbors(u)) {
            const std::size_t v = nb.node;
            if (settled[v])
                continue;
            const double candidate = d + costs[nb.edge];
            double &current = sp.distance[v];
            if (std::isinf(current) || (candidate < current && !sameCost(candidate, current))) {
                current = candidate;
                sp.pathCount[v] = sp.pathCount[u];
                sp.predecessors[v].assign(1, u);
                frontier.push({candidate, v});
            } else if (sameCost(candidate, current)) {
                sp.pathCount[v] += sp.pathCount[u];
                sp.predecessors[v].push_back(u);
            }
        }
    }
    return sp;
}

void requireSource(const WeightedCountryGraph &graph, std::size_t source) {
    if (source >= graph.nodeCount())
        throw AnalysisError("source node index out of range");
}

} // namespace

ShortestPaths alphaDistances(const WeightedCountryGraph &graph, std::size_t source, Alpha alpha) {
    requireSource(graph, source);
    return dijkstra(graph, source, edgeCosts(graph, alpha));
}

ClosenessResult closeness(const WeightedCountryGraph &graph, Alpha alpha, const ClosenessOptions &options) {
    const auto costs = edgeCosts(graph, alpha);
    const std::size_t n = graph.nodeCount();
    ClosenessResult result{std::vector<double>(n, 0.0), std::vector<std::size_t>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto sp = dijkstra(graph, i, costs);
        if (sp.settleOrder.size() != n && !options.componentRestrict)
            throw NotConnectedError("closeness is undefined on a disconnected graph ('" + graph.nodes()[i] +
                                    "' reaches " + std::to_string(sp.settleOrder.size()) + " of " +
                                    std::to_string(n) + " nodes); use component restriction");
        double total = 0.0;
        for (std::size_t j : sp.settleOrder)
            total += sp.distance[j];
        result.score[i] = total > 0.0 ? 1.0 / total : 0.0;
        result.componentSize[i] = sp.settleOrder.size();
    }
    return result;
}

std::vector<double> betweenness(const WeightedCountryGraph &graph, Alpha alpha) {
    const auto costs = edgeCosts(graph, alpha);
    const std::size_t n = graph.nodeCount();
    std::vector<double> score(n, 0.0);
    std::vector<double> dependency(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto sp = dijkstra(graph, s, costs);
        std::fill(dependency.begin(), dependency.end(), 0.0);
        for (auto it = sp.settleOrder.rbegin(); it != sp.settleOrder.rend(); ++it) {
            const std::size_t w = *it;
            for (std::size_t v : sp.predecessors[w])
                dependency[v] += sp.pathCount[v] / sp.pathCount[w] * (1.0 + dependency[w]);
            if (w != s)
                score[w] += dependency[w];
        }
    }
    // Every unordered pair was visited from both ends.
    for (auto &x : score)
        x /= 2.0;
    return score;
}

std::vector<double> eigenvectorCentrality(const WeightedCountryGraph &graph, const EigenvectorOptions &options) {
    const std::size_t n = graph.nodeCount();
    if (n == 0)
        throw NotConnectedError("eigenvector centrality of an empty graph");
    if (!graph.isConnected())
        throw NotConnectedError("eigenvector centrality needs a connected graph");
    for (const auto &e : graph.edges())
        if (!(e.weight > 0.0))
            throw AnalysisError("eigenvector centrality needs positive weights");

    std::vector<double> x(n, 1.0);
    std::vector<double> next(n);
    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < options.maxIterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = x[i];
            for (const auto &nb : graph.neighbors(i))
                acc += graph.edges()[nb.edge].weight * x[nb.node];
            next[i] = acc;
        }
        const double top = *std::max_element(next.begin(), next.end());
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= top;
            residual = std::max(residual, std::abs(next[i] - x[i]));
        }
        x.swap(next);
        if (residual < options.tolerance)
            return x;
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(options.maxIterations) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual);
}

CentralityScores computeCentrality(const WeightedCountryGraph &graph, Alpha alpha, const ClosenessOptions &options) {
    auto close = closeness(graph, alpha, options);
    CentralityScores scores;
    scores.nodes = graph.nodes();
    scores.closeness = std::move(close.score);
    scores.componentSize = std::move(close.componentSize);
    scores.betweenness = betweenness(graph, alpha);
    scores.alpha = alpha.value();
    scores.fingerprint = graph.fingerprint();
    return scores;
}

std::vector<CentralityScores> alphaSweep(const WeightedCountryGraph &graph, std::span<const double> grid,
                                         const ClosenessOptions &options) {
    std::vector<CentralityScores> runs;
    runs.reserve(grid.size());
    for (double a : grid)
        runs.push_back(computeCentrality(graph, Alpha(a), options));
    return runs;
}

Table centralityTable(std::span<const CentralityScores> runs) {
    Table table{{"country", "closeness", "betweenness", "alpha"}, {}};
    for (const auto &run : runs)
        for (std::size_t i = 0; i < run.nodes.size(); ++i)
            table.rows.push_back({run.nodes[i], run.closeness[i], run.betweenness[i], run.alpha});
    return table;
}

} // namespace coconsume
