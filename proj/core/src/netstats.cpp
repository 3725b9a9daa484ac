#include "coconsume/netstats.hpp"

#include "coconsume/error.hpp"
#include "coconsume/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

namespace coconsume {

double modularity(const WeightedCountryGraph &graph, const Partition &partition) {
    if (partition.size() != graph.nodeCount())
        throw AnalysisError("partition size does not match the node count");
    double total = 0.0;
    for (const auto &e : graph.edges())
        total += e.weight;
    if (total == 0.0)
        return 0.0;
    const std::size_t k = partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
    std::vector<double> inside(k, 0.0);
    std::vector<double> degreeSum(k, 0.0);
    for (const auto &e : graph.edges()) {
        degreeSum[partition[e.u]] += e.weight;
        degreeSum[partition[e.v]] += e.weight;
        if (partition[e.u] == partition[e.v])
            inside[partition[e.u]] += e.weight;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double share = degreeSum[c] / (2.0 * total);
        q += inside[c] / total - share * share;
    }
    return q;
}

namespace {

Partition canonicalLabels(const std::vector<std::size_t> &raw) {
    std::map<std::size_t, std::size_t> relabel;
    Partition labels(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto [it, inserted] = relabel.emplace(raw[i], relabel.size());
        labels[i] = it->second;
    }
    return labels;
}

} // namespace

Partition detectCommunities(const WeightedCountryGraph &graph, std::uint64_t seed) {
    const std::size_t n = graph.nodeCount();
    double total = 0.0;
    for (const auto &e : graph.edges())
        total += e.weight;

    std::vector<std::size_t> owner(n);
    std::iota(owner.begin(), owner.end(), std::size_t{0});
    if (total <= 0.0)
        return canonicalLabels(owner);

    // Seeded tie-break rank per node; a community inherits its best member rank.
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    Rng rng(seed, 0xC0FFEE);
    for (std::size_t i = n; i > 1; --i)
        std::swap(rank[i - 1], rank[rng.below(i)]);

    std::vector<double> share(n, 0.0); // D_c / 2m
    std::vector<std::map<std::size_t, double>> between(n);
    for (const auto &e : graph.edges()) {
        share[e.u] += e.weight / (2.0 * total);
        share[e.v] += e.weight / (2.0 * total);
        between[e.u][e.v] += e.weight;
        between[e.v][e.u] += e.weight;
    }
    std::vector<bool> alive(n, true);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i)
        members[i] = {i};

    while (true) {
        double bestGain = 0.0;
        std::size_t bestA = n, bestB = n;
        std::pair<std::size_t, std::size_t> bestKey{n, n};
        for (std::size_t a = 0; a < n; ++a) {
            if (!alive[a])
                continue;
            for (const auto &[b, w] : between[a]) {
                if (b <= a)
                    continue;
                const double gain = w / total - 2.0 * share[a] * share[b];
                if (!(gain > 1e-15))
                    continue;
                const std::pair<std::size_t, std::size_t> key = std::minmax(rank[a], rank[b]);
                const double tol = 1e-12 * std::max(std::abs(gain), std::abs(bestGain));
                const bool better = bestA == n || gain > bestGain + tol ||
                                    (std::abs(gain - bestGain) <= tol && key < bestKey);
                if (better) {
                    bestGain = gain;
                    bestA = a;
                    bestB = b;
                    bestKey = key;
                }
            }
        }
        if (bestA == n)
            break;

        // Fold bestB into bestA.
        for (const auto &[x, w] : between[bestB]) {
            if (x == bestA)
                continue;
            between[bestA][x] += w;
            between[x][bestA] += w;
            between[x].erase(bestB);
        }
        between[bestA].erase(bestB);
        between[bestB].clear();
        share[bestA] += share[bestB];
        rank[bestA] = std::min(rank[bestA], rank[bestB]);
        members[bestA].insert(members[bestA].end(), members[bestB].begin(), members[bestB].end());
        members[bestB].clear();
        alive[bestB] = false;
    }

    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t v : members[c])
            owner[v] = c;
    return canonicalLabels(owner);
}

AplScope parseAplScope(std::string_view name) {
    if (name == "components")
        return AplScope::AllComponents;
    if (name == "giant")
        return AplScope::GiantComponent;
    throw IoError("unknown APL scope '" + std::string(name) + "' (expected components or giant)");
}

std::optional<double> averagePathLength(const WeightedCountryGraph &graph, AplScope scope) {
    const std::size_t n = graph.nodeCount();
    const auto [label, count] = graph.components();
    std::optional<std::size_t> giant;
    if (scope == AplScope::GiantComponent && count > 0) {
        std::vector<std::size_t> sizes(count, 0);
        for (std::size_t l : label)
            ++sizes[l];
        giant = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    }

    double hopSum = 0.0;
    double pairs = 0.0;
    std::vector<std::size_t> hops(n);
    constexpr auto unseen = std::numeric_limits<std::size_t>::max();
    for (std::size_t s = 0; s < n; ++s) {
        if (giant && label[s] != *giant)
            continue;
        std::fill(hops.begin(), hops.end(), unseen);
        hops[s] = 0;
        std::queue<std::size_t> queue;
        queue.push(s);
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop();
            for (const auto &nb : graph.neighbors(u)) {
                if (hops[nb.node] != unseen)
                    continue;
                hops[nb.node] = hops[u] + 1;
                queue.push(nb.node);
                if (nb.node > s) {
                    hopSum += static_cast<double>(hops[nb.node]);
                    pairs += 1.0;
                }
            }
        }
    }
    if (pairs == 0.0)
        return std::nullopt;
    return hopSum / pairs;
}

NetworkSummary summarize(const WeightedCountryGraph &graph, const SummaryOptions &options) {
    if (graph.nodeCount() == 0)
        throw EmptyGraphError("cannot summarize an empty graph");
    NetworkSummary s;
    s.nodes = graph.nodeCount();
    s.edges = graph.edgeCount();
    double weightSum = 0.0;
    for (const auto &e : graph.edges())
        weightSum += e.weight;
    for (std::size_t i = 0; i < s.nodes; ++i)
        if (graph.degree(i) > 0)
            ++s.nonIsolatedNodes;
    s.meanDegree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);
    s.meanWeightedDegree = 2.0 * weightSum / static_cast<double>(s.nodes);
    const auto partition = detectCommunities(graph, options.seed);
    s.modularity = modularity(graph, partition);
    s.communities = partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
    s.connectedComponents = graph.components().second;
    s.averagePathLength = averagePathLength(graph, options.aplScope);
    return s;
}

Table netstatsTable(const std::vector<CategorySummary> &rows) {
    Table table{{"category", "nodes", "edges", "degree", "weighted_degree", "modularity", "cc", "apl",
                 "non_isolated_nodes"},
                {}};
    for (const auto &[category, s] : rows) {
        Cell apl = s.averagePathLength ? Cell(*s.averagePathLength) : Cell(std::monostate{});
        table.rows.push_back({category, static_cast<std::int64_t>(s.nodes), static_cast<std::int64_t>(s.edges),
                              s.meanDegree, s.meanWeightedDegree, s.modularity,
                              static_cast<std::int64_t>(s.connectedComponents), apl,
                              static_cast<std::int64_t>(s.nonIsolatedNodes)});
    }
    return table;
}

} // namespace coconsume
