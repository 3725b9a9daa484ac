#include "coconsume/openness.hpp"

#include "coconsume/error.hpp"

#include <algorithm>

namespace coconsume {

namespace {

using OverlapList = std::vector<std::pair<std::size_t, std::size_t>>; // (country, shared items)

OverlapList overlapsOf(const BipartiteGraph &graph, std::size_t country) {
    std::vector<std::size_t> counts(graph.countryCount(), 0);
    for (std::size_t item : graph.itemsOf(country))
        for (std::size_t other : graph.countriesOf(item))
            if (other != country)
                ++counts[other];
    OverlapList list;
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] > 0)
            list.emplace_back(c, counts[c]);
    return list;
}

std::vector<std::size_t> membersOf(const OverlapList &list) {
    std::vector<std::size_t> members;
    members.reserve(list.size());
    for (const auto &[c, n] : list)
        members.push_back(c);
    return members;
}

double jaccardDistance(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    std::size_t shared = 0;
    auto p = a.begin();
    auto q = b.begin();
    while (p != a.end() && q != b.end()) {
        if (*p < *q) {
            ++p;
        } else if (*q < *p) {
            ++q;
        } else {
            ++shared;
            ++p;
            ++q;
        }
    }
    const std::size_t united = a.size() + b.size() - shared;
    if (united == 0)
        throw AnalysisError("Jaccard dissimilarity is undefined for two empty neighbour sets");
    return 1.0 - static_cast<double>(shared) / static_cast<double>(united);
}

/// Neighbour sets are computed lazily and cached, since a score touches the
/// sets of every neighbour.
class NeighborhoodCache {
public:
    explicit NeighborhoodCache(const BipartiteGraph &graph)
        : graph_(graph), overlaps_(graph.countryCount()), members_(graph.countryCount()),
          ready_(graph.countryCount(), false) {}

    const OverlapList &overlaps(std::size_t c) {
        fill(c);
        return overlaps_[c];
    }
    const std::vector<std::size_t> &members(std::size_t c) {
        fill(c);
        return members_[c];
    }

private:
    void fill(std::size_t c) {
        if (ready_[c])
            return;
        overlaps_[c] = overlapsOf(graph_, c);
        members_[c] = membersOf(overlaps_[c]);
        ready_[c] = true;
    }

    const BipartiteGraph &graph_;
    std::vector<OverlapList> overlaps_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<bool> ready_;
};

OpennessScore scoreCountry(const BipartiteGraph &graph, NeighborhoodCache &cache, std::size_t country) {
    OpennessScore result;
    result.country = graph.countries()[country];
    const auto &overlaps = cache.overlaps(country);
    result.breadth = overlaps.size();
    if (overlaps.empty())
        return result;

    double total = 0.0;
    for (const auto &[c, n] : overlaps)
        total += static_cast<double>(n);
    std::vector<double> weights;
    weights.reserve(overlaps.size());
    for (const auto &[c, n] : overlaps) {
        weights.push_back(static_cast<double>(n) / total);
        result.neighborWeights.emplace(graph.countries()[c], weights.back());
    }
    double score = 0.0;
    for (std::size_t a = 0; a < overlaps.size(); ++a)
        for (std::size_t b = a + 1; b < overlaps.size(); ++b)
            score += weights[a] * weights[b] *
                     jaccardDistance(cache.members(overlaps[a].first), cache.members(overlaps[b].first));
    result.score = score;
    return result;
}

} // namespace

std::map<std::string, std::size_t> neighborOverlaps(const BipartiteGraph &graph, std::string_view country) {
    const auto c = graph.requireCountry(country);
    std::map<std::string, std::size_t> result;
    for (const auto &[other, n] : overlapsOf(graph, c))
        result.emplace(graph.countries()[other], n);
    return result;
}

double jaccardDissimilarity(const BipartiteGraph &graph, std::string_view i, std::string_view j) {
    const auto a = graph.requireCountry(i);
    const auto b = graph.requireCountry(j);
    return jaccardDistance(membersOf(overlapsOf(graph, a)), membersOf(overlapsOf(graph, b)));
}

OpennessScore compositeOpenness(const BipartiteGraph &graph, std::string_view country) {
    NeighborhoodCache cache(graph);
    return scoreCountry(graph, cache, graph.requireCountry(country));
}

std::vector<OpennessScore> opennessScores(const BipartiteGraph &graph) {
    NeighborhoodCache cache(graph);
    std::vector<OpennessScore> scores;
    scores.reserve(graph.countryCount());
    for (std::size_t c = 0; c < graph.countryCount(); ++c)
        scores.push_back(scoreCountry(graph, cache, c));
    return scores;
}

Table opennessTable(const std::vector<OpennessScore> &scores) {
    Table table{{"country", "breadth", "openness_score"}, {}};
    for (const auto &s : scores)
        table.rows.push_back({s.country, static_cast<std::int64_t>(s.breadth), s.score});
    return table;
}

} // namespace coconsume
